#pragma once

#include <array>
#include <cmath>
#include <concepts>
#include <vector>

namespace cylcover {

struct QuadResult {
    double value = 0.0;
    double abs_error = 0.0;
    int evaluations = 0;
};

namespace detail {

// 15-point Kronrod nodes on [0,1] side (symmetric) and weights; the embedded
// 7-point Gauss rule sits on the odd-index nodes.
inline constexpr std::array<double, 8> kXgk = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
inline constexpr std::array<double, 8> kWgk = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
inline constexpr std::array<double, 4> kWg = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

template <std::invocable<double> F>
void gk15(F&& f, double a, double b, double& kronrod, double& err, int& evals) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    const double fc = f(c);
    double resk = kWgk[7] * fc;
    double resg = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double x = h * kXgk[j];
        const double fsum = f(c - x) + f(c + x);
        resk += kWgk[j] * fsum;
        if (j % 2 == 1) resg += kWg[j / 2] * fsum;
    }
    evals += 15;
    kronrod = resk * h;
    err = std::abs((resk - resg) * h);
}

}  // namespace detail

/// Adaptive Gauss-Kronrod 15(7) on [a,b] to absolute tolerance abs_tol.
/// Bisects the worst interval until the summed error estimate is within
/// tolerance or the interval budget runs out.
template <std::invocable<double> F>
QuadResult integrate(F&& f, double a, double b, double abs_tol = 1e-10,
                     int max_intervals = 2000) {
    struct Seg {
        double a, b, val, err;
    };
    QuadResult out;
    if (a == b) return out;
    std::vector<Seg> segs;
    double v, e;
    detail::gk15(f, a, b, v, e, out.evaluations);
    segs.push_back({a, b, v, e});
    double total_err = e;
    while (total_err > abs_tol && static_cast<int>(segs.size()) < max_intervals) {
        std::size_t worst = 0;
        for (std::size_t i = 1; i < segs.size(); ++i)
            if (segs[i].err > segs[worst].err) worst = i;
        Seg s = segs[worst];
        const double m = 0.5 * (s.a + s.b);
        Seg l{s.a, m, 0, 0}, r{m, s.b, 0, 0};
        detail::gk15(f, l.a, l.b, l.val, l.err, out.evaluations);
        detail::gk15(f, r.a, r.b, r.val, r.err, out.evaluations);
        segs[worst] = l;
        segs.push_back(r);
        total_err += l.err + r.err - s.err;
    }
    double sum = 0.0;
    total_err = 0.0;
    for (const auto& s : segs) {
        sum += s.val;
        total_err += s.err;
    }
    out.value = sum;
    out.abs_error = total_err;
    return out;
}

}  // namespace cylcover
