#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>

#include "cylcover/errors.hpp"
#include "cylcover/geometry.hpp"
#include "cylcover/quadrature.hpp"
#include "cylcover/rng.hpp"
#include "cylcover/special.hpp"

namespace cylcover {

enum class Method { closed_form, quadrature, monte_carlo };

inline const char* to_string(Method m) {
    switch (m) {
        case Method::closed_form: return "closed_form";
        case Method::quadrature: return "quadrature";
        case Method::monte_carlo: return "monte_carlo";
    }
    return "?";
}

/// A mu_{d,1} hitting-measure quantity together with how it was obtained and
/// an error estimate (quadrature estimate or MC standard error).
struct MeasureValue {
    double value = 0.0;
    Method method = Method::closed_form;
    double abs_error = 0.0;
    std::uint64_t n_samples = 0;
};

/// gamma(rho) = (1-rho)^{d-1} = mu(L_{B(x,1-rho)}), the singular-cover rate.
inline double gamma_rho(double rho, int d) {
    if (!(rho >= 0.0 && rho < 1.0)) throw UsageError("gamma_rho: rho must be in [0,1)");
    if (d < 2) throw UsageError("gamma_rho: d must be >= 2");
    return std::pow(1.0 - rho, d - 1);
}

/// Dimension-dependent constants used across the bounds.
struct DimConstants {
    int d;
    double C_d;        // sqrt(1 - 4^{-1/(d-2)}), interpreted as 1 for d = 2
    double C_tilde_d;  // C_d / (12 (1 + C_d))
    double kappa_d;    // unit-ball volume
    double D_d;        // int_0^1 t^{d/2-1} (1-t)^{-1/2} dt = B(d/2, 1/2)
};

inline DimConstants dim_constants(int d) {
    if (d < 2) throw UsageError("dim_constants: d must be >= 2");
    DimConstants c;
    c.d = d;
    c.C_d = (d == 2) ? 1.0 : std::sqrt(1.0 - std::pow(4.0, -1.0 / (d - 2)));
    c.C_tilde_d = c.C_d / (12.0 * (1.0 + c.C_d));
    c.kappa_d = std::exp(0.5 * d * std::log(std::numbers::pi) - std::lgamma(0.5 * d + 1.0));
    c.D_d = beta_fn(0.5 * d, 0.5);
    return c;
}

/// mu(L_{B(o,1)} \cap L_{B(r e1,1)}): measure of lines hitting both unit balls
/// at center distance r. One-dimensional quadrature of the regularized
/// incomplete beta kernel against the first-coordinate law of a uniform sphere
/// direction; the t = sin(theta) substitution removes the d = 2 endpoint
/// singularity. Projections are disjoint where r^2 cos^2(theta) > 4, so the
/// integrand vanishes there and the domain is clipped accordingly.
inline MeasureValue pair_hit_measure(double r, int d, double abs_tol = 1e-9) {
    if (!(r >= 0.0)) throw UsageError("pair_hit_measure: r must be >= 0");
    if (d < 2) throw UsageError("pair_hit_measure: d must be >= 2");
    const double norm = beta_fn(0.5, 0.5 * (d - 1));
    const double half_pi = 0.5 * std::numbers::pi;
    const double theta_lo = (r > 2.0) ? std::acos(2.0 / r) : 0.0;
    const auto f = [&](double theta) {
        const double ct = std::cos(theta);
        const double x = 1.0 - 0.25 * r * r * ct * ct;
        if (x <= 0.0) return 0.0;
        const double j = reg_inc_beta(std::min(x, 1.0), 0.5 * d, 0.5);
        return d == 2 ? j : j * std::pow(ct, d - 2);
    };
    const QuadResult q = integrate(f, theta_lo, half_pi, 0.5 * abs_tol * norm);
    MeasureValue mv;
    mv.method = Method::quadrature;
    mv.value = 2.0 * q.value / norm;
    mv.abs_error = 2.0 * q.abs_error / norm;
    return mv;
}

/// mu(L_{B(x,1-rho)} \cup L_{B(y,1-rho)}) for centers at distance r, via the
/// scaling identity: gamma(rho) * mu(L_{B(x',1)} \cup L_{B(y',1)}) with
/// d(x',y') = r/(1-rho).
inline MeasureValue pair_union_measure(double r, int d, double rho) {
    if (!(rho >= 0.0 && rho < 1.0)) throw UsageError("pair_union_measure: rho must be in [0,1)");
    const double g = gamma_rho(rho, d);
    MeasureValue ph = pair_hit_measure(r / (1.0 - rho), d);
    MeasureValue mv;
    mv.method = Method::quadrature;
    mv.value = g * (2.0 - ph.value);
    mv.abs_error = g * ph.abs_error;
    return mv;
}

/// beta(rho,k) = mu(L_{B(o,1) \cup B((2^k rho/(1-rho)) e1, 1)}); the normalized
/// union measure of two (1-rho)-balls at dyadic distance 2^k rho.
inline double beta_ratio(double rho, int k, int d) {
    if (!(rho > 0.0 && rho < 1.0)) throw UsageError("beta_ratio: rho must be in (0,1)");
    if (k < 0) throw UsageError("beta_ratio: k must be >= 0");
    const double r = std::ldexp(rho, k) / (1.0 - rho);
    return 2.0 - pair_hit_measure(r, d).value;
}

/// alpha(rho,k) = mu(L_{B(o,1)} \cup L_{B(2^k rho e1, 1)}).
inline double alpha_ratio(double rho, int k, int d) {
    if (!(rho > 0.0 && rho < 1.0)) throw UsageError("alpha_ratio: rho must be in (0,1)");
    if (k < 0) throw UsageError("alpha_ratio: k must be >= 0");
    return 2.0 - pair_hit_measure(std::ldexp(rho, k), d).value;
}

/// Monte Carlo estimate of mu(L_{B(o,1)} \cap L_{B(r e1,1)}): samples lines
/// hitting the minimal ball window containing both unit balls and counts the
/// fraction hitting both. Unbiased; the second, independent route next to the
/// quadrature kernel.
inline MeasureValue mc_pair_oracle(double r, int d, std::uint64_t n_samples,
                                   std::uint64_t seed) {
    if (!(r >= 0.0)) throw UsageError("mc_pair_oracle: r must be >= 0");
    if (n_samples < 1) throw UsageError("mc_pair_oracle: n_samples must be >= 1");
    Vec center(d, 0.0), a(d, 0.0), b(d, 0.0);
    center[0] = 0.5 * r;
    b[0] = r;
    Window w(center, 0.5 * r + 1.0);
    StreamRng rng(seed, "mc_pair_oracle");
    std::uint64_t hits = 0;
    for (std::uint64_t i = 0; i < n_samples; ++i) {
        const Line l = sample_line_hitting(w, rng);
        if (distance_point_line(a, l) <= 1.0 && distance_point_line(b, l) <= 1.0) ++hits;
    }
    const double intensity = window_intensity(w);
    const double p = static_cast<double>(hits) / static_cast<double>(n_samples);
    MeasureValue mv;
    mv.method = Method::monte_carlo;
    mv.value = intensity * p;
    mv.abs_error = intensity * std::sqrt(p * (1.0 - p) / static_cast<double>(n_samples));
    mv.n_samples = n_samples;
    return mv;
}

}  // namespace cylcover
