#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include "cylcover/errors.hpp"
#include "cylcover/rng.hpp"
#include "cylcover/vecmath.hpp"

namespace cylcover {

inline constexpr double kUnitNormTol = 1e-12;
inline constexpr double kOrthoTol = 1e-10;

/// Direction of a bi-infinite line, identified with its antipode. Stored as a
/// unit vector with canonical sign: the first coordinate of magnitude > 1e-12
/// is positive.
class Direction {
public:
    explicit Direction(Vec u) : u_(std::move(u)) {
        const double n = norm(u_);
        if (u_.size() < 2 || !(std::abs(n - 1.0) <= 1e-9))
            throw UsageError("Direction: not a unit vector");
        for (auto& c : u_) c /= n;
        canonicalize(u_);
    }

    static void canonicalize(Vec& u) {
        for (double c : u) {
            if (std::abs(c) > kUnitNormTol) {
                if (c < 0.0)
                    for (auto& x : u) x = -x;
                return;
            }
        }
    }

    const Vec& u() const { return u_; }
    std::size_t dim() const { return u_.size(); }

private:
    Vec u_;
};

/// Affine line {offset + s*dir}. The stored offset is the orthogonal projection
/// of any construction offset onto dir^perp, so <offset, dir> = 0 holds to
/// 1e-10 and the represented point set does not depend on the input parametrization.
class Line {
public:
    Line(Direction dir, Vec offset) : dir_(std::move(dir)), offset_(std::move(offset)) {
        require_dim(offset_.size(), dir_.dim(), "Line");
        axpy(offset_, -dot(offset_, dir_.u()), dir_.u());
    }

    const Direction& dir() const { return dir_; }
    const Vec& offset() const { return offset_; }
    std::size_t dim() const { return dir_.dim(); }

private:
    Direction dir_;
    Vec offset_;
};

struct TimedLine {
    Line line;
    double timestamp;  // arrival time, >= 0
};

/// Ball window the line process is restricted to.
struct Window {
    Vec center;
    double radius;

    Window(Vec c, double r) : center(std::move(c)), radius(r) {
        if (!(r > 0.0)) throw UsageError("Window: radius must be positive");
    }
    std::size_t dim() const { return center.size(); }
};

/// Euclidean distance from x to the line.
inline double distance_point_line(std::span<const double> x, const Line& l) {
    require_dim(x.size(), l.dim(), "distance_point_line");
    double d2 = 0.0, p = 0.0;
    const Vec& y = l.offset();
    const Vec& u = l.dir().u();
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double t = x[i] - y[i];
        d2 += t * t;
        p += t * u[i];
    }
    return std::sqrt(std::max(0.0, d2 - p * p));
}

/// B(x,rho) contained in the unit-radius cylinder around l (closed condition).
/// rho = 0 is plain cover: x inside the cylinder.
inline bool covers(const Line& l, std::span<const double> x, double rho = 0.0) {
    if (!(rho >= 0.0 && rho < 1.0)) throw UsageError("covers: rho must be in [0,1)");
    return distance_point_line(x, l) <= 1.0 - rho;
}

/// Orthonormal basis of u^perp: columns e_1..e_{d-1} of the Householder
/// reflection taking e_d to u. Deterministic; the u ~ +e_d branch falls back to
/// the identity basis.
inline std::vector<Vec> complement_basis(const Direction& dir) {
    const Vec& u = dir.u();
    const std::size_t d = u.size();
    std::vector<Vec> basis(d - 1);
    if (1.0 - u[d - 1] < 1e-12) {
        for (std::size_t i = 0; i + 1 < d; ++i) basis[i] = unit_axis(d, i);
        return basis;
    }
    Vec v = u;
    v[d - 1] -= 1.0;  // v = u - e_d
    const double vn2 = norm2(v);
    for (std::size_t i = 0; i + 1 < d; ++i) {
        Vec b = unit_axis(d, i);
        axpy(b, -2.0 * v[i] / vn2, v);
        basis[i] = std::move(b);
    }
    return basis;
}

/// mu_{d,1}(L_W) = radius^{d-1}: the unit-rate arrival intensity of lines
/// hitting the window.
inline double window_intensity(const Window& w) {
    return std::pow(w.radius, static_cast<double>(w.dim() - 1));
}

/// Exact draw from mu_{d,1}(. | L_W): direction uniform on the sphere, offset
/// uniform in the (d-1)-ball the window projects to in dir^perp. No rejection.
inline Line sample_line_hitting(const Window& w, StreamRng& rng) {
    const std::size_t d = w.dim();
    Vec g(d);
    double n2;
    do {
        for (auto& c : g) c = rng.normal();
        n2 = norm2(g);
    } while (n2 < 1e-24);
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& c : g) c *= inv;
    Direction dir(std::move(g));

    // uniform point of the (d-1)-ball of radius w.radius, in basis coordinates
    const std::size_t m = d - 1;
    Vec b(m);
    double bn2;
    do {
        for (auto& c : b) c = rng.normal();
        bn2 = norm2(b);
    } while (bn2 < 1e-24);
    const double r = w.radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(m));
    const double f = r / std::sqrt(bn2);

    Vec offset = w.center;  // Line ctor projects out the dir component
    const auto basis = complement_basis(dir);
    for (std::size_t i = 0; i < m; ++i) axpy(offset, f * b[i], basis[i]);
    return Line(std::move(dir), std::move(offset));
}

/// Lazy unbounded stream of TimedLine with i.i.d. exponential inter-arrivals at
/// rate window_intensity(W) and lines i.i.d. from sample_line_hitting.
/// Deterministic replay for a given rng key; strictly increasing timestamps.
class LineStream {
public:
    LineStream(Window w, StreamRng rng)
        : window_(std::move(w)), rng_(std::move(rng)), rate_(window_intensity(window_)) {}

    TimedLine next() {
        t_ += rng_.exponential() / rate_;
        return TimedLine{sample_line_hitting(window_, rng_), t_};
    }

    const Window& window() const { return window_; }
    double rate() const { return rate_; }

private:
    Window window_;
    StreamRng rng_;
    double rate_;
    double t_ = 0.0;
};

}  // namespace cylcover
