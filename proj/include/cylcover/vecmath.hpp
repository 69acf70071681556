#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "cylcover/errors.hpp"

namespace cylcover {

// Points and vectors in R^d are plain coordinate vectors; d is a runtime value.
using Vec = std::vector<double>;

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

inline double norm2(std::span<const double> a) { return dot(a, a); }

inline double norm(std::span<const double> a) { return std::sqrt(norm2(a)); }

inline double dist2(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double t = a[i] - b[i];
        s += t * t;
    }
    return s;
}

inline double dist(std::span<const double> a, std::span<const double> b) {
    return std::sqrt(dist2(a, b));
}

inline Vec sub(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

inline Vec add(const Vec& a, const Vec& b) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
    return r;
}

inline Vec scale(const Vec& a, double c) {
    Vec r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = c * a[i];
    return r;
}

// r += c*a
inline void axpy(Vec& r, double c, std::span<const double> a) {
    for (std::size_t i = 0; i < a.size(); ++i) r[i] += c * a[i];
}

inline Vec unit_axis(std::size_t d, std::size_t k) {
    Vec e(d, 0.0);
    e[k] = 1.0;
    return e;
}

inline void require_dim(std::size_t got, std::size_t want, const char* where) {
    if (got != want) throw UsageError(std::string(where) + ": dimension mismatch");
}

}  // namespace cylcover
