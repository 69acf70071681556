#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "cylcover/errors.hpp"

namespace cylcover {

/// Empirical CDF over a sorted sample.
struct Ecdf {
    std::vector<double> values;  // ascending

    explicit Ecdf(std::vector<double> sample) : values(std::move(sample)) {
        if (values.empty()) throw UsageError("Ecdf: empty sample");
        std::sort(values.begin(), values.end());
    }

    std::size_t n() const { return values.size(); }

    double operator()(double x) const {
        const auto it = std::upper_bound(values.begin(), values.end(), x);
        return static_cast<double>(it - values.begin()) / static_cast<double>(values.size());
    }
};

/// One-sample Kolmogorov-Smirnov distance between the ECDF and a continuous CDF.
template <typename Cdf>
double ks_distance(const Ecdf& sample, Cdf&& cdf) {
    const std::size_t n = sample.n();
    double ks = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double f = cdf(sample.values[i]);
        const double hi = static_cast<double>(i + 1) / n - f;
        const double lo = f - static_cast<double>(i) / n;
        ks = std::max({ks, hi, lo});
    }
    return ks;
}

/// Standard Gumbel CDF exp(-e^{-z}).
inline double gumbel_cdf(double z) { return std::exp(-std::exp(-z)); }

/// Linear-interpolation quantile of a sample (need not be sorted).
inline double quantile(std::vector<double> v, double p) {
    if (v.empty()) throw UsageError("quantile: empty sample");
    std::sort(v.begin(), v.end());
    const double idx = p * static_cast<double>(v.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(idx));
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    const double w = idx - static_cast<double>(lo);
    return (1.0 - w) * v[lo] + w * v[hi];
}

inline double median(std::vector<double> v) { return quantile(std::move(v), 0.5); }

}  // namespace cylcover
