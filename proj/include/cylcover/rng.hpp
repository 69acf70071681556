#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace cylcover {

// splitmix64 finalizer; used to derive independent stream keys.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_tag(std::string_view tag) {
    // FNV-1a
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (char c : tag) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

// Stream key for (experiment seed, purpose tag, replicate index). Replicates are
// reproducible and independent of scheduling order by construction.
inline std::uint64_t stream_key(std::uint64_t seed, std::string_view tag,
                                std::uint64_t replicate = 0) {
    std::uint64_t k = mix64(seed ^ hash_tag(tag));
    return mix64(k + replicate * 0x9E3779B97F4A7C15ULL);
}

// Deterministic generator with hand-rolled variate transforms, so the stream of
// doubles depends only on the key (the engine sequence is fixed by the standard).
class StreamRng {
public:
    explicit StreamRng(std::uint64_t key) : eng_(key), key_(key) {}
    StreamRng(std::uint64_t seed, std::string_view tag, std::uint64_t replicate = 0)
        : StreamRng(stream_key(seed, tag, replicate)) {}

    std::uint64_t key() const { return key_; }

    std::uint64_t next_u64() { return eng_(); }

    // uniform in [0,1)
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // standard exponential via inversion; strictly positive
    double exponential() {
        double u;
        do {
            u = uniform();
        } while (u == 0.0);
        return -std::log1p(-u);
    }

    // standard normal, Marsaglia polar
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

private:
    std::mt19937_64 eng_;
    std::uint64_t key_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace cylcover
