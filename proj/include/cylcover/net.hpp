#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <unordered_map>
#include <vector>

#include "cylcover/errors.hpp"
#include "cylcover/vecmath.hpp"

namespace cylcover {

/// Bounded target geometry: boxes, balls, explicit point sets, positive
/// scalings and finite unions thereof. All sets are closed.
class GeometrySpec {
public:
    enum class Kind { box, ball, points, scaled, union_ };

    static GeometrySpec box(Vec lo, Vec hi) {
        GeometrySpec s(Kind::box, static_cast<int>(lo.size()));
        if (lo.size() != hi.size() || lo.size() < 2)
            throw UsageError("GeometrySpec::box: bad corners");
        for (std::size_t i = 0; i < lo.size(); ++i)
            if (!(lo[i] <= hi[i])) throw UsageError("GeometrySpec::box: lo > hi");
        s.lo_ = std::move(lo);
        s.hi_ = std::move(hi);
        return s;
    }

    static GeometrySpec ball(Vec center, double radius) {
        GeometrySpec s(Kind::ball, static_cast<int>(center.size()));
        if (center.size() < 2 || !(radius > 0.0))
            throw UsageError("GeometrySpec::ball: bad parameters");
        s.center_ = std::move(center);
        s.radius_ = radius;
        return s;
    }

    static GeometrySpec points(std::vector<Vec> pts) {
        if (pts.empty()) throw UsageError("GeometrySpec::points: empty set");
        GeometrySpec s(Kind::points, static_cast<int>(pts.front().size()));
        for (const auto& p : pts)
            if (static_cast<int>(p.size()) != s.d_)
                throw UsageError("GeometrySpec::points: mixed dimensions");
        s.pts_ = std::move(pts);
        return s;
    }

    static GeometrySpec scaled(GeometrySpec inner, double factor) {
        if (!(factor > 0.0)) throw UsageError("GeometrySpec::scaled: factor must be > 0");
        GeometrySpec s(Kind::scaled, inner.d_);
        s.inner_ = std::make_shared<GeometrySpec>(std::move(inner));
        s.factor_ = factor;
        return s;
    }

    static GeometrySpec union_of(std::vector<GeometrySpec> members) {
        if (members.empty()) throw UsageError("GeometrySpec::union_of: empty union");
        GeometrySpec s(Kind::union_, members.front().d_);
        for (const auto& m : members)
            if (m.d_ != s.d_) throw UsageError("GeometrySpec::union_of: mixed dimensions");
        s.members_ = std::move(members);
        return s;
    }

    Kind kind() const { return kind_; }
    int dim() const { return d_; }

    /// Membership of x. With continuum_only, points-variant members never match
    /// (used when filtering lattice candidates; explicit points are injected
    /// as candidates directly).
    bool contains(std::span<const double> x, bool continuum_only = false) const {
        switch (kind_) {
            case Kind::box:
                for (int i = 0; i < d_; ++i)
                    if (x[i] < lo_[i] || x[i] > hi_[i]) return false;
                return true;
            case Kind::ball:
                return dist2(x, center_) <= radius_ * radius_;
            case Kind::points:
                if (continuum_only) return false;
                for (const auto& p : pts_)
                    if (std::equal(x.begin(), x.end(), p.begin())) return true;
                return false;
            case Kind::scaled: {
                Vec y(x.begin(), x.end());
                for (auto& c : y) c /= factor_;
                return inner_->contains(y, continuum_only);
            }
            case Kind::union_:
                for (const auto& m : members_)
                    if (m.contains(x, continuum_only)) return true;
                return false;
        }
        return false;
    }

    void bounding_box(Vec& lo, Vec& hi) const {
        switch (kind_) {
            case Kind::box:
                lo = lo_;
                hi = hi_;
                return;
            case Kind::ball:
                lo = center_;
                hi = center_;
                for (int i = 0; i < d_; ++i) {
                    lo[i] -= radius_;
                    hi[i] += radius_;
                }
                return;
            case Kind::points:
                lo = pts_.front();
                hi = pts_.front();
                for (const auto& p : pts_)
                    for (int i = 0; i < d_; ++i) {
                        lo[i] = std::min(lo[i], p[i]);
                        hi[i] = std::max(hi[i], p[i]);
                    }
                return;
            case Kind::scaled:
                inner_->bounding_box(lo, hi);
                for (int i = 0; i < d_; ++i) {
                    lo[i] *= factor_;
                    hi[i] *= factor_;
                }
                return;
            case Kind::union_: {
                members_.front().bounding_box(lo, hi);
                Vec l2, h2;
                for (std::size_t k = 1; k < members_.size(); ++k) {
                    members_[k].bounding_box(l2, h2);
                    for (int i = 0; i < d_; ++i) {
                        lo[i] = std::min(lo[i], l2[i]);
                        hi[i] = std::max(hi[i], h2[i]);
                    }
                }
                return;
            }
        }
    }

    bool has_continuum() const {
        switch (kind_) {
            case Kind::box:
            case Kind::ball: return true;
            case Kind::points: return false;
            case Kind::scaled: return inner_->has_continuum();
            case Kind::union_:
                for (const auto& m : members_)
                    if (m.has_continuum()) return true;
                return false;
        }
        return false;
    }

    /// Explicit points contributed by points-variant members, with scalings applied.
    void collect_points(std::vector<Vec>& out, double factor = 1.0) const {
        switch (kind_) {
            case Kind::points:
                for (const auto& p : pts_) out.push_back(scale(p, factor));
                return;
            case Kind::scaled:
                inner_->collect_points(out, factor * factor_);
                return;
            case Kind::union_:
                for (const auto& m : members_) m.collect_points(out, factor);
                return;
            default: return;
        }
    }

private:
    GeometrySpec(Kind k, int d) : kind_(k), d_(d) {}

    Kind kind_;
    int d_;
    Vec lo_, hi_;
    Vec center_;
    double radius_ = 0.0;
    std::vector<Vec> pts_;
    std::shared_ptr<const GeometrySpec> inner_;
    double factor_ = 1.0;
    std::vector<GeometrySpec> members_;
};

/// Deterministic rho-separated net: greedy lexicographic sweep over the
/// candidate set, kept points stored flat (count() * dim doubles). For lattice
/// candidates the separation test runs in integer lattice units (|dm| >= K),
/// which is exact and commutes with any positive scaling of the spec; explicit
/// points are compared by exact floating-point squared distance.
struct Net {
    double rho = 0.0;
    int K = 8;  // lattice resolution divisor of the rule
    int d = 0;
    std::vector<double> coords;

    std::size_t count() const { return d ? coords.size() / d : 0; }
    std::span<const double> point(std::size_t i) const {
        return {coords.data() + i * d, static_cast<std::size_t>(d)};
    }
};

inline constexpr std::uint64_t kCandidateCap = 100'000'000;

namespace detail {

// Visits the candidate set of (spec, rho, K) in ascending lexicographic order:
// the (rho/K)-lattice restricted to the continuum part, merged with explicit
// points of points-variant members. Lattice coordinates are (m * rho) / K and
// the lattice index vector is passed alongside (nullptr for explicit points).
// Exact coordinate duplicates are visited once.
template <typename F>
void for_each_candidate(const GeometrySpec& spec, double rho, int K, F&& visit) {
    const int d = spec.dim();

    std::vector<Vec> explicit_pts;
    spec.collect_points(explicit_pts);
    std::sort(explicit_pts.begin(), explicit_pts.end());
    explicit_pts.erase(std::unique(explicit_pts.begin(), explicit_pts.end()),
                       explicit_pts.end());
    std::size_t ep = 0;

    if (!spec.has_continuum()) {
        for (const auto& p : explicit_pts) visit(p, nullptr);
        return;
    }

    Vec lo, hi;
    spec.bounding_box(lo, hi);
    std::vector<std::int64_t> mlo(d), mhi(d);
    double est = 1.0;
    for (int i = 0; i < d; ++i) {
        mlo[i] = static_cast<std::int64_t>(std::floor(lo[i] * K / rho)) - 1;
        mhi[i] = static_cast<std::int64_t>(std::ceil(hi[i] * K / rho)) + 1;
        est *= static_cast<double>(mhi[i] - mlo[i] + 1);
    }
    if (est > static_cast<double>(kCandidateCap))
        throw ResourceError("build_net: candidate lattice exceeds cap");

    std::vector<std::int64_t> m(mlo);
    Vec x(d);
    const auto emit = [&](const Vec& p, const std::int64_t* mm) {
        // merge explicit points arriving before p
        while (ep < explicit_pts.size() && explicit_pts[ep] < p)
            visit(explicit_pts[ep++], nullptr);
        if (ep < explicit_pts.size() && explicit_pts[ep] == p) ++ep;  // dedupe
        visit(p, mm);
    };
    while (true) {
        for (int i = 0; i < d; ++i) x[i] = static_cast<double>(m[i]) * rho / K;
        if (spec.contains(x, /*continuum_only=*/true)) emit(x, m.data());
        int axis = d - 1;
        while (axis >= 0 && m[axis] == mhi[axis]) {
            m[axis] = mlo[axis];
            --axis;
        }
        if (axis < 0) break;
        ++m[axis];
    }
    while (ep < explicit_pts.size()) visit(explicit_pts[ep++], nullptr);
}

// Grid hash over cells of size rho for the greedy separation queries. Kept
// lattice points carry their index vector so lattice-lattice pairs are decided
// exactly in integer units; other pairs use exact fp squared distance.
class SeparationIndex {
public:
    SeparationIndex(int d, double rho, int K)
        : d_(d), rho2_(rho * rho), inv_(1.0 / rho), k2_(static_cast<std::int64_t>(K) * K) {}

    bool far_from_all(const Net& net, std::span<const double> x,
                      const std::int64_t* m) const {
        key_.assign(d_, 0);
        for (int i = 0; i < d_; ++i)
            key_[i] = static_cast<std::int64_t>(std::floor(x[i] * inv_));
        return probe(net, x, m, 0);
    }

    void insert(const Net& net, std::size_t idx, const std::int64_t* m) {
        auto p = net.point(idx);
        std::uint64_t hsh = 0;
        for (int i = 0; i < d_; ++i)
            hsh = mix_cell(hsh, static_cast<std::int64_t>(std::floor(p[i] * inv_)));
        cells_[hsh].push_back(idx);
        if (m) {
            lattice_m_.resize((idx + 1) * d_, kNoLattice);
            std::copy(m, m + d_, lattice_m_.begin() + idx * d_);
        } else {
            lattice_m_.resize((idx + 1) * d_, kNoLattice);
        }
    }

private:
    static constexpr std::int64_t kNoLattice = std::numeric_limits<std::int64_t>::min();

    static std::uint64_t mix_cell(std::uint64_t h, std::int64_t c) {
        h ^= static_cast<std::uint64_t>(c) + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2);
        return h;
    }

    bool separated(const Net& net, std::span<const double> x, const std::int64_t* m,
                   std::size_t idx) const {
        const std::int64_t* km = &lattice_m_[idx * d_];
        if (m && km[0] != kNoLattice) {
            std::int64_t s = 0;
            for (int i = 0; i < d_; ++i) {
                const std::int64_t dm = m[i] - km[i];
                s += dm * dm;
            }
            return s >= k2_;
        }
        return dist2(x, net.point(idx)) >= rho2_;
    }

    bool probe(const Net& net, std::span<const double> x, const std::int64_t* m,
               int axis) const {
        if (axis == d_) {
            std::uint64_t hsh = 0;
            for (int i = 0; i < d_; ++i) hsh = mix_cell(hsh, key_[i]);
            auto it = cells_.find(hsh);
            if (it == cells_.end()) return true;
            for (std::size_t idx : it->second)
                if (!separated(net, x, m, idx)) return false;
            return true;
        }
        const std::int64_t base = key_[axis];
        for (std::int64_t off = -1; off <= 1; ++off) {
            key_[axis] = base + off;
            if (!probe(net, x, m, axis + 1)) {
                key_[axis] = base;
                return false;
            }
        }
        key_[axis] = base;
        return true;
    }

    int d_;
    double rho2_;
    double inv_;
    std::int64_t k2_;
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> cells_;
    std::vector<std::int64_t> lattice_m_;
    mutable std::vector<std::int64_t> key_;
};

}  // namespace detail

/// Greedy inclusion-maximal rho-separated net over the (rho/K)-lattice
/// candidates of the spec (explicit points for points variants), swept in
/// lexicographic order. A candidate is kept iff it is >= rho away from every
/// kept point; the comparison is exact (integer lattice units between lattice
/// candidates). The construction is deterministic and commutes with positive
/// scalings of the spec.
inline Net build_net(const GeometrySpec& spec, double rho, int K = 8) {
    if (!(rho > 0.0)) throw UsageError("build_net: rho must be positive");
    if (K < 2) throw UsageError("build_net: K must be >= 2");
    Net net;
    net.rho = rho;
    net.K = K;
    net.d = spec.dim();
    detail::SeparationIndex index(net.d, rho, K);
    detail::for_each_candidate(spec, rho, K, [&](const Vec& x, const std::int64_t* m) {
        if (index.far_from_all(net, x, m)) {
            net.coords.insert(net.coords.end(), x.begin(), x.end());
            index.insert(net, net.count() - 1, m);
        }
    });
    if (net.count() == 0) throw UsageError("build_net: spec produced no candidates");
    return net;
}

inline std::size_t net_count(const GeometrySpec& spec, double rho, int K = 8) {
    return build_net(spec, rho, K).count();
}

/// Re-enumerates the candidate set of a build (for covering-property checks).
template <typename F>
void visit_candidates(const GeometrySpec& spec, double rho, int K, F&& f) {
    detail::for_each_candidate(spec, rho, K,
                               [&](const Vec& x, const std::int64_t*) { f(x); });
}

/// Least-squares box-dimension estimate from log|A^rho| against -log(rho).
struct DimFitPoint {
    double rho;
    std::size_t count;
    double local_slope;  // slope to the previous (larger) rho; NaN for the first
};

struct DimFit {
    double slope = 0.0;
    double residual_rms = 0.0;
    std::vector<DimFitPoint> points;
};

inline DimFit box_dimension_fit(const GeometrySpec& spec, const std::vector<double>& rho_list,
                                int K = 8) {
    std::vector<double> rhos = rho_list;
    std::sort(rhos.begin(), rhos.end(), std::greater<>());
    rhos.erase(std::unique(rhos.begin(), rhos.end()), rhos.end());
    if (rhos.size() < 3) throw UsageError("box_dimension_fit: need >= 3 distinct rho values");
    DimFit fit;
    std::vector<double> xs, ys;
    for (double rho : rhos) {
        const std::size_t n = net_count(spec, rho, K);
        xs.push_back(-std::log(rho));
        ys.push_back(std::log(static_cast<double>(n)));
        DimFitPoint p{rho, n, std::numeric_limits<double>::quiet_NaN()};
        if (fit.points.size() >= 1) {
            const auto& prev = fit.points.back();
            p.local_slope = (ys.back() - std::log(static_cast<double>(prev.count))) /
                            (xs.back() + std::log(prev.rho));
        }
        fit.points.push_back(p);
    }
    const std::size_t n = xs.size();
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    fit.slope = sxy / sxx;
    const double icept = my - fit.slope * mx;
    double rss = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = ys[i] - (icept + fit.slope * xs[i]);
        rss += e * e;
    }
    fit.residual_rms = std::sqrt(rss / n);
    return fit;
}

/// The sequence rho^dim * |A^rho| with its observed extremes; the desk-scale
/// stand-in for the content constant c_A.
struct ContentDiagnostic {
    std::vector<double> rhos;
    std::vector<double> values;
    double min_value = 0.0;
    double max_value = 0.0;
};

inline ContentDiagnostic content_constant(const GeometrySpec& spec, double dim,
                                          const std::vector<double>& rho_list, int K = 8) {
    if (!(dim >= 0.0)) throw UsageError("content_constant: dim must be >= 0");
    ContentDiagnostic out;
    out.min_value = std::numeric_limits<double>::infinity();
    out.max_value = -std::numeric_limits<double>::infinity();
    for (double rho : rho_list) {
        const double v =
            std::pow(rho, dim) * static_cast<double>(net_count(spec, rho, K));
        out.rhos.push_back(rho);
        out.values.push_back(v);
        out.min_value = std::min(out.min_value, v);
        out.max_value = std::max(out.max_value, v);
    }
    return out;
}

/// Packing statistics of a net around one of its points: annulus counts
/// N(rho,r) = |net ∩ (B(y,r+1) \ B(y,r))|, cumulative ball counts, the
/// inverse-distance sum S(y), and the normalized ratios whose boundedness the
/// packing bounds assert.
struct PackingProfile {
    int r_max = 0;
    std::vector<std::size_t> annulus;      // index r = 1..r_max
    std::vector<std::size_t> ball;         // index r = 1..r_max
    std::vector<double> annulus_ratio;     // N(rho,r) rho^d / r^{d-1}
    std::vector<double> ball_ratio;        // |B(y,r) ∩ net| rho^d / r^d
    double inv_dist_sum = 0.0;             // S(y)
    double inv_dist_ratio = 0.0;           // S(y) rho^d / |net|^{1/d}
};

inline PackingProfile packing_profile(const Net& net, const Vec& y) {
    bool member = false;
    for (std::size_t i = 0; i < net.count(); ++i) {
        auto p = net.point(i);
        if (std::equal(y.begin(), y.end(), p.begin())) {
            member = true;
            break;
        }
    }
    if (!member) throw UsageError("packing_profile: y is not a net point");

    PackingProfile out;
    std::vector<double> dists;
    dists.reserve(net.count());
    double dmax = 0.0;
    for (std::size_t i = 0; i < net.count(); ++i) {
        const double dv = dist(y, net.point(i));
        dists.push_back(dv);
        dmax = std::max(dmax, dv);
    }
    out.r_max = static_cast<int>(std::ceil(dmax));
    out.annulus.assign(out.r_max + 1, 0);
    out.ball.assign(out.r_max + 1, 0);
    const int dd = net.d;
    for (double dv : dists) {
        // dv in (r, r+1]  <=>  r = ceil(dv) - 1; dv <= r  <=>  ceil(dv) <= r
        const int c = static_cast<int>(std::ceil(dv));
        if (c - 1 >= 1 && c - 1 <= out.r_max) ++out.annulus[c - 1];
        if (c <= out.r_max) ++out.ball[c];
        if (dv >= 1.0) out.inv_dist_sum += std::pow(dv, 1 - dd);
    }
    for (int r = 1; r <= out.r_max; ++r) out.ball[r] += out.ball[r - 1];
    const double rd = std::pow(net.rho, dd);
    out.annulus_ratio.assign(out.r_max + 1, 0.0);
    out.ball_ratio.assign(out.r_max + 1, 0.0);
    for (int r = 1; r <= out.r_max; ++r) {
        out.annulus_ratio[r] = static_cast<double>(out.annulus[r]) * rd /
                               std::pow(static_cast<double>(r), dd - 1);
        out.ball_ratio[r] =
            static_cast<double>(out.ball[r]) * rd / std::pow(static_cast<double>(r), dd);
    }
    out.inv_dist_ratio =
        out.inv_dist_sum * rd / std::pow(static_cast<double>(net.count()), 1.0 / dd);
    return out;
}

}  // namespace cylcover
