#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "cylcover/errors.hpp"
#include "cylcover/geometry.hpp"
#include "cylcover/measure.hpp"
#include "cylcover/net.hpp"
#include "cylcover/rng.hpp"

namespace cylcover {

/// Enclosing ball of the net points (bounding-box center, max-distance radius)
/// inflated by +1, so every line whose unit cylinder reaches any net point hits
/// the window and the restricted process is exact, not truncated.
inline Window enclosing_window(const Net& net, double inflate = 1.0) {
    const int d = net.d;
    Vec lo(net.point(0).begin(), net.point(0).end()), hi = lo;
    for (std::size_t i = 1; i < net.count(); ++i) {
        auto p = net.point(i);
        for (int k = 0; k < d; ++k) {
            lo[k] = std::min(lo[k], p[k]);
            hi[k] = std::max(hi[k], p[k]);
        }
    }
    Vec c(d);
    for (int k = 0; k < d; ++k) c[k] = 0.5 * (lo[k] + hi[k]);
    double rmax = 0.0;
    for (std::size_t i = 0; i < net.count(); ++i)
        rmax = std::max(rmax, dist(c, net.point(i)));
    return Window(std::move(c), rmax + inflate);
}

struct CoverTarget {
    Net net;
    double rho;
    Window window;

    explicit CoverTarget(Net n) : CoverTarget(n, enclosing_window(n)) {}

    CoverTarget(Net n, Window w) : net(std::move(n)), rho(net.rho), window(std::move(w)) {
        for (std::size_t i = 0; i < net.count(); ++i)
            if (dist(window.center, net.point(i)) > window.radius - 1.0 + 1e-9)
                throw UsageError("CoverTarget: window does not enclose net + 1");
    }
};

/// Per-replicate outcome of one coupled line stream: first plain-hit and first
/// singular-hit times per net point, and the induced cover times
/// t_d = max first_hit <= t_w = max first_singular.
struct CoverResult {
    double t_d = 0.0;
    double t_w = 0.0;
    std::vector<double> first_hit;
    std::vector<double> first_singular;
    std::uint64_t lines_used = 0;
    std::uint64_t seed = 0;  // stream key of the replicate
};

struct RunLimits {
    std::uint64_t max_lines = 1'000'000'000;  // safety cap; exceeding is a resource error
    double horizon = std::numeric_limits<double>::infinity();
};

/// Stream-order cover engine. Active (not yet singularly covered) points live
/// in unit-size grid buckets; a line only scans buckets near its tube, found by
/// walking sample points along the line and pruning buckets by center distance.
class CoverEngine {
public:
    explicit CoverEngine(CoverTarget target) : tgt_(std::move(target)) {
        const int d = tgt_.net.d;
        const Vec& c = tgt_.window.center;
        const double R = tgt_.window.radius;
        origin_.resize(d);
        dims_.resize(d);
        double ncells = 1.0;
        for (int k = 0; k < d; ++k) {
            origin_[k] = c[k] - R - 1.0;
            dims_[k] = static_cast<int>(std::ceil(2.0 * (R + 1.0))) + 1;
            ncells *= dims_[k];
        }
        if (ncells > 1e8) throw ResourceError("CoverEngine: cell grid exceeds cap");
        n_cells_ = static_cast<std::size_t>(ncells);
        cells_template_.assign(n_cells_, {});
        for (std::size_t i = 0; i < tgt_.net.count(); ++i)
            cells_template_[cell_index(tgt_.net.point(i))].push_back(
                static_cast<std::uint32_t>(i));
        // bucket pruning radii
        reach_ = 1.0 + 0.5 * std::sqrt(static_cast<double>(d));
        cap_ = std::sqrt(reach_ * reach_ + 0.25);
    }

    const CoverTarget& target() const { return tgt_; }

    /// Run against the window's Poisson line stream from a replicate key.
    CoverResult run(StreamRng rng, RunLimits limits = {}) const {
        LineStream stream(tgt_.window, rng);
        const std::uint64_t key = rng.key();
        auto src = [&stream] { return stream.next(); };
        CoverResult r = run_stream(src, limits);
        r.seed = key;
        return r;
    }

    /// Run against any time-ordered line source (deterministic replays, tests).
    template <typename Source>
    CoverResult run_stream(Source&& next_line, RunLimits limits = {}) const {
        const int d = tgt_.net.d;
        const std::size_t n = tgt_.net.count();
        const double sing2 = (1.0 - tgt_.rho) * (1.0 - tgt_.rho);

        CoverResult res;
        res.first_hit.assign(n, std::numeric_limits<double>::infinity());
        res.first_singular.assign(n, std::numeric_limits<double>::infinity());
        std::vector<std::vector<std::uint32_t>> cells = cells_template_;
        std::vector<std::uint32_t> slot(n);
        for (std::size_t ci = 0; ci < cells.size(); ++ci)
            for (std::size_t s = 0; s < cells[ci].size(); ++s)
                slot[cells[ci][s]] = static_cast<std::uint32_t>(s);

        std::vector<std::uint32_t> visited(n_cells_, 0);
        std::uint32_t epoch = 0;
        std::vector<int> kcur(d), klo(d), khi(d);
        std::size_t remaining = n;
        double t = 0.0;

        while (remaining > 0) {
            const TimedLine tl = next_line();
            if (tl.timestamp > limits.horizon) break;
            if (++res.lines_used > limits.max_lines)
                throw ResourceError("CoverEngine: line-event safety cap exceeded");
            t = tl.timestamp;
            const Vec& u = tl.line.dir().u();
            const Vec& y = tl.line.offset();

            // clip the line to the window ball inflated by the bucket reach
            const double rc = tgt_.window.radius + 1.0 + std::sqrt(static_cast<double>(d));
            double p = 0.0, q = 0.0;
            for (int k = 0; k < d; ++k) {
                const double w = y[k] - tgt_.window.center[k];
                p += w * u[k];
                q += w * w;
            }
            const double disc = p * p - (q - rc * rc);
            if (disc < 0.0) continue;  // cannot happen for sampled lines
            const double s_lo = -p - std::sqrt(disc), s_hi = -p + std::sqrt(disc);

            if (++epoch == 0) {
                std::fill(visited.begin(), visited.end(), 0);
                epoch = 1;
            }
            for (double s = s_lo; s <= s_hi + 1.0; s += 1.0) {
                bool in_grid = true;
                for (int k = 0; k < d; ++k) {
                    const double qk = y[k] + s * u[k];
                    int lo = static_cast<int>(std::ceil(qk - cap_ - origin_[k] - 0.5));
                    int hi = static_cast<int>(std::floor(qk + cap_ - origin_[k] - 0.5));
                    lo = std::max(lo, 0);
                    hi = std::min(hi, dims_[k] - 1);
                    if (lo > hi) {
                        in_grid = false;
                        break;
                    }
                    klo[k] = lo;
                    khi[k] = hi;
                    kcur[k] = lo;
                }
                if (!in_grid) continue;
                while (true) {
                    std::size_t ci = 0;
                    for (int k = 0; k < d; ++k) ci = ci * dims_[k] + kcur[k];
                    if (visited[ci] != epoch) {
                        visited[ci] = epoch;
                        if (!cells[ci].empty() && cell_center_near_line(ci, y, u)) {
                            scan_cell(cells, slot, res, ci, y, u, sing2, t, remaining);
                            if (remaining == 0) break;
                        }
                    }
                    int axis = d - 1;
                    while (axis >= 0 && kcur[axis] == khi[axis]) {
                        kcur[axis] = klo[axis];
                        --axis;
                    }
                    if (axis < 0) break;
                    ++kcur[axis];
                }
                if (remaining == 0) break;
            }
        }

        res.t_d = 0.0;
        res.t_w = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            res.t_d = std::max(res.t_d, res.first_hit[i]);
            res.t_w = std::max(res.t_w, res.first_singular[i]);
        }
        return res;
    }

private:
    std::size_t cell_index(std::span<const double> x) const {
        std::size_t ci = 0;
        for (std::size_t k = 0; k < origin_.size(); ++k) {
            int ik = static_cast<int>(std::floor(x[k] - origin_[k]));
            ik = std::clamp(ik, 0, dims_[k] - 1);
            ci = ci * dims_[k] + ik;
        }
        return ci;
    }

    bool cell_center_near_line(std::size_t ci, const Vec& y, const Vec& u) const {
        const int d = tgt_.net.d;
        double d2 = 0.0, pr = 0.0;
        for (int k = d - 1; k >= 0; --k) {
            const int ik = static_cast<int>(ci % dims_[k]);
            ci /= dims_[k];
            const double w = origin_[k] + ik + 0.5 - y[k];
            d2 += w * w;
            pr += w * u[k];
        }
        return d2 - pr * pr <= reach_ * reach_;
    }

    void scan_cell(std::vector<std::vector<std::uint32_t>>& cells,
                   std::vector<std::uint32_t>& slot, CoverResult& res, std::size_t ci,
                   const Vec& y, const Vec& u, double sing2, double t,
                   std::size_t& remaining) const {
        const int d = tgt_.net.d;
        auto& list = cells[ci];
        std::size_t s = 0;
        while (s < list.size()) {
            const std::uint32_t i = list[s];
            auto x = tgt_.net.point(i);
            double d2 = 0.0, pr = 0.0;
            for (int k = 0; k < d; ++k) {
                const double w = x[k] - y[k];
                d2 += w * w;
                pr += w * u[k];
            }
            const double dist2_line = d2 - pr * pr;
            if (dist2_line <= 1.0) {
                if (std::isinf(res.first_hit[i])) res.first_hit[i] = t;
                if (dist2_line <= sing2) {
                    res.first_singular[i] = t;
                    // swap-pop removal from the active bucket
                    list[s] = list.back();
                    slot[list[s]] = static_cast<std::uint32_t>(s);
                    list.pop_back();
                    --remaining;
                    continue;  // re-examine the swapped-in entry
                }
            }
            ++s;
        }
    }

    CoverTarget tgt_;
    Vec origin_;
    std::vector<int> dims_;
    std::size_t n_cells_ = 0;
    double reach_ = 0.0;
    double cap_ = 0.0;
    std::vector<std::vector<std::uint32_t>> cells_template_;
};

/// One coupled replicate for a target.
inline CoverResult run_cover(const CoverTarget& target, StreamRng rng, RunLimits limits = {}) {
    return CoverEngine(target).run(std::move(rng), limits);
}

/// Coupled engines for several net resolutions driven by one replayable stream
/// through a single shared window; yields the pathwise bracket
/// [max_rho t_d(rho), min_rho t_w(rho)] for the continuum cover time.
class BracketEngine {
public:
    BracketEngine(const GeometrySpec& spec, std::vector<double> rho_list, int K = 8)
        : rhos_(std::move(rho_list)) {
        if (rhos_.empty()) throw UsageError("BracketEngine: empty rho list");
        std::vector<Net> nets;
        nets.reserve(rhos_.size());
        for (double rho : rhos_) nets.push_back(build_net(spec, rho, K));
        // one window containing every net, +1
        Net all;
        all.rho = 1.0;
        all.d = nets.front().d;
        for (const auto& n : nets)
            all.coords.insert(all.coords.end(), n.coords.begin(), n.coords.end());
        window_ = std::make_unique<Window>(enclosing_window(all));
        for (auto& n : nets)
            engines_.emplace_back(CoverTarget(std::move(n), *window_));
    }

    struct PerRho {
        double rho;
        std::size_t n_points;
        double t_d;
        double t_w;
        std::uint64_t lines_used;
    };

    struct Result {
        std::vector<PerRho> per_rho;
        double lower = 0.0;  // max over rho of t_d
        double upper = 0.0;  // min over rho of t_w
        bool empty = false;  // lower > upper (impossible pathwise)
    };

    /// Replays the identical stream (same key) against every net.
    Result run(const StreamRng& rng, RunLimits limits = {}) const {
        Result out;
        out.upper = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < engines_.size(); ++i) {
            CoverResult r = engines_[i].run(rng, limits);  // fresh copy each time
            out.per_rho.push_back({rhos_[i], engines_[i].target().net.count(), r.t_d, r.t_w,
                                   r.lines_used});
            out.lower = std::max(out.lower, r.t_d);
            out.upper = std::min(out.upper, r.t_w);
        }
        out.empty = out.lower > out.upper;
        return out;
    }

    const Window& window() const { return *window_; }
    const std::vector<CoverEngine>& engines() const { return engines_; }

private:
    std::vector<double> rhos_;
    std::unique_ptr<Window> window_;
    std::vector<CoverEngine> engines_;
};

inline BracketEngine::Result bracket_cover_time(const GeometrySpec& spec,
                                                const std::vector<double>& rho_list, int K,
                                                const StreamRng& rng) {
    return BracketEngine(spec, rho_list, K).run(rng);
}

/// Which uncovered-set the threshold refers to: the well-cover set A_eps^rho
/// (singular hits against (1-eps) gamma^{-1}(rho) log N) or the discrete-cover
/// variant (plain hits against (1-eps) log N).
enum class UncoveredMode { well, discrete };

inline double uncovered_threshold(const Net& net, double eps, UncoveredMode mode, int d) {
    if (!(eps > 0.0 && eps < 1.0)) throw UsageError("uncovered_set: eps must be in (0,1)");
    const double log_n = std::log(static_cast<double>(net.count()));
    return mode == UncoveredMode::well ? (1.0 - eps) * log_n / gamma_rho(net.rho, d)
                                       : (1.0 - eps) * log_n;
}

/// Indices of net points not yet covered (per mode) at the mode's threshold
/// time, extracted from a finished or horizon-limited run.
inline std::vector<std::size_t> uncovered_set(const CoverResult& run, const Net& net,
                                              double eps, UncoveredMode mode, int d) {
    const double thr = uncovered_threshold(net, eps, mode, d);
    const auto& times = mode == UncoveredMode::well ? run.first_singular : run.first_hit;
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < times.size(); ++i)
        if (times[i] > thr) out.push_back(i);
    return out;
}

/// Runs a fresh replicate just far enough to decide the uncovered set.
inline std::vector<std::size_t> uncovered_set(const CoverEngine& engine, double eps,
                                              UncoveredMode mode, StreamRng rng) {
    const int d = engine.target().net.d;
    RunLimits lim;
    lim.horizon = uncovered_threshold(engine.target().net, eps, mode, d);
    const CoverResult r = engine.run(std::move(rng), lim);
    return uncovered_set(r, engine.target().net, eps, mode, d);
}

/// Membership in G_{A,rho,eps}: cardinality within |A^rho|^{2eps/3} of
/// |A^rho|^eps, and pairwise separation >= |A^rho|^{1/(2d)}.
struct GMembership {
    bool ok = false;
    bool cardinality_ok = false;
    bool separation_ok = false;
    double cardinality = 0.0;
    double target_cardinality = 0.0;
    double cardinality_tolerance = 0.0;
    double min_separation = 0.0;  // infinity for |K| < 2
    double required_separation = 0.0;
};

inline GMembership g_membership(const Net& net, const std::vector<std::size_t>& subset,
                                double eps) {
    for (std::size_t i : subset)
        if (i >= net.count()) throw UsageError("g_membership: index outside net");
    const double n = static_cast<double>(net.count());
    GMembership g;
    g.cardinality = static_cast<double>(subset.size());
    g.target_cardinality = std::pow(n, eps);
    g.cardinality_tolerance = std::pow(n, 2.0 * eps / 3.0);
    g.cardinality_ok =
        std::abs(g.cardinality - g.target_cardinality) <= g.cardinality_tolerance;
    g.required_separation = std::pow(n, 1.0 / (2.0 * net.d));
    g.min_separation = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < subset.size(); ++a)
        for (std::size_t b = a + 1; b < subset.size(); ++b)
            g.min_separation =
                std::min(g.min_separation, dist(net.point(subset[a]), net.point(subset[b])));
    g.separation_ok = g.min_separation >= g.required_separation;
    g.ok = g.cardinality_ok && g.separation_ok;
    return g;
}

/// Monte Carlo probe of the almost-independence bound: events are "all of K_i
/// covered by time t"; the coupler is a line hitting both inflated sets.
struct DependenceProbe {
    double p1 = 0.0, p2 = 0.0, p12 = 0.0;
    double lhs = 0.0;              // |p12 - p1 p2|
    double bound = 0.0;            // 4 P(omega_t(L_{K1+B, K2+B}) != 0)
    double lhs_se = 0.0;
    double bound_se = 0.0;
    bool violation = false;        // lhs > bound + 3 * combined se
    std::uint64_t n_reps = 0;
};

inline DependenceProbe pair_dependence_probe(const std::vector<Vec>& k1,
                                             const std::vector<Vec>& k2, double t,
                                             std::uint64_t n_reps, std::uint64_t seed) {
    if (k1.empty()) throw UsageError("pair_dependence_probe: K1 must be nonempty");
    if (!(t > 0.0)) throw UsageError("pair_dependence_probe: t must be positive");
    const int d = static_cast<int>(k1.front().size());
    Net all;
    all.rho = 1.0;
    all.d = d;
    for (const auto& p : k1) all.coords.insert(all.coords.end(), p.begin(), p.end());
    for (const auto& p : k2) all.coords.insert(all.coords.end(), p.begin(), p.end());
    const Window w = enclosing_window(all);

    std::uint64_t c1 = 0, c2 = 0, c12 = 0, cboth = 0;
    for (std::uint64_t rep = 0; rep < n_reps; ++rep) {
        StreamRng rng(seed, "dependence_probe", rep);
        LineStream stream(w, rng);
        std::vector<bool> cov1(k1.size(), false), cov2(k2.size(), false);
        std::size_t n1 = k1.size(), n2 = k2.size();
        bool both_line = false;
        for (TimedLine tl = stream.next(); tl.timestamp <= t; tl = stream.next()) {
            bool hit1 = false, hit2 = false;
            for (std::size_t i = 0; i < k1.size(); ++i)
                if (distance_point_line(k1[i], tl.line) <= 1.0) {
                    hit1 = true;
                    if (!cov1[i]) {
                        cov1[i] = true;
                        --n1;
                    }
                }
            for (std::size_t i = 0; i < k2.size(); ++i)
                if (distance_point_line(k2[i], tl.line) <= 1.0) {
                    hit2 = true;
                    if (!cov2[i]) {
                        cov2[i] = true;
                        --n2;
                    }
                }
            if (hit1 && hit2) both_line = true;
        }
        const bool e1 = (n1 == 0), e2 = (n2 == 0);
        c1 += e1;
        c2 += e2;
        c12 += (e1 && e2);
        cboth += both_line;
    }
    const double n = static_cast<double>(n_reps);
    DependenceProbe pr;
    pr.n_reps = n_reps;
    pr.p1 = c1 / n;
    pr.p2 = c2 / n;
    pr.p12 = c12 / n;
    pr.lhs = std::abs(pr.p12 - pr.p1 * pr.p2);
    const double pb = cboth / n;
    pr.bound = 4.0 * pb;
    const auto se = [n](double p) { return std::sqrt(p * (1.0 - p) / n); };
    pr.lhs_se = std::sqrt(se(pr.p12) * se(pr.p12) + pr.p2 * pr.p2 * se(pr.p1) * se(pr.p1) +
                          pr.p1 * pr.p1 * se(pr.p2) * se(pr.p2));
    pr.bound_se = 4.0 * se(pb);
    const double comb = std::sqrt(pr.lhs_se * pr.lhs_se + pr.bound_se * pr.bound_se);
    pr.violation = pr.lhs > pr.bound + 3.0 * comb;
    return pr;
}

}  // namespace cylcover
