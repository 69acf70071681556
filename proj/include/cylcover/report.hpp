#pragma once

#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "cylcover/cover.hpp"
#include "cylcover/measure.hpp"
#include "cylcover/net.hpp"
#include "cylcover/verify.hpp"

namespace cylcover {

using nlohmann::json;

// Doubles are printed with max_digits10 so identical runs produce identical bytes.
inline std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void to_json(json& j, const MeasureValue& m) {
    j = json{{"value", m.value},
             {"method", to_string(m.method)},
             {"abs_error", m.abs_error}};
    if (m.method == Method::monte_carlo) j["n_samples"] = m.n_samples;
}

inline void to_json(json& j, const DimConstants& c) {
    j = json{{"d", c.d},
             {"C_d", c.C_d},
             {"C_tilde_d", c.C_tilde_d},
             {"kappa_d", c.kappa_d},
             {"D_d", c.D_d}};
}

inline void to_json(json& j, const AssumptionReport& a) {
    j = json{{"a1", a.a1},
             {"a2", a.a2},
             {"a3", a.a3},
             {"a4", a.a4},
             {"a5", a.a5},
             {"margins", a.margins},
             {"inputs",
              {{"rho", a.rho}, {"d", a.d}, {"net_count", a.net_count}, {"C_d", a.C_d},
               {"C_tilde_d", a.C_tilde_d}}}};
}

inline void to_json(json& j, const RhoSchedule& s) {
    j = json{{"rho", s.rho}, {"d_valid", s.d_valid}};
}

inline void to_json(json& j, const DimFit& f) {
    j = json::object();
    j["slope"] = f.slope;
    j["residual_rms"] = f.residual_rms;
    j["points"] = json::array();
    for (const auto& p : f.points) {
        json jp{{"rho", p.rho}, {"count", p.count}};
        if (!std::isnan(p.local_slope)) jp["local_slope"] = p.local_slope;
        j["points"].push_back(jp);
    }
}

inline void to_json(json& j, const ContentDiagnostic& c) {
    j = json{{"rhos", c.rhos},
             {"values", c.values},
             {"min", c.min_value},
             {"max", c.max_value}};
}

inline void to_json(json& j, const PackingProfile& p) {
    j = json{{"r_max", p.r_max},
             {"annulus_counts", p.annulus},
             {"ball_counts", p.ball},
             {"annulus_ratios", p.annulus_ratio},
             {"ball_ratios", p.ball_ratio},
             {"inv_dist_sum", p.inv_dist_sum},
             {"inv_dist_ratio", p.inv_dist_ratio}};
}

inline void to_json(json& j, const GumbelCell& c) {
    j = json{{"n", c.n},
             {"net_size", c.net_size},
             {"ks_td", c.ks_td},
             {"ks_tw", c.ks_tw},
             {"error_exponent", c.error_exponent}};
}

inline void to_json(json& j, const GumbelReport& r) {
    j = json{{"d", r.d},
             {"rho", r.rho},
             {"K", r.K},
             {"reps", r.reps},
             {"seed", r.seed},
             {"a1_satisfied", r.a1_satisfied},
             {"a1_bound", r.a1_bound},
             {"cells", r.cells}};
    if (!r.a1_satisfied)
        j["warning"] = "rho outside the hypothesis range for the discrete-cover limit; results reported anyway";
}

inline void to_json(json& j, const TightnessCell& c) {
    j = json{{"n", c.n},
             {"rho_n", c.rho_n},
             {"d_valid", c.d_valid},
             {"count_one", c.count_one},
             {"count_rho", c.count_rho},
             {"assumptions", c.assumptions},
             {"quantiles_td", c.q_td},
             {"quantiles_tw", c.q_tw},
             {"band_width_td", c.q_td[4] - c.q_td[0]},
             {"band_width_tw", c.q_tw[4] - c.q_tw[0]},
             {"median_td_undercentered", c.median_td_undercentered},
             {"median_tw_undercentered", c.median_tw_undercentered},
             {"p_alpha_td", c.p_alpha_td},
             {"p_alpha_tw", c.p_alpha_tw}};
}

inline void to_json(json& j, const TightnessReport& r) {
    j = json{{"d", r.d},
             {"dim_b", r.dim_b},
             {"D", r.D},
             {"K", r.K},
             {"reps", r.reps},
             {"seed", r.seed},
             {"alpha_bar", r.alpha_bar},
             {"alpha_z0", r.alpha_z0},
             {"cells", r.cells}};
    if (r.c_a) {
        j["c_a"] = *r.c_a;
        j["conjecture_offset"] = r.conjecture_offset;
        j["conjecture_ks_td"] = r.conjecture_ks_td;
        j["conjecture_note"] = "conjecture probe only, not acceptance";
    }
}

inline void to_json(json& j, const InequalityCheck& c) {
    j = json{{"name", c.name},
             {"n_checked", c.n_checked},
             {"n_skipped", c.n_skipped},
             {"pass", c.pass}};
    if (c.d > 0) j["d"] = c.d;
    if (std::isfinite(c.worst_margin)) {
        j["worst_margin"] = c.worst_margin;
        j["worst_at"] = c.worst_at;
    }
    if (!c.note.empty()) j["note"] = c.note;
}

inline void to_json(json& j, const InequalitySuiteReport& r) {
    j = json{{"tolerance", r.tolerance}, {"all_pass", r.all_pass}, {"checks", r.checks}};
}

inline void to_json(json& j, const GboundProbe& p) {
    j = json::object();
    j["cells"] = json::array();
    for (const auto& c : p.cells)
        j["cells"].push_back(json{{"m", c.m},
                                  {"net_size", c.net_size},
                                  {"p_not_in_g", c.p_not_in_g},
                                  {"exponent_bound", c.exponent_bound}});
    j["ratio_observed"] = p.ratio_observed;
    j["ratio_predicted"] = p.ratio_predicted;
}

// ---------------------------------------------------------------------------
// CSV writers (stable byte-for-byte for identical inputs)
// ---------------------------------------------------------------------------

inline void write_net_csv(std::ostream& os, const Net& net) {
    os << "# rho,K,d,count\n"
       << "# " << fmt_double(net.rho) << "," << net.K << "," << net.d << "," << net.count()
       << "\n";
    for (std::size_t i = 0; i < net.count(); ++i) {
        auto p = net.point(i);
        for (int k = 0; k < net.d; ++k) {
            if (k) os << ",";
            os << fmt_double(p[k]);
        }
        os << "\n";
    }
}

inline Net read_net_csv(std::istream& is) {
    Net net;
    std::string line;
    std::getline(is, line);  // column header
    std::getline(is, line);  // values
    {
        std::istringstream ss(line.substr(2));
        char c;
        std::size_t count;
        ss >> net.rho >> c >> net.K >> c >> net.d >> c >> count;
    }
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        double v;
        char c;
        while (ss >> v) {
            net.coords.push_back(v);
            ss >> c;
        }
    }
    return net;
}

struct CoverCsvRow {
    std::uint64_t seed;
    double rho;
    std::uint64_t n_points;
    double t_d;
    double t_w;
    std::uint64_t lines_used;
};

inline void write_cover_csv_header(std::ostream& os) {
    os << "seed,rho,n_points,t_d,t_w,lines_used\n";
}

inline void write_cover_csv_row(std::ostream& os, const CoverCsvRow& r) {
    os << r.seed << "," << fmt_double(r.rho) << "," << r.n_points << "," << fmt_double(r.t_d)
       << "," << fmt_double(r.t_w) << "," << r.lines_used << "\n";
}

inline void write_gumbel_csv(std::ostream& os, const GumbelReport& rep) {
    os << "n,rep,centered_td,centered_tw\n";
    for (const auto& cell : rep.cells)
        for (std::size_t i = 0; i < cell.centered_td.size(); ++i)
            os << cell.n << "," << i << "," << fmt_double(cell.centered_td[i]) << ","
               << fmt_double(cell.centered_tw[i]) << "\n";
}

inline void write_tightness_csv(std::ostream& os, const TightnessReport& rep) {
    os << "n,rep,centered_td,centered_tw\n";
    for (const auto& cell : rep.cells)
        for (std::size_t i = 0; i < cell.centered_td.size(); ++i)
            os << cell.n << "," << i << "," << fmt_double(cell.centered_td[i]) << ","
               << fmt_double(cell.centered_tw[i]) << "\n";
}

}  // namespace cylcover
