#pragma once

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cylcover/cover.hpp"
#include "cylcover/measure.hpp"
#include "cylcover/net.hpp"
#include "cylcover/parallel.hpp"
#include "cylcover/report.hpp"
#include "cylcover/verify.hpp"

namespace cylcover::cli {

using nlohmann::json;

// Thrown after --help output was printed; maps to exit 0.
struct HelpShown {};

struct Config {
    std::string command;
    json echo;  // resolved option values, embedded into every output

    int d = 0;
    std::vector<double> box;   // lo..hi, 2d values
    std::vector<double> ball;  // center..radius, d+1 values
    int grid_n = 0;
    double scale = 0.0;  // optional wrapper

    double rho = 0.0;
    std::vector<double> rho_list;
    double schedule_D = 0.0;
    int K = 8;
    std::vector<int> n_list;
    std::uint64_t reps = 100;
    std::uint64_t seed = 0;
    std::uint64_t max_lines = 1'000'000'000;
    unsigned workers = 0;  // 0 = hardware default
    std::string out;

    // measure
    std::string measure_what;
    double r = 0.0;
    int k = 0;
    std::uint64_t mc_check = 0;

    // tightness
    double dim_b = 0.0;
    std::optional<double> c_a;

    // verify
    std::vector<int> verify_d;

    unsigned effective_workers() const { return workers ? workers : default_workers(); }

    GeometrySpec geometry() const {
        int sources = (!box.empty()) + (!ball.empty()) + (grid_n > 0);
        if (sources != 1)
            throw UsageError("exactly one of --box, --ball, --grid must be given");
        std::optional<GeometrySpec> g;
        if (!box.empty()) {
            if (static_cast<int>(box.size()) != 2 * d)
                throw UsageError("--box needs 2*d values lo...hi");
            g = GeometrySpec::box(Vec(box.begin(), box.begin() + d),
                                  Vec(box.begin() + d, box.end()));
        } else if (!ball.empty()) {
            if (static_cast<int>(ball.size()) != d + 1)
                throw UsageError("--ball needs d+1 values center...radius");
            g = GeometrySpec::ball(Vec(ball.begin(), ball.end() - 1), ball.back());
        } else {
            g = lattice_grid_spec(d, grid_n);
        }
        if (scale > 0.0) g = GeometrySpec::scaled(std::move(*g), scale);
        return std::move(*g);
    }
};

inline Config parse_config(const std::vector<std::string>& args) {
    CLI::App app{"Poisson cylinder cover process toolkit"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Config file (CLI flags override file values)");
    app.allow_config_extras(false);

    Config cfg;

    const auto add_common = [&](CLI::App* sub, bool need_d) {
        sub->fallthrough();  // parent options (--config) may follow the subcommand
        auto* d_opt = sub->add_option("--d", cfg.d, "ambient dimension (>= 2)");
        if (need_d) d_opt->required();
        sub->add_option("--seed", cfg.seed, "experiment seed (default 0)");
        sub->add_option("--workers", cfg.workers, "worker threads (default: cores)");
        sub->add_option("--out", cfg.out, "output path prefix (.json/.csv)");
        sub->add_option("--K", cfg.K, "net lattice resolution divisor (default 8)");
    };
    const auto add_geometry = [&](CLI::App* sub) {
        sub->add_option("--box", cfg.box, "box lo...hi (2*d comma-separated values)")
            ->delimiter(',');
        sub->add_option("--ball", cfg.ball, "ball center...radius (d+1 values)")
            ->delimiter(',');
        sub->add_option("--grid", cfg.grid_n, "integer lattice [0,n-1]^d");
        sub->add_option("--scale", cfg.scale, "scale the geometry by a positive factor");
    };

    auto* measure = app.add_subcommand("measure", "hitting-measure kernel values");
    add_common(measure, true);
    bool f_pair_hit = false, f_pair_union = false, f_beta = false, f_alpha = false,
         f_gamma = false, f_constants = false;
    measure->add_flag("--pair-hit", f_pair_hit, "mu(L_{B(o,1)} ∩ L_{B(r e1,1)})");
    measure->add_flag("--pair-union", f_pair_union, "union measure for (1-rho)-balls");
    measure->add_flag("--beta", f_beta, "beta(rho,k)");
    measure->add_flag("--alpha", f_alpha, "alpha(rho,k)");
    measure->add_flag("--gamma", f_gamma, "gamma(rho)");
    measure->add_flag("--constants", f_constants, "dimension constants");
    measure->add_option("--r", cfg.r, "center distance r");
    measure->add_option("--rho", cfg.rho, "rho parameter");
    measure->add_option("--k", cfg.k, "dyadic index k");
    measure->add_option("--mc-check", cfg.mc_check,
                        "cross-check with the MC oracle at this sample count");

    auto* net = app.add_subcommand("net", "build a rho-separated net");
    add_common(net, true);
    add_geometry(net);
    net->add_option("--rho", cfg.rho, "separation rho")->required();

    auto* dim = app.add_subcommand("dim", "box-dimension fit and content diagnostic");
    add_common(dim, true);
    add_geometry(dim);
    dim->add_option("--rho-list", cfg.rho_list, "decreasing rho values (>= 3)")
        ->delimiter(',')
        ->required();
    dim->add_option("--content-dim", cfg.dim_b, "dimension for rho^dim |A^rho| diagnostic");

    auto* cover = app.add_subcommand("cover", "coupled cover-time replicates");
    add_common(cover, true);
    add_geometry(cover);
    cover->add_option("--rho", cfg.rho, "net separation rho");
    cover->add_option("--rho-list", cfg.rho_list, "bracket mode: coupled nets on one stream")
        ->delimiter(',');
    cover->add_option("--D", cfg.schedule_D, "rho from the schedule D/log|A^1|");
    cover->add_option("--reps", cfg.reps, "replicates (default 100)");
    cover->add_option("--max-lines", cfg.max_lines, "per-replicate line-event safety cap");

    auto* gumbel = app.add_subcommand("gumbel", "Gumbel-limit experiment");
    add_common(gumbel, true);
    add_geometry(gumbel);
    gumbel->add_option("--rho", cfg.rho, "net separation rho")->required();
    gumbel->add_option("--n-list", cfg.n_list, "family sizes")->delimiter(',')->required();
    gumbel->add_option("--reps", cfg.reps, "replicates per n");

    auto* tight = app.add_subcommand("tightness", "tightness experiment with rho_n schedule");
    add_common(tight, true);
    add_geometry(tight);
    tight->add_option("--dim-b", cfg.dim_b, "box dimension used in the centering")->required();
    double c_a_val = 0.0;
    auto* c_a_opt = tight->add_option("--c-a", c_a_val, "content constant (conjecture probe)");
    tight->add_option("--D", cfg.schedule_D, "schedule constant D >= 1 (default 1)");
    tight->add_option("--n-list", cfg.n_list, "increasing n values")->delimiter(',')->required();
    tight->add_option("--reps", cfg.reps, "replicates per n");

    auto* verify = app.add_subcommand("verify", "analytic inequality suite");
    verify->add_option("--d", cfg.verify_d, "dimension (repeatable)")->required();
    verify->add_option("--seed", cfg.seed, "experiment seed");
    verify->add_option("--workers", cfg.workers, "worker threads");
    verify->add_option("--out", cfg.out, "output path prefix");

    std::vector<const char*> argv;
    argv.push_back("cylcover");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help() << std::endl;
        throw HelpShown{};
    } catch (const CLI::ParseError& e) {
        throw UsageError(e.what());
    }

    CLI::App* sub = app.get_subcommands().front();
    cfg.command = sub->get_name();
    if (cfg.command == "measure") {
        const int n_what =
            f_pair_hit + f_pair_union + f_beta + f_alpha + f_gamma + f_constants;
        if (n_what != 1)
            throw UsageError("measure: pick exactly one of --pair-hit --pair-union "
                             "--beta --alpha --gamma --constants");
        cfg.measure_what = f_pair_hit     ? "pair_hit"
                           : f_pair_union ? "pair_union"
                           : f_beta       ? "beta"
                           : f_alpha      ? "alpha"
                           : f_gamma      ? "gamma"
                                          : "constants";
    }
    if (cfg.command == "cover") {
        const int sources = (cover->count("--rho") > 0) + (!cfg.rho_list.empty()) +
                            (cover->count("--D") > 0);
        if (sources != 1)
            throw UsageError("cover: exactly one of --rho, --rho-list, --D (conflicting "
                             "rho and schedule)");
    }
    if (cfg.command == "tightness") {
        if (c_a_opt->count() > 0) cfg.c_a = c_a_val;
        if (tight->count("--D") == 0) cfg.schedule_D = 1.0;
    }

    // resolved-config echo
    cfg.echo = json::object();
    cfg.echo["command"] = cfg.command;
    for (const auto* opt : sub->get_options()) {
        if (opt->count() == 0 || opt->get_name().empty()) continue;
        cfg.echo[opt->get_name()] = json(opt->results());
    }
    cfg.echo["seed"] = cfg.seed;
    cfg.echo["K"] = cfg.K;
    return cfg;
}

inline json envelope(const Config& cfg) {
    json j;
    j["tool"] = "cylcover";
    j["version"] = CYLCOVER_VERSION;
    j["command"] = cfg.command;
    j["seed"] = cfg.seed;
    j["config"] = cfg.echo;
    j["net_rule"] = {{"K", cfg.K},
                     {"ordering", "lexicographic"},
                     {"candidate_lattice", "(rho/K) Z^d intersected with the spec"}};
    return j;
}

inline void emit(const Config& cfg, const json& doc, const std::string& csv = "",
                 const std::string& csv_suffix = ".csv") {
    if (cfg.out.empty()) {
        std::cout << doc.dump(2) << std::endl;
        return;
    }
    {
        std::ofstream os(cfg.out + ".json");
        os << doc.dump(2) << "\n";
    }
    if (!csv.empty()) {
        std::ofstream os(cfg.out + csv_suffix);
        os << csv;
    }
}

inline int run_measure(const Config& cfg) {
    json doc = envelope(cfg);
    json res;
    if (cfg.measure_what == "pair_hit") {
        res = pair_hit_measure(cfg.r, cfg.d);
    } else if (cfg.measure_what == "pair_union") {
        res = pair_union_measure(cfg.r, cfg.d, cfg.rho);
    } else if (cfg.measure_what == "beta") {
        res = json{{"value", beta_ratio(cfg.rho, cfg.k, cfg.d)}, {"method", "quadrature"}};
    } else if (cfg.measure_what == "alpha") {
        res = json{{"value", alpha_ratio(cfg.rho, cfg.k, cfg.d)}, {"method", "quadrature"}};
    } else if (cfg.measure_what == "gamma") {
        res = json{{"value", gamma_rho(cfg.rho, cfg.d)},
                   {"method", "closed_form"},
                   {"abs_error", 0.0}};
    } else {
        res = dim_constants(cfg.d);
    }
    if (cfg.mc_check > 0 && (cfg.measure_what == "pair_hit")) {
        const MeasureValue mc = mc_pair_oracle(cfg.r, cfg.d, cfg.mc_check, cfg.seed);
        res["mc_oracle"] = mc;
        res["mc_agreement_sigmas"] =
            std::abs(res["value"].get<double>() - mc.value) / std::max(mc.abs_error, 1e-300);
    }
    doc["results"] = res;
    emit(cfg, doc);
    return 0;
}

inline int run_net(const Config& cfg) {
    const Net net = build_net(cfg.geometry(), cfg.rho, cfg.K);
    json doc = envelope(cfg);
    doc["results"] = {{"count", net.count()}, {"rho", net.rho}, {"d", net.d}};
    std::ostringstream csv;
    write_net_csv(csv, net);
    emit(cfg, doc, csv.str());
    return 0;
}

inline int run_dim(const Config& cfg) {
    const GeometrySpec spec = cfg.geometry();
    const DimFit fit = box_dimension_fit(spec, cfg.rho_list, cfg.K);
    json doc = envelope(cfg);
    doc["results"] = {{"fit", fit}};
    if (cfg.dim_b > 0.0)
        doc["results"]["content"] = content_constant(spec, cfg.dim_b, cfg.rho_list, cfg.K);
    emit(cfg, doc);
    return 0;
}

inline int run_cover(const Config& cfg) {
    const GeometrySpec spec = cfg.geometry();
    RunLimits limits;
    limits.max_lines = cfg.max_lines;
    std::ostringstream csv;
    write_cover_csv_header(csv);
    json doc = envelope(cfg);

    std::vector<double> rhos = cfg.rho_list;
    if (rhos.empty()) {
        double rho = cfg.rho;
        json sched;
        if (cfg.schedule_D > 0.0) {
            const std::uint64_t c1 = net_count(spec, 1.0, cfg.K);
            const RhoSchedule s = rho_schedule(c1, cfg.schedule_D);
            rho = s.rho;
            sched = json{{"D", cfg.schedule_D}, {"count_one", c1}, {"rho", s.rho},
                         {"d_valid", s.d_valid}};
        }
        const Net net = build_net(spec, rho, cfg.K);
        const CoverEngine engine{CoverTarget(net)};
        std::vector<CoverCsvRow> rows(cfg.reps);
        parallel_for(cfg.reps, cfg.effective_workers(), [&](std::size_t i) {
            const CoverResult r = engine.run(StreamRng(cfg.seed, "cover", i), limits);
            rows[i] = {r.seed, rho, net.count(), r.t_d, r.t_w, r.lines_used};
        });
        std::size_t ok = 0;
        for (const auto& r : rows) {
            write_cover_csv_row(csv, r);
            ok += r.t_d <= r.t_w;
        }
        doc["results"] = {{"rho", rho}, {"n_points", net.count()}, {"reps", cfg.reps},
                          {"bracket_ok", ok == cfg.reps}};
        if (!sched.is_null()) doc["results"]["schedule"] = sched;
    } else {
        const BracketEngine bracket(spec, rhos, cfg.K);
        std::vector<BracketEngine::Result> results(cfg.reps);
        parallel_for(cfg.reps, cfg.effective_workers(), [&](std::size_t i) {
            results[i] = bracket.run(StreamRng(cfg.seed, "cover", i), limits);
        });
        std::size_t nonempty = 0;
        for (std::size_t i = 0; i < results.size(); ++i) {
            const std::uint64_t key = stream_key(cfg.seed, "cover", i);
            for (const auto& pr : results[i].per_rho)
                write_cover_csv_row(csv, {key, pr.rho, pr.n_points, pr.t_d, pr.t_w,
                                          pr.lines_used});
            nonempty += !results[i].empty;
        }
        doc["results"] = {{"rhos", rhos}, {"reps", cfg.reps},
                          {"bracket_nonempty", nonempty == cfg.reps}};
    }
    emit(cfg, doc, csv.str());
    return 0;
}

inline int run_gumbel(const Config& cfg) {
    SpecFamily family;
    if (!cfg.box.empty() || !cfg.ball.empty()) {
        family = [base = cfg.geometry()](int n) { return GeometrySpec::scaled(base, n); };
    } else {
        family = [d = cfg.d](int n) { return lattice_grid_spec(d, n); };
    }
    const GumbelReport rep = gumbel_experiment(family, cfg.d, cfg.rho, cfg.K, cfg.n_list,
                                               cfg.reps, cfg.seed, cfg.effective_workers());
    json doc = envelope(cfg);
    doc["results"] = rep;
    std::ostringstream csv;
    write_gumbel_csv(csv, rep);
    emit(cfg, doc, csv.str());
    return 0;
}

inline int run_tightness(const Config& cfg) {
    const TightnessReport rep =
        tightness_experiment(cfg.geometry(), cfg.dim_b, cfg.c_a, cfg.schedule_D, cfg.n_list,
                             cfg.reps, cfg.K, cfg.seed, cfg.effective_workers());
    json doc = envelope(cfg);
    doc["results"] = rep;
    std::ostringstream csv;
    write_tightness_csv(csv, rep);
    emit(cfg, doc, csv.str());
    return 0;
}

inline int run_verify(const Config& cfg) {
    const InequalitySuiteReport rep = inequality_suite(cfg.verify_d);
    json doc = envelope(cfg);
    doc["results"] = rep;
    emit(cfg, doc);
    return rep.all_pass ? 0 : 3;
}

inline int execute(const Config& cfg) {
    if (cfg.command == "measure") return run_measure(cfg);
    if (cfg.command == "net") return run_net(cfg);
    if (cfg.command == "dim") return run_dim(cfg);
    if (cfg.command == "cover") return run_cover(cfg);
    if (cfg.command == "gumbel") return run_gumbel(cfg);
    if (cfg.command == "tightness") return run_tightness(cfg);
    if (cfg.command == "verify") return run_verify(cfg);
    throw UsageError("unknown command " + cfg.command);
}

inline int main_entry(int argc, char** argv) {
    try {
        std::vector<std::string> args(argv + 1, argv + argc);
        const Config cfg = parse_config(args);
        return execute(cfg);
    } catch (const HelpShown&) {
        return 0;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << std::endl;
        return 1;
    } catch (const ResourceError& e) {
        std::cerr << "resource error: " << e.what() << std::endl;
        return 2;
    }
}

}  // namespace cylcover::cli
