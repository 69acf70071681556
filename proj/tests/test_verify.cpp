#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "cylcover/verify.hpp"

using namespace cylcover;

TEST_CASE("gumbel cdf", "[verify]") {
    CHECK(gumbel_cdf(0.0) == Catch::Approx(std::exp(-1.0)).margin(1e-15));
    CHECK(gumbel_cdf(50.0) == Catch::Approx(1.0).margin(1e-12));
    CHECK(gumbel_cdf(-50.0) == Catch::Approx(0.0).margin(1e-12));
    const double med = -std::log(std::log(2.0));
    CHECK(med == Catch::Approx(0.366513).margin(1e-6));
    CHECK(gumbel_cdf(med) == Catch::Approx(0.5).margin(1e-12));
}

TEST_CASE("ks distance", "[verify]") {
    SECTION("singleton at the median") {
        const Ecdf e({-std::log(std::log(2.0))});
        CHECK(ks_distance(e, gumbel_cdf) == Catch::Approx(0.5).margin(1e-12));
    }
    SECTION("sample from the cdf itself satisfies DKW") {
        StreamRng rng(1, "dkw");
        std::vector<double> sample(10000);
        for (auto& s : sample) s = -std::log(-std::log(rng.uniform()));
        CHECK(ks_distance(Ecdf(std::move(sample)), gumbel_cdf) < 0.02);
    }
    SECTION("gross mismatch is near one") {
        StreamRng rng(2, "shift");
        std::vector<double> sample(2000);
        for (auto& s : sample) s = 10.0 - std::log(-std::log(rng.uniform()));
        CHECK(ks_distance(Ecdf(std::move(sample)), gumbel_cdf) > 0.9);
    }
    SECTION("invariant under increasing reparametrization") {
        StreamRng rng(3, "repar");
        std::vector<double> sample(500);
        for (auto& s : sample) s = -std::log(-std::log(rng.uniform()));
        const double base = ks_distance(Ecdf(sample), gumbel_cdf);
        for (auto& s : sample) s = std::exp(s);
        const double mapped = ks_distance(
            Ecdf(std::move(sample)), [](double x) { return gumbel_cdf(std::log(x)); });
        CHECK(base == Catch::Approx(mapped).margin(1e-12));
    }
    CHECK_THROWS_AS(Ecdf({}), UsageError);
}

TEST_CASE("assumption checker hand cases", "[verify]") {
    SECTION("rho=0.05, d=3, 1e9 points") {
        const AssumptionReport r = check_assumptions(0.05, 3, 1000000000ULL);
        CHECK(r.a1);   // 0.05 < min(2/18, C_3/5 = 0.1732...)
        CHECK(r.a2);   // 1e9^{1/6} = 31.6 > 4
        CHECK(!r.a3);  // 0.05 * log(1e9) = 1.036 > 1e9^{0.00025} = 1.0052
        CHECK(!r.a4);  // 1.0052 < 2
        CHECK(!r.a5);
    }
    SECTION("rho at the A1 boundary fails") {
        CHECK(!check_assumptions(1.0 / 12.0, 2, 100).a1);
        CHECK(!check_assumptions(0.2, 2, 100).a1);
        CHECK(check_assumptions(0.05, 2, 100).a1);
    }
    SECTION("A2 is a strict integer comparison") {
        CHECK(check_assumptions(0.5, 2, 257).a2);   // 4^{2d} = 256
        CHECK(!check_assumptions(0.5, 2, 256).a2);  // boundary excluded
    }
    CHECK_THROWS_AS(check_assumptions(0.0, 2, 10), UsageError);
    CHECK_THROWS_AS(check_assumptions(0.1, 2, 0), UsageError);
}

TEST_CASE("rho schedule", "[verify]") {
    SECTION("rounded e^10 with D=2") {
        const RhoSchedule s = rho_schedule(22026, 2.0);
        CHECK(s.rho == Catch::Approx(0.2).margin(1e-5));
    }
    SECTION("validity flag") {
        CHECK(!rho_schedule(100, 1.0).d_valid);     // 1 * e^{-1/200} > 1/2
        CHECK(rho_schedule(100, 2000.0).d_valid);   // 2000 e^{-10} < 1/2
    }
    CHECK_THROWS_AS(rho_schedule(1, 2.0), UsageError);
    CHECK_THROWS_AS(rho_schedule(100, 0.5), UsageError);
}

TEST_CASE("gumbel experiment centering and flags", "[verify]") {
    const SpecFamily grid = [](int n) { return lattice_grid_spec(2, n); };
    const GumbelReport rep = gumbel_experiment(grid, 2, 0.5, 8, {2, 3}, 50, 77, 2);
    CHECK(!rep.a1_satisfied);  // 0.5 > 1/12
    REQUIRE(rep.cells.size() == 2);

    // recompute one centered value from a fresh engine run on the same stream key
    const GumbelCell& cell = rep.cells[1];
    REQUIRE(cell.n == 3);
    const Net net = build_net(grid(3), 0.5, 8);
    REQUIRE(net.count() == cell.net_size);
    const CoverEngine engine{CoverTarget(net)};
    const CoverResult r = engine.run(StreamRng(77, "gumbel/n=3", 7));
    const double log_n = std::log(static_cast<double>(net.count()));
    CHECK(cell.centered_td[7] == r.t_d - log_n);
    CHECK(cell.centered_tw[7] == gamma_rho(0.5, 2) * r.t_w - log_n);
    CHECK(cell.error_exponent ==
          Catch::Approx(std::pow(9.0, -0.5 / 600.0)).margin(1e-12));
}

TEST_CASE("degenerate one-point family is reported, not failed", "[verify]") {
    const SpecFamily one = [](int) { return GeometrySpec::points({{0.0, 0.0}}); };
    const GumbelReport rep = gumbel_experiment(one, 2, 0.3, 8, {1}, 1000, 5, 2);
    CHECK(rep.cells[0].ks_td > 0.2);  // Exp(1) is not Gumbel
}

TEST_CASE("tightness experiment structure", "[verify]") {
    const GeometrySpec sq = GeometrySpec::box({0.0, 0.0}, {1.0, 1.0});
    const TightnessReport rep =
        tightness_experiment(sq, 2.0, 1.0, 1.0, {4, 8}, 60, 8, 3, 2);
    REQUIRE(rep.cells.size() == 2);
    CHECK(rep.conjecture_offset == Catch::Approx(std::log(4.0)).margin(1e-12));
    CHECK(rep.conjecture_ks_td.size() == 2);

    for (const auto& cell : rep.cells) {
        for (int q = 1; q < 5; ++q) CHECK(cell.q_td[q - 1] <= cell.q_td[q]);
        // schedule consistency
        CHECK(cell.rho_n ==
              Catch::Approx(1.0 / std::log(double(cell.count_one))).margin(1e-12));
        CHECK(!cell.d_valid);  // D = 1 never satisfies the sufficient condition
        // undercentered median identity
        const double loglog = std::log(std::log(double(cell.n)));
        CHECK(cell.median_td_undercentered ==
              Catch::Approx(quantile(cell.centered_td, 0.5) + 2.0 * loglog).margin(1e-12));
        CHECK(cell.p_alpha_td >= 0.0);
        CHECK(cell.p_alpha_td <= 1.0);
        CHECK(cell.p_alpha_tw <= cell.p_alpha_td);  // t_w >= t_d pathwise
    }
    CHECK_THROWS_AS(
        tightness_experiment(sq, 2.0, std::nullopt, 1.0, {8, 4}, 10, 8, 0, 1),
        UsageError);
}

TEST_CASE("band monotone drift helper", "[verify]") {
    CHECK(band_monotone_drift({0.0, 0.1, 0.2}, {1.0, 1.1, 1.2}) ==
          Catch::Approx(0.2).margin(1e-12));
    CHECK(band_monotone_drift({0.0, 0.2, 0.1}, {1.0, 1.1, 1.2}) == 0.0);  // lo not monotone
    CHECK(band_monotone_drift({0.0, -0.1, -0.2}, {1.0, 1.1, 1.2}) == 0.0);  // opposite signs
    CHECK(band_monotone_drift({0.0, 0.1, 0.6}, {1.0, 1.2, 1.3}) ==
          Catch::Approx(0.3).margin(1e-12));  // min edge motion
    CHECK(band_monotone_drift({0.0, -0.2, -0.5}, {0.0, -0.1, -0.4}) ==
          Catch::Approx(-0.4).margin(1e-12));
}

TEST_CASE("inequality suite passes in hypothesis", "[verify]") {
    const InequalitySuiteReport rep = inequality_suite({2, 3});
    CHECK(rep.all_pass);
    for (const auto& c : rep.checks) {
        CAPTURE(c.name, c.d, c.worst_margin, c.worst_at);
        CHECK(c.pass);
    }
    SECTION("boundary and example spot checks") {
        // smallbeta at r = 2 C_d exactly
        for (int d : {2, 3}) {
            const double r = 2.0 * dim_constants(d).C_d;
            CHECK(pair_hit_measure(r, d).value <= 1.0 - r / 12.0 + 1e-6);
        }
        // logexp example: b = 1e4, z = 0
        const double b = 1e4, a = 1.0;
        const double lhs =
            std::abs(std::exp((b + std::pow(b, 2.0 / 3.0)) * std::log1p(-a / b)) -
                     std::exp(-a));
        CHECK(lhs <= 3.0 * std::pow(b, -1.0 / 12.0));
        // calc1 at the endpoint x = 1/2
        CHECK(std::log(0.5) >= -0.75);
        CHECK(std::log(0.5) <= -0.5);
    }
}

TEST_CASE("gbound trend probe structure", "[verify]") {
    const GboundProbe p = gbound_trend_probe(2, {6, 10}, 0.5, 0.01, 400, 21, 2);
    REQUIRE(p.cells.size() == 2);
    for (const auto& c : p.cells) {
        CHECK(c.p_not_in_g >= 0.0);
        CHECK(c.p_not_in_g <= 1.0);
        CHECK(c.exponent_bound > 0.0);
        CHECK(c.exponent_bound < 1.0);
    }
}
