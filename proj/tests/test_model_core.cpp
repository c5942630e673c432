#include <doctest.h>

#include <cmath>
#include <random>

#include "bathyflow/bathymetry.hpp"
#include "bathyflow/params.hpp"
#include "oracles.hpp"

using namespace bathyflow;

TEST_CASE("dispersion relation") {
    CHECK(dispersion(1.0, -6.0, 2, 1) == doctest::Approx(-2.0).epsilon(1e-15));
    CHECK(dispersion(1.0, -3.0, 1, 1) == doctest::Approx(-1.0).epsilon(1e-15));
    CHECK_THROWS_AS(dispersion(-2.0, -3.0, 1, 1), std::invalid_argument);

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> uf(0.2, 3.0), uF(-8.0, -0.5);
    std::uniform_int_distribution<int> uk(1, 6);
    for (int i = 0; i < 50; ++i) {
        const double F = uf(rng), Fc = uF(rng);
        const int k = uk(rng), mt = uk(rng);
        CHECK(dispersion(F, Fc, k, mt) + dispersion(F, Fc, -k, mt) == 0.0);
    }
}

TEST_CASE("validation names each failure") {
    ChannelParams ch;
    ch.F = 1.0;
    ch.Fcal = -3.0;
    ch.depth = 0.1;
    ch.nu = 0.5;
    ch.Mcal = 1.0;
    ch.rho = 0.5;
    ch.mu = 1e-9;

    SUBCASE("boundary ellipticity is admitted") {
        // -sigma == kappa * m_tilde * A exactly
        WaveParams w = WaveParams::with_dispersion(ch, 1, 1, 1.0);
        REQUIRE(w.sigma == doctest::Approx(-1.0));
        auto rep = validate(ch, w);
        CHECK(rep.find("ellipticity")->passed);
        CHECK(rep.hard_ok);
    }
    SUBCASE("wrong wave direction") {
        ChannelParams bad = ch;
        bad.Fcal = 1.0;
        WaveParams w = WaveParams::with_dispersion(bad, 1, 1, 2.0);
        auto rep = validate(bad, w);
        CHECK_FALSE(rep.find("wave direction")->passed);
        CHECK(rep.first_failure() == "wave direction");
    }
    SUBCASE("majorant threshold trips at L(mu) = 0.6") {
        WaveParams w = WaveParams::with_dispersion(ch, 1, 1, 2.0);
        ChannelParams probe = ch;
        probe.mu = 1.0;
        const double L1 = majorant_threshold(probe, w);
        probe.mu = 0.6 / L1;
        REQUIRE(probe.mu < probe.depth);
        auto rep = validate(probe, w);
        CHECK(rep.threshold == doctest::Approx(0.6).epsilon(1e-12));
        CHECK(rep.hard_ok);
        CHECK_FALSE(rep.certified);
        CHECK(rep.first_failure() == "majorant threshold");
    }
    SUBCASE("certified when mu is small enough") {
        WaveParams w = WaveParams::with_dispersion(ch, 1, 1, 2.0);
        ChannelParams probe = ch;
        probe.mu = 1.0;
        probe.mu = 0.4 / majorant_threshold(probe, w);
        auto rep = validate(probe, w);
        CHECK(rep.certified);
    }
}

TEST_CASE("sampled coefficient evaluation") {
    auto g = Grid::make(256, 8.0);
    SUBCASE("nodes are exact and cubics reproduce") {
        auto cubic = [](double x) {
            return Complex(1.0 + x * (0.5 + x * (-0.25 + 0.125 * x)), x * x);
        };
        auto c = oracles::sampled_from(g, cubic);
        CHECK(c.eval((*g)[37]) == cubic((*g)[37]));
        const double mid = 0.5 * ((*g)[100] + (*g)[101]);
        CHECK(std::abs(c.eval(mid) - cubic(mid)) < 1e-13);
    }
    SUBCASE("tail extension follows the fitted envelope") {
        auto c = oracles::sampled_from(g, [](double x) { return Complex(std::exp(-0.7 * x), 0); });
        REQUIRE(c.has_decay());
        const double r = c.decay().rate;
        CHECK(r == doctest::Approx(0.7).epsilon(1e-6));
        const double x = g->x_max() + 1.0 / r;
        CHECK(std::abs(c.eval(x) - c.values().back() / std::exp(1.0)) < 1e-12);
    }
    SUBCASE("negative x is outside the channel") {
        auto c = oracles::sampled_from(g, [](double) { return Complex(1, 0); });
        CHECK_THROWS_AS(c.eval(-0.1), std::domain_error);
    }
}

TEST_CASE("bathymetry builders") {
    auto g = Grid::default_for_decay(0.5, 512);

    SUBCASE("builtin modes satisfy both symmetries exactly") {
        auto b = build_bathymetry(g, {{1, Complex(0.25, 0.0), 0.5}, {2, Complex(0.1, 0.0), 0.5}});
        CHECK(b.symmetry_violation() == 0.0);
        CHECK(b.support_radius() == 2);
        for (double y : {0.3, 1.1, 2.9})
            CHECK(b.eval(1.0, y) == doctest::Approx(-b.eval(1.0, -y)).epsilon(1e-14));
        const double h = 1e-5;
        CHECK(b.eval_dy(1.0, 0.7) ==
              doctest::Approx((b.eval(1.0, 0.7 + h) - b.eval(1.0, 0.7 - h)) / (2 * h))
                  .epsilon(1e-7));
        // x-direction goes through the interpolant, so the bar is looser
        CHECK(b.eval_dx(1.0, 0.7) ==
              doctest::Approx((b.eval(1.0 + h, 0.7) - b.eval(1.0 - h, 0.7)) / (2 * h))
                  .epsilon(1e-4));
    }
    SUBCASE("complex amplitude cannot satisfy the mirror relations") {
        CHECK_THROWS_AS(build_bathymetry(g, {{1, Complex(0.25, 0.1), 0.5}}),
                        std::invalid_argument);
    }
    SUBCASE("flat bottom is a valid empty spec") {
        BathymetrySpec flat;
        CHECK(flat.flat());
        CHECK(flat.support_radius() == 0);
        CHECK(flat.eval(1.0, 1.0) == 0.0);
    }
    SUBCASE("table round-trips the analytic family") {
        std::vector<BathymetryTableRow> rows;
        const double a = 0.3, nu = 0.5;
        for (std::size_t k = 0; k < g->size(); ++k) {
            const double x = (*g)[k];
            rows.push_back({1, x, 0.0, a * std::exp(-nu * x)});
        }
        auto b = build_bathymetry_from_table(g, rows);
        CHECK(b.symmetry_violation() == 0.0);
        double worst_v = 0.0, worst_d = 0.0;
        for (std::size_t k = 0; k < g->size(); ++k) {
            const double x = (*g)[k];
            worst_v = std::max(worst_v, std::abs(b.coefficient(1)->values()[k] -
                                                 Complex(0, a * std::exp(-nu * x))));
            worst_d = std::max(worst_d, std::abs(b.coefficient(1)->deriv_values()[k] -
                                                 Complex(0, -nu * a * std::exp(-nu * x))));
        }
        CHECK(worst_v < 1e-10);
        CHECK(worst_d < 1e-5);  // spline derivative
    }
    SUBCASE("non-decaying table is rejected") {
        std::vector<BathymetryTableRow> rows;
        for (std::size_t k = 0; k < g->size(); ++k)
            rows.push_back({1, (*g)[k], 0.0, 0.2 + 0.001 * (*g)[k]});
        CHECK_THROWS_AS(build_bathymetry_from_table(g, rows), std::invalid_argument);
    }
    SUBCASE("table with a real part is rejected") {
        std::vector<BathymetryTableRow> rows;
        for (std::size_t k = 0; k < g->size(); ++k)
            rows.push_back({1, (*g)[k], 0.2 * std::exp(-0.5 * (*g)[k]), 0.0});
        CHECK_THROWS_AS(build_bathymetry_from_table(g, rows), std::invalid_argument);
    }
}
