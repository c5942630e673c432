#include <doctest.h>

#include <cmath>
#include <random>

#include "bathyflow/dynamics.hpp"
#include "demo.hpp"
#include "oracles.hpp"

using namespace bathyflow;

namespace {
WaveParams demo_wave() { return demo::wave(demo::channel(1e-8)); }
}  // namespace

TEST_CASE("velocity fields") {
    const WaveParams w = demo_wave();

    SUBCASE("frozen field vanishes at the equilibria") {
        const FrozenHamiltonian H{w};
        for (const auto& e : equilibria(w)) {
            const Vec2 v = H.velocity(e.p, e.q);
            CHECK(std::abs(v[0]) < 1e-14);
            CHECK(std::abs(v[1]) < 1e-14);
        }
    }
    SUBCASE("walls kill the cross-channel lab velocity") {
        auto st = demo::run(demo::certified_mu(), 2, false, 512);
        for (double x : {0.5, 3.0, 11.0})
            for (double y : {0.0, 2 * M_PI}) {
                const Vec2 v = lab_velocity(st, x, y, 1.3);
                CHECK(std::abs(v[1]) < 1e-10);  // ydot = psi_x
            }
    }
    SUBCASE("zero amplitude and flat bottom give a zero lab field") {
        auto ch = demo::channel(1e-8);
        WaveParams w0 = demo_wave();
        w0.amplitude = 0.0;
        ExpansionState st;
        st.channel = ch;
        st.wave = w0;
        st.grid = demo::grid(512);
        st.layers.push_back(zeroth_layer(w0, st.grid));
        st.eps.push_back(0.0);
        const Vec2 v = lab_velocity(st, 2.0, 1.0, 0.5);
        CHECK(v[0] == 0.0);
        CHECK(v[1] == 0.0);
    }
    SUBCASE("reconstructed field is divergence free") {
        auto st = demo::run(demo::certified_mu(), 2, false, 512);
        std::mt19937 rng(12);
        std::uniform_real_distribution<double> ux(1.0, 20.0), uy(0.5, 5.5);
        const double h = 5e-3;
        for (int i = 0; i < 25; ++i) {
            const double x = ux(rng), y = uy(rng), t = 0.21 * i;
            auto vel = [&](double xx, double yy) { return lab_velocity(st, xx, yy, t); };
            // fourth-order five-point stencils
            const double dudx = (-vel(x + 2 * h, y)[0] + 8 * vel(x + h, y)[0] -
                                 8 * vel(x - h, y)[0] + vel(x - 2 * h, y)[0]) /
                                (12 * h);
            const double dvdy = (-vel(x, y + 2 * h)[1] + 8 * vel(x, y + h)[1] -
                                 8 * vel(x, y - h)[1] + vel(x, y - 2 * h)[1]) /
                                (12 * h);
            CHECK(std::abs(dudx + dvdy) < 1e-8);
        }
    }
}

TEST_CASE("fixed-step integration of the frozen field") {
    const WaveParams w = demo_wave();
    const auto eq = equilibria(w);
    const auto* elliptic = &eq[0];

    SUBCASE("energy drift is fourth order in the step") {
        const Vec2 start{elliptic->p + 0.4, 0.25};
        auto drift = [&](double h) {
            auto tr = integrate_frozen(w, start, 0.0, 10.0, h);
            double worst = 0.0;
            for (double e : tr.conserved) worst = std::max(worst, std::abs(e - tr.conserved[0]));
            return worst;
        };
        const double d1 = drift(0.01), d2 = drift(0.005);
        CHECK(d1 / d2 == doctest::Approx(16.0).epsilon(0.25));
    }
    SUBCASE("the elliptic point is a fixed point") {
        auto tr = integrate_frozen(w, {elliptic->p, elliptic->q}, 0.0, 10.0, 1e-3);
        double worst = 0.0;
        for (const auto& s : tr.states)
            worst = std::max(worst, std::hypot(s[0] - elliptic->p, s[1] - elliptic->q));
        CHECK(worst < 1e-8);
    }
    SUBCASE("small orbits rotate at |sigma| lambda") {
        const double expect = std::abs(w.sigma) * std::sqrt(3.0);
        auto tr = integrate_frozen(w, {elliptic->p + 0.02, 0.0}, 0.0, 40.0, 1e-3);
        const double f = oracles::rotation_frequency(tr.times, tr.states, elliptic->p, 0.0);
        CHECK(std::abs(std::abs(f) - expect) / expect < 0.01);
    }
}

TEST_CASE("linearisation at the stagnation points") {
    const WaveParams w = demo_wave();
    const FrozenHamiltonian H{w};
    auto field = [&](const Vec2& v) { return H.velocity(v[0], v[1]); };
    const double expect = std::abs(w.sigma) * std::sqrt(3.0);
    for (const auto& e : equilibria(w)) {
        auto [l1, l2] = linearize(field, {e.p, e.q});
        if (e.type == EquilibriumType::Elliptic) {
            CHECK(std::abs(l1.real()) < 1e-7);
            CHECK(std::abs(std::abs(l1.imag()) - expect) < 1e-4);
        } else {
            CHECK(std::abs(l1.imag()) < 1e-7);
            CHECK(std::abs(std::abs(l1.real()) - expect) < 1e-4);
            CHECK(l1.real() * l2.real() < 0.0);
        }
    }
    SUBCASE("zero amplitude degenerates to the zero matrix") {
        WaveParams w0 = w;
        w0.amplitude = 0.0;
        const FrozenHamiltonian H0{w0};
        auto f0 = [&](const Vec2& v) { return H0.velocity(v[0], v[1]); };
        auto [l1, l2] = linearize(f0, {0.3, 0.1});
        CHECK(std::abs(l1) < 1e-10);
        CHECK(std::abs(l2) < 1e-10);
    }
}

TEST_CASE("stability probe") {
    SUBCASE("integrable limit: flat bottom keeps the action exactly") {
        auto ch = demo::channel(demo::certified_mu());
        auto w = demo::wave(ch);
        auto g = demo::grid(512);
        HierarchyOptions opts;
        opts.J_max = 1;
        auto st = std::make_shared<ExpansionState>(
            run_hierarchy(ch, w, BathymetrySpec{}, g, opts));
        auto [chain, nf] = normal_form_chain(w);
        HamiltonianModel model = assemble_model(std::move(chain), std::move(nf), st);
        ProbeOptions popts;
        popts.h = 0.02;
        auto probe = stability_probe(model, 0.3 * model.action_max(), 50.0, popts);
        CHECK(probe.excursion < 1e-9);
    }
    SUBCASE("uneven bottom: excursion is finite and the trajectory is recorded") {
        auto st = std::make_shared<ExpansionState>(demo::run(1e-3, 2));
        auto [chain, nf] = normal_form_chain(st->wave);
        HamiltonianModel model = assemble_model(std::move(chain), std::move(nf), st);
        ProbeOptions popts;
        popts.h = 0.02;
        const double I0 = 0.3 * model.action_max();
        auto probe = stability_probe(model, I0, 80.0, popts);
        CHECK(probe.excursion > 0.0);
        CHECK(probe.excursion < 0.2 * I0);  // far from escaping
        CHECK(probe.trajectory.times.size() > 10);
        CHECK(std::isfinite(probe.trajectory.states.back()[0]));
    }
    SUBCASE("action outside the admissible window is refused") {
        auto st = std::make_shared<ExpansionState>(demo::run(1e-3, 1));
        auto [chain, nf] = normal_form_chain(st->wave);
        HamiltonianModel model = assemble_model(std::move(chain), std::move(nf), st);
        CHECK_THROWS_AS(stability_probe(model, 2.0 * model.action_max(), 10.0),
                        std::invalid_argument);
    }
}

TEST_CASE("model H1 direct evaluation") {
    auto st = std::make_shared<ExpansionState>(demo::run(1e-3, 2));
    auto [chain, nf] = normal_form_chain(st->wave);
    HamiltonianModel model = assemble_model(std::move(chain), std::move(nf), st);
    const double I = 0.4 * model.action_max();

    SUBCASE("early times can leave the channel") {
        bool threw = false;
        for (double phi = 0.0; phi < 2 * M_PI; phi += 0.3) {
            try {
                model.h1(I, phi, 0.0);
            } catch (const std::domain_error&) {
                threw = true;
            }
        }
        CHECK(threw);
    }
    SUBCASE("after the safe time every angle is admissible") {
        const double t0 = model.safe_time(I);
        for (double phi = 0.0; phi < 2 * M_PI; phi += 0.3)
            CHECK_NOTHROW(model.h1(I, phi, t0 + 0.1));
    }
    SUBCASE("lattice interpolation matches the direct path") {
        const double t0 = model.safe_time(model.action_max());
        model.build_lattice(t0, t0 + 30.0, 9, 64, 0.1);
        std::mt19937 rng(14);
        std::uniform_real_distribution<double> up(0.0, 2 * M_PI), ut(t0 + 1.0, t0 + 25.0);
        double scale = 0.0, worst = 0.0;
        for (int i = 0; i < 40; ++i) {
            const double phi = up(rng), t = ut(rng);
            const double direct = model.h1(I, phi, t);
            const double lat = model.h1_lattice(I, phi, t).value;
            scale = std::max(scale, std::abs(direct));
            worst = std::max(worst, std::abs(direct - lat));
        }
        CHECK(worst < 5e-6 * std::max(scale, 1e-12));
    }
}
