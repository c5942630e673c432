#include <doctest.h>

#include <cmath>
#include <random>

#include "bathyflow/dynamics.hpp"
#include "bathyflow/normal_form.hpp"
#include "demo.hpp"
#include "oracles.hpp"

using namespace bathyflow;

namespace {
WaveParams demo_wave() {
    auto ch = demo::channel(1e-8);
    return demo::wave(ch);  // sigma=-1, A=2, lambda=sqrt(3)
}
}  // namespace

TEST_CASE("frozen Hamiltonian") {
    const WaveParams w = demo_wave();
    const FrozenHamiltonian H{w};

    SUBCASE("gradient vanishes at every reported equilibrium") {
        for (const auto& e : equilibria(w)) {
            const Vec2 g = H.gradient(e.p, e.q);
            CHECK(std::abs(g[0]) < 1e-14);
            CHECK(std::abs(g[1]) < 1e-14);
        }
    }
    SUBCASE("zero amplitude reduces to a linear drift") {
        WaveParams w0 = w;
        w0.amplitude = 0.0;
        const FrozenHamiltonian H0{w0};
        CHECK(H0.value(0.7, 1.1) == doctest::Approx(w.sigma * 0.7).epsilon(1e-15));
        const Vec2 v = H0.velocity(0.3, -0.2);
        CHECK(v[0] == 0.0);
        CHECK(v[1] == doctest::Approx(w.sigma / w.kappa));
    }
    SUBCASE("numeric gradient agrees with the analytic one") {
        std::mt19937 rng(2);
        std::uniform_real_distribution<double> u(-2.0, 2.0);
        const double h = 1e-6;
        for (int i = 0; i < 20; ++i) {
            const double p = u(rng), q = u(rng);
            const Vec2 g = H.gradient(p, q);
            CHECK(std::abs(g[0] - (H.value(p + h, q) - H.value(p - h, q)) / (2 * h)) < 1e-8);
            CHECK(std::abs(g[1] - (H.value(p, q + h) - H.value(p, q - h)) / (2 * h)) < 1e-8);
        }
    }
}

TEST_CASE("equilibria classification") {
    SUBCASE("cos ratio 1/2 puts the points at pi/3") {
        WaveParams w;  // synthetic: sigma/(kappa m~ A) = +1/2
        w.kappa = 1;
        w.m_tilde = 1;
        w.amplitude = 2.0;
        w.sigma = 1.0;
        auto eq = equilibria(w);
        REQUIRE(eq.size() == 4);
        CHECK(eq[0].p == doctest::Approx(M_PI / 3).epsilon(1e-12));
        CHECK(eq[0].type == EquilibriumType::Elliptic);
        CHECK(eq[1].p == doctest::Approx(-M_PI / 3).epsilon(1e-12));
        CHECK(eq[2].q == doctest::Approx(M_PI / 3).epsilon(1e-12));
        CHECK(eq[2].type == EquilibriumType::Hyperbolic);
        CHECK(eq[3].q == doctest::Approx(-M_PI / 3).epsilon(1e-12));
    }
    SUBCASE("boundary ratio collapses the points onto the axes") {
        WaveParams w;
        w.kappa = 1;
        w.m_tilde = 1;
        w.amplitude = 1.0;
        w.sigma = 1.0;
        for (const auto& e : equilibria(w)) {
            CHECK(e.p == 0.0);
            CHECK(e.q == 0.0);
        }
    }
    SUBCASE("ratio above one is refused") {
        WaveParams w;
        w.kappa = 1;
        w.m_tilde = 1;
        w.amplitude = 0.3;
        w.sigma = 1.0;
        CHECK_THROWS_AS(equilibria(w), std::invalid_argument);
    }
    SUBCASE("linearisation eigenvalues are +-i|sigma|lambda and +-|sigma|lambda") {
        const WaveParams w = demo_wave();
        const double val = std::abs(w.sigma) * std::sqrt(3.0);
        for (const auto& e : equilibria(w)) {
            if (e.type == EquilibriumType::Elliptic) {
                CHECK(std::abs(e.eigenvalue.real()) < 1e-12);
                CHECK(std::abs(e.eigenvalue.imag()) == doctest::Approx(val).epsilon(1e-12));
            } else {
                CHECK(std::abs(e.eigenvalue.imag()) < 1e-12);
                CHECK(std::abs(e.eigenvalue.real()) == doctest::Approx(val).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("normal form of the composed Hamiltonian") {
    const WaveParams w = demo_wave();
    auto [chain, nf] = normal_form_chain(w);
    const double lam = std::sqrt(3.0);

    SUBCASE("frequency and quadratic coefficient") {
        CHECK(nf.lambda == doctest::Approx(lam).epsilon(1e-15));
        CHECK(nf.omega == doctest::Approx(w.sigma * lam).epsilon(1e-15));
        CHECK(std::abs(nf.quadratic_coeff - w.sigma * lam / 2.0) < 1e-14);
        CHECK(nf.taylor.at(0, 2) == doctest::Approx(w.sigma * lam / 2.0).epsilon(1e-14));
        CHECK(std::abs(nf.taylor.at(1, 1)) < 1e-15);
        CHECK(std::abs(nf.taylor.at(1, 0)) < 1e-15);
        CHECK(std::abs(nf.taylor.at(0, 1)) < 1e-15);
    }
    SUBCASE("sigma=-2 wave gives omega = -2 sqrt(3)") {
        ChannelParams ch2 = demo::channel(1e-8);
        ch2.Fcal = -6.0;
        auto w2 = WaveParams::with_dispersion(ch2, 2, 1, 2.0);
        REQUIRE(w2.sigma == doctest::Approx(-2.0));
        auto [c2, nf2] = normal_form_chain(w2);
        CHECK(nf2.omega == doctest::Approx(-3.4641016).epsilon(1e-7));
    }
    SUBCASE("angle-dependent monomials are annihilated") {
        CHECK(nf.angle_residue < 1e-10);
        CHECK(nf.alpha.size() == 2);  // degree 6: two radial corrections
    }
    SUBCASE("generator map transports the Taylor polynomial onto the normal form") {
        std::mt19937 rng(6);
        std::uniform_real_distribution<double> u(-0.2, 0.2);
        for (int i = 0; i < 50; ++i) {
            const double pb = u(rng), qb = u(rng);
            const auto& fac = chain.factors()[1];  // nf-generator
            const Vec2 pq = fac.fwd({pb, qb});
            const double exact =
                w.sigma * (pq[0] - (std::sin(pq[0]) + lam * std::cos(pq[0])) * std::cos(pq[1])) +
                w.sigma * lam;
            const double nfv = nf.normal_form.eval(pb, qb);
            CHECK(std::abs(exact - nfv) < 2e-10);
        }
    }
    SUBCASE("whole chain: angle independence and slope of the transported energy") {
        const FrozenHamiltonian H{w};
        const double cH = chain.hamiltonian_factor();
        const double I1 = 0.5 * chain.omega0() * 0.04 * 0.04;  // radius 0.04
        const double I2 = 2.0 * I1;
        auto K = [&](double I, double phi) {
            const Vec2 pq = chain.to_galilean({I, phi});
            return cH * H.value(pq[0], pq[1]);
        };
        const double K10 = K(I1, 0.0);
        for (double phi : {0.7, 1.9, 3.3, 5.1})
            CHECK(std::abs(K(I1, phi) - K10) < 1e-8);
        const double dH = h0_value(nf, chain.omega0(), I2) - h0_value(nf, chain.omega0(), I1);
        CHECK(K(I2, 0.0) - K10 == doctest::Approx(dH).epsilon(1e-6));
    }
    SUBCASE("action-angle map round trip") {
        const Vec2 origin = pq_to_action_angle(0.0, 0.0, chain.omega0());
        CHECK(origin[0] == 0.0);
        CHECK(origin[1] == 0.0);
        std::mt19937 rng(8);
        std::uniform_real_distribution<double> u(-0.5, 0.5);
        for (int i = 0; i < 30; ++i) {
            const double P = u(rng), Q = u(rng);
            const Vec2 ia = pq_to_action_angle(P, Q, chain.omega0());
            CHECK(ia[0] >= 0.0);
            const Vec2 back = action_angle_to_pq(ia[0], ia[1], chain.omega0());
            CHECK(std::abs(back[0] - P) < 1e-12);
            CHECK(std::abs(back[1] - Q) < 1e-12);
        }
    }
    SUBCASE("h0 equals the radial normal form through the valence") {
        for (double r : {0.02, 0.05}) {
            const Vec2 ia = pq_to_action_angle(r, 0.0, chain.omega0());
            const double lhs = h0_value(nf, chain.omega0(), ia[0]);
            const double rhs = chain.omega0() * nf.normal_form.truncated(nf.degree).eval(r, 0.0);
            CHECK(std::abs(lhs - rhs) < 1e-12);
        }
    }
    SUBCASE("degenerate and underspecified requests are refused") {
        WaveParams flatw = w;
        flatw.amplitude = 0.5;
        CHECK_THROWS_AS(normal_form_chain(flatw), std::invalid_argument);
        WaveParams crit = w;
        crit.amplitude = 1.0;  // kappa m~ A = |sigma|: lambda = 0
        CHECK_THROWS_AS(normal_form_chain(crit), std::invalid_argument);
        NormalFormOptions low;
        low.degree = 3;
        CHECK_THROWS_AS(normal_form_chain(w, low), std::invalid_argument);
    }
}

TEST_CASE("chain canonicity") {
    const WaveParams w = demo_wave();
    auto [chain, nf] = normal_form_chain(w);

    std::mt19937 rng(10);
    std::uniform_real_distribution<double> ur(0.1, 0.9), uphi(0.0, 2 * M_PI);
    std::vector<Vec2> pts;
    for (int i = 0; i < 100; ++i) {
        const double r = nf.radius * ur(rng);
        const double a = uphi(rng);
        pts.push_back(pq_to_action_angle(r * std::cos(a), r * std::sin(a), chain.omega0()));
    }
    auto rep = symplectic_check(chain, pts);
    for (const auto& f : rep.factors) CHECK(f.det_error < 1e-6);
    CHECK(rep.composed_det_error < 1e-6);
    CHECK(rep.round_trip_error < 1e-8);

    SUBCASE("wavenumber scaling factor is exactly area preserving") {
        ChannelParams ch2 = demo::channel(1e-8);
        ch2.Fcal = -6.0;
        auto w2 = WaveParams::with_dispersion(ch2, 2, 1, 2.0);
        auto [c2, nf2] = normal_form_chain(w2);
        bool found = false;
        for (const auto& f : c2.factors())
            if (f.name == "wavenumber-scaling") {
                found = true;
                CHECK(f.det == 1.0);
                const Vec2 img = f.fwd({0.3, 0.5});
                CHECK(img[0] == doctest::Approx(0.6));
                CHECK(img[1] == doctest::Approx(0.25));
            }
        CHECK(found);
    }
}

TEST_CASE("truncated generator inverse loses exactly the cutoff order") {
    const WaveParams w = demo_wave();
    NormalFormOptions opts;
    auto [chain, nf] = normal_form_chain(w, opts);
    const auto& fwd = chain.factors()[1].fwd;
    const auto& inv = chain.factors()[1].inv;

    auto residual_at = [&](double r) {
        double worst = 0.0;
        for (int i = 0; i < 16; ++i) {
            const double a = 2 * M_PI * i / 16.0;
            const Vec2 z{r * std::cos(a), r * std::sin(a)};
            const Vec2 back = inv(fwd(z));
            worst = std::max(worst, std::hypot(back[0] - z[0], back[1] - z[1]));
        }
        return worst;
    };
    // full-grade inverse: round trip far below the acceptance bar
    CHECK(residual_at(0.2) < 1e-9);

    // truncating the inverse at the NF degree leaves an O(r^{degree}) defect
    Poly2 X = Poly2::variable_p(opts.degree), Y = Poly2::variable_q(opts.degree);
    for (const auto& gen : nf.generators) {
        Poly2 ngen = gen;
        ngen *= -1.0;
        Poly2 nx = lie_transform(Poly2::variable_p(opts.degree), ngen, opts.degree);
        Poly2 ny = lie_transform(Poly2::variable_q(opts.degree), ngen, opts.degree);
        Poly2 cx = Poly2::compose(nx, X, Y, opts.degree);
        Poly2 cy = Poly2::compose(ny, X, Y, opts.degree);
        X = cx;
        Y = cy;
    }
    auto truncated_residual = [&](double r) {
        double worst = 0.0;
        for (int i = 0; i < 16; ++i) {
            const double a = 2 * M_PI * i / 16.0;
            const Vec2 z{r * std::cos(a), r * std::sin(a)};
            const Vec2 fz = fwd(z);
            const Vec2 back{X.eval(fz[0], fz[1]), Y.eval(fz[0], fz[1])};
            worst = std::max(worst, std::hypot(back[0] - z[0], back[1] - z[1]));
        }
        return worst;
    };
    const double r1 = truncated_residual(0.4);
    const double r2 = truncated_residual(0.2);
    CHECK(r1 / r2 > std::pow(2.0, double(opts.degree)));
}
