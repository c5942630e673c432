#include "bathyflow/normal_form.hpp"

#include <cmath>
#include <stdexcept>

namespace bathyflow {

double FrozenHamiltonian::value(double p, double q) const {
    return wave.sigma / wave.kappa * p -
           wave.amplitude * std::sin(wave.m_tilde * p) * std::cos(wave.kappa * q);
}

Vec2 FrozenHamiltonian::gradient(double p, double q) const {
    const double dp = wave.sigma / wave.kappa -
                      wave.amplitude * wave.m_tilde * std::cos(wave.m_tilde * p) *
                          std::cos(wave.kappa * q);
    const double dq = wave.amplitude * wave.kappa * std::sin(wave.m_tilde * p) *
                      std::sin(wave.kappa * q);
    return {dp, dq};
}

Vec2 FrozenHamiltonian::velocity(double p, double q) const {
    const Vec2 g = gradient(p, q);
    return {-g[1], g[0]};
}

std::vector<Equilibrium> equilibria(const WaveParams& wave) {
    const double km = double(wave.kappa) * wave.m_tilde;
    const double c = wave.sigma / (km * wave.amplitude);
    if (std::abs(c) > 1.0)
        throw std::invalid_argument("equilibria: |sigma/(kappa m~ A)| > 1, no stagnation");
    const double theta = std::acos(c);

    auto classify_at = [&](double p, double q) {
        const double c1 = std::cos(wave.m_tilde * p), s1 = std::sin(wave.m_tilde * p);
        const double c2 = std::cos(wave.kappa * q), s2 = std::sin(wave.kappa * q);
        const double a = wave.amplitude;
        const double det = a * a * km * km * (s1 * s1 * c2 * c2 - c1 * c1 * s2 * s2);
        Equilibrium e;
        e.p = p;
        e.q = q;
        e.type = det > 0 ? EquilibriumType::Elliptic : EquilibriumType::Hyperbolic;
        e.eigenvalue = std::sqrt(Complex(-det, 0.0));
        return e;
    };

    std::vector<Equilibrium> out;
    out.push_back(classify_at(theta / wave.m_tilde, 0.0));
    out.push_back(classify_at(-theta / wave.m_tilde, 0.0));
    out.push_back(classify_at(0.0, theta / wave.kappa));
    out.push_back(classify_at(0.0, -theta / wave.kappa));
    return out;
}

namespace {

Poly2 sin_series(const Poly2& v, int cutoff) {
    Poly2 out(cutoff);
    Poly2 pow = v.truncated(cutoff);
    double fact = 1.0;
    for (int k = 1; k <= cutoff; ++k) {
        if (k > 1) {
            pow = pow.multiplied(v, cutoff);
            fact *= double(k);
        }
        if (k % 2 == 1) {
            Poly2 t = pow;
            t *= ((k / 2) % 2 == 0 ? 1.0 : -1.0) / fact;
            out += t;
        }
    }
    return out;
}

Poly2 cos_series(const Poly2& v, int cutoff) {
    Poly2 out = Poly2::constant(1.0, cutoff);
    Poly2 pow = Poly2::constant(1.0, cutoff);
    double fact = 1.0;
    for (int k = 1; k <= cutoff; ++k) {
        pow = pow.multiplied(v, cutoff);
        fact *= double(k);
        if (k % 2 == 0) {
            Poly2 t = pow;
            t *= ((k / 2) % 2 == 0 ? 1.0 : -1.0) / fact;
            out += t;
        }
    }
    return out;
}

struct PolyMap {
    Poly2 X, Y;
};

PolyMap flow_of(const Poly2& chi, double sign, int cutoff) {
    Poly2 gen = chi;
    gen *= sign;
    return {lie_transform(Poly2::variable_p(cutoff), gen, cutoff),
            lie_transform(Poly2::variable_q(cutoff), gen, cutoff)};
}

PolyMap compose_maps(const PolyMap& outer, const PolyMap& inner, int cutoff) {
    return {Poly2::compose(outer.X, inner.X, inner.Y, cutoff),
            Poly2::compose(outer.Y, inner.X, inner.Y, cutoff)};
}

}  // namespace

std::pair<CanonicalChain, NormalFormResult> normal_form_chain(const WaveParams& wave,
                                                              const NormalFormOptions& opts) {
    if (opts.degree < 4)
        throw std::invalid_argument("normal_form_chain: degree < 4 carries no content");
    const double km = double(wave.kappa) * wave.m_tilde;
    const double ratio = km * wave.amplitude / wave.sigma;
    const double lam_sq = ratio * ratio - 1.0;
    if (!(lam_sq > 0.0))
        throw std::invalid_argument("normal_form_chain: degenerate ellipticity (lambda = 0)");
    const double lambda = std::sqrt(lam_sq);
    const double omega = wave.sigma * lambda;
    const int D = std::max(opts.map_degree, opts.degree + 4);

    NormalFormResult nf;
    nf.lambda = lambda;
    nf.omega = omega;
    nf.degree = opts.degree;
    nf.map_degree = D;

    // sigma [ P - (sin P + lambda cos P) cos Q ], expanded at the origin
    const Poly2 P = Poly2::variable_p(D), Q = Poly2::variable_q(D);
    Poly2 trig = sin_series(P, D);
    {
        Poly2 cp = cos_series(P, D);
        cp *= lambda;
        trig += cp;
    }
    Poly2 H = P - trig.multiplied(cos_series(Q, D), D);
    H *= wave.sigma;
    H.set(0, 0, 0.0);  // constant energy offset
    nf.taylor = H;
    nf.quadratic_coeff = H.at(2, 0);

    for (int d = 3; d <= opts.degree; ++d) {
        const Poly2 Hd = H.homogeneous_part(d);
        if (Hd.max_abs_coeff() == 0.0) continue;
        auto split = solve_homological(Hd, d, omega);
        if (split.generator.max_abs_coeff() == 0.0) continue;
        H = lie_transform(H, split.generator, D);
        nf.generators.push_back(split.generator);
    }
    nf.normal_form = H;

    double residue = 0.0;
    for (int d = 3; d <= opts.degree; ++d) {
        auto split = solve_homological(H.homogeneous_part(d), d, omega);
        Poly2 angle = H.homogeneous_part(d);
        angle -= split.resonant;
        residue = std::max(residue, angle.max_abs_coeff());
    }
    nf.angle_residue = residue;

    for (int d = 4; d <= opts.degree; d += 2) nf.alpha.push_back(H.at(d, 0));

    // validity radius: largest dyadic r with the dropped-tail majorant below
    // radius_tolerance of the quadratic term
    double r = 1.0;
    for (int i = 0; i < 40; ++i, r /= 2.0) {
        const double rem = H.majorant_at(r, opts.degree + 1, D);
        if (rem < opts.radius_tolerance * std::abs(nf.quadratic_coeff) * r * r) break;
    }
    nf.radius = r;

    // generator map: innermost flow first, highest degree innermost
    PolyMap fwd{Poly2::variable_p(D), Poly2::variable_q(D)};
    PolyMap inv = fwd;
    for (auto it = nf.generators.rbegin(); it != nf.generators.rend(); ++it)
        fwd = compose_maps(flow_of(*it, 1.0, D), fwd, D);
    for (const auto& gen : nf.generators) inv = compose_maps(flow_of(gen, -1.0, D), inv, D);

    CanonicalChain chain(wave, lambda, fwd.X, fwd.Y, inv.X, inv.Y);
    return {std::move(chain), std::move(nf)};
}

double h0_value(const NormalFormResult& nf, double omega0, double I) {
    double out = 0.0;
    const double s = 2.0 * I / omega0;
    for (int k = 1; 2 * k <= nf.degree; ++k)
        out += nf.normal_form.at(2 * k, 0) * std::pow(s, k) * omega0;
    return out;
}

double h0_slope(const NormalFormResult& nf, double omega0, double I) {
    double out = 0.0;
    const double s = 2.0 * I / omega0;
    for (int k = 1; 2 * k <= nf.degree; ++k)
        out += nf.normal_form.at(2 * k, 0) * double(k) * std::pow(s, k - 1) * 2.0;
    return out;
}

}  // namespace bathyflow
