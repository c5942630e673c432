#include "bathyflow/params.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace bathyflow {

double dispersion(double F, double Fcal, int kappa, int m_tilde) {
    const double denom = double(m_tilde) * m_tilde + double(kappa) * kappa + F;
    if (denom == 0.0) throw std::invalid_argument("dispersion: zero denominator");
    return double(kappa) * Fcal / denom;
}

WaveParams WaveParams::with_dispersion(const ChannelParams& ch, int kappa, int m_tilde,
                                       double amplitude) {
    WaveParams w;
    w.kappa = kappa;
    w.m_tilde = m_tilde;
    w.amplitude = amplitude;
    w.sigma = dispersion(ch.F, ch.Fcal, kappa, m_tilde);
    return w;
}

double sigma_of(const ChannelParams& ch, const WaveParams& wave, int n) {
    if (n != wave.kappa && n != -wave.kappa)
        throw std::invalid_argument("sigma_of: n must be +/-kappa");
    return dispersion(ch.F, ch.Fcal, n, wave.m_tilde);
}

FamilyBounds family_bounds(double F, double alpha) {
    FamilyBounds fb;
    fb.alpha = alpha;
    const double a2 = alpha * alpha;
    double best = std::numeric_limits<double>::infinity();
    double osc_sup = 0.0;
    // beta_m^2 = F + m^2 is increasing in |m|; once past alpha^2 the gap only
    // grows, so a short scan suffices.
    const int m_hi = static_cast<int>(std::ceil(std::sqrt(std::max(0.0, a2 - F)))) + 4;
    for (int m = 0; m <= m_hi; ++m) {
        const double b2 = F + double(m) * m;
        const double gap = b2 - a2;
        if (gap == 0.0) continue;  // resonant member excluded by definition
        const double d = std::sqrt(std::abs(gap));
        if (d < best) {
            best = d;
            fb.m_star = m;
        }
        if (gap < 0.0) osc_sup = std::max(osc_sup, d);
    }
    fb.delta_minus = best;
    fb.delta_plus = osc_sup;
    return fb;
}

double ode_growth_constant(double alpha, double nu, const FamilyBounds& fb) {
    return 32.0 * (2.0 + alpha) * std::exp(alpha + 2.0 * nu + fb.delta_plus) /
           (fb.delta_minus * nu * nu * nu);
}

double majorant_threshold(const ChannelParams& ch, const WaveParams& wave) {
    const double sigma = wave.sigma;
    const double alpha = ch.Fcal / (2.0 * sigma);
    const FamilyBounds fb = family_bounds(ch.F, alpha);
    const double G = ode_growth_constant(alpha, ch.nu, fb);
    return 32.0 * ch.mu * ch.Mcal * G * (std::abs(fb.m_star) + 1.0) /
           (std::abs(sigma) * ch.rho * ch.rho);
}

const ValidationCheck* ValidationReport::find(const std::string& name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

std::string ValidationReport::first_failure() const {
    for (const auto& c : checks)
        if (!c.passed) return c.name;
    return {};
}

ValidationReport validate(const ChannelParams& ch, const WaveParams& wave) {
    ValidationReport rep;
    auto push = [&](std::string name, bool ok, std::string detail, double value) {
        rep.checks.push_back({std::move(name), ok, std::move(detail), value});
    };

    const double denom = double(wave.m_tilde) * wave.m_tilde +
                         double(wave.kappa) * wave.kappa + ch.F;
    push("dispersion denominator", denom > 0.0, "need m_tilde^2 + kappa^2 + F > 0", denom);

    push("wave direction", ch.Fcal < 0.0, "Fcal must be negative", ch.Fcal);

    // -sigma <= kappa * m_tilde * A, equality admitted
    const double lhs = -wave.sigma;
    const double rhs = double(wave.kappa) * wave.m_tilde * wave.amplitude;
    push("ellipticity", lhs <= rhs, "need -sigma <= kappa*m_tilde*A", rhs - lhs);

    push("amplitude window", ch.mu > 0.0 && ch.mu < ch.depth, "need 0 < mu < d", ch.mu);
    push("decay rate", ch.nu > 0.0, "need nu > 0", ch.nu);
    push("analyticity width", ch.rho > 0.0 && ch.rho <= 0.5, "need rho in (0, 1/2]", ch.rho);

    bool hard = true;
    for (const auto& c : rep.checks) hard = hard && c.passed;
    rep.hard_ok = hard;

    double L = std::numeric_limits<double>::infinity();
    if (hard) L = majorant_threshold(ch, wave);
    rep.threshold = L;
    push("majorant threshold", hard && L <= 0.5, "need L(mu) <= 1/2", L);
    rep.certified = hard && L <= 0.5;
    return rep;
}

}  // namespace bathyflow
