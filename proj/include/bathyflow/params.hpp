#pragma once

#include <string>
#include <vector>

namespace bathyflow {

/// Physical and scaling constants of the channel problem.
struct ChannelParams {
    double F = 1.0;      // geometric scaling constant, O(1)
    double Fcal = -3.0;  // beta-plane constant, must be negative
    double depth = 0.1;  // mean depth d, 0 < d << 1
    double mu = 1e-8;    // bathymetry amplitude, 0 < mu < d
    double nu = 0.5;     // bathymetry decay rate, > 0
    double Mcal = 1.0;   // bathymetry amplitude bound
    double rho = 0.5;    // nominal analyticity width, in (0, 1/2]
};

/// Travelling-wave data; sigma is fixed by the dispersion relation.
struct WaveParams {
    int kappa = 1;     // streamwise wave number
    int m_tilde = 1;   // cross-channel wave number
    double amplitude = 2.0;
    double sigma = 0.0;

    static WaveParams with_dispersion(const ChannelParams& ch, int kappa, int m_tilde,
                                      double amplitude);
};

/// sigma(kappa) = kappa * Fcal / (m_tilde^2 + kappa^2 + F); antisymmetric in kappa.
double dispersion(double F, double Fcal, int kappa, int m_tilde);

/// sigma for the mode pair n = +/-kappa of a given wave.
double sigma_of(const ChannelParams& ch, const WaveParams& wave, int n);

/// Extremal ODE discriminants over the whole mode family beta_m^2 = F + m^2:
/// delta_- = inf |delta_m| (attained at m_star), delta_+ = sup over the
/// oscillatory modes (beta_m^2 < alpha^2), zero if there are none.
struct FamilyBounds {
    double alpha = 0.0;
    double delta_minus = 0.0;
    double delta_plus = 0.0;
    int m_star = 0;
};
FamilyBounds family_bounds(double F, double alpha);

/// The a-priori solver constant of the second-order-ODE estimate.
double ode_growth_constant(double alpha, double nu, const FamilyBounds& fb);

/// Majorant contraction certificate L(mu). The source expression divides by
/// sigma, which is negative under the sign conventions used here; |sigma|
/// keeps the certificate positive (see the validation report).
double majorant_threshold(const ChannelParams& ch, const WaveParams& wave);

struct ValidationCheck {
    std::string name;
    bool passed = false;
    std::string detail;
    double value = 0.0;
};

struct ValidationReport {
    std::vector<ValidationCheck> checks;
    double threshold = 0.0;  // L(mu)
    bool hard_ok = false;    // every check except the majorant threshold
    bool certified = false;  // hard_ok and L(mu) <= 1/2

    const ValidationCheck* find(const std::string& name) const;
    std::string first_failure() const;
};

/// Named checks: "wave direction", "ellipticity", "amplitude window",
/// "decay rate", "analyticity width", "dispersion denominator",
/// "majorant threshold".
ValidationReport validate(const ChannelParams& ch, const WaveParams& wave);

}  // namespace bathyflow
