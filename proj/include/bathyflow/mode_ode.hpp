#pragma once

#include "bathyflow/params.hpp"
#include "bathyflow/sampled.hpp"

namespace bathyflow {

enum class OdeCase { Osc, Res, Hyp };

/// Coefficients of B'' - 2 i alpha B' - beta^2 B = R with the discriminant
/// delta = sqrt(beta^2 - alpha^2) on the principal branch: real > 0 in the
/// hyperbolic case, i*gamma with gamma > 0 in the oscillatory one.
struct OdeCoefficients {
    double alpha = 0.0;
    double beta_sq = 0.0;
    Complex delta{0.0, 0.0};
    OdeCase case_tag = OdeCase::Hyp;
};

OdeCoefficients classify(double alpha, double beta_sq, double tol_case = 1e-9);

struct OdeSolution {
    SampledCoefficient B;           // value and derivative samples
    SampledCoefficient I1, I2;      // constituent integrals (B = I1 + I2 off resonance)
    Complex K1{0.0, 0.0}, K2{0.0, 0.0};
};

struct SolveOptions {
    double tol_tail = 1e-12;  // truncation budget for the improper integrals
};

/// Thrown when a quadrature tail cannot be truncated within tol_tail.
struct SolverRefusal : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The unique bounded, decaying solution picked by the tail integration
/// constants: the coefficient of the growing homogeneous branch is cancelled,
/// and (off the hyperbolic case) the non-decaying oscillatory residue too.
/// The derivative comes from the identity B' = i alpha B + delta (I1 - I2),
/// never from differencing samples.
OdeSolution solve_mode(const OdeCoefficients& coeffs, const SampledCoefficient& R,
                       const SolveOptions& opts = {});

/// Independent self-test: sup |B'' - 2 i alpha B' - beta^2 B - R| with both
/// derivatives rebuilt from the B samples by high-order central differences.
double residual(const OdeSolution& sol, const OdeCoefficients& coeffs,
                const SampledCoefficient& R);

struct BoundCertificate {
    double growth_constant = 0.0;   // the a-priori constant of the estimate
    double margin_B = 0.0;          // min over grid of bound/|B|, >1 means satisfied
    double margin_dB = 0.0;
    double fitted_rate = 0.0;       // decay rate fitted to |B|
    bool rate_ok = false;           // fitted rate >= nu/2
    double res_constant = 0.0;      // the resonant-case variant, reported only
};

/// Diagnostic only: evaluates the a-priori bounds on the real axis and
/// reports the worst margin. Violations are reported, not fatal.
BoundCertificate bound_certificate(const OdeSolution& sol, const OdeCoefficients& coeffs,
                                   double M, double nu, double rho_hat,
                                   const FamilyBounds& fb);

}  // namespace bathyflow
