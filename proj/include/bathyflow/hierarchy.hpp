#pragma once

#include <map>
#include <vector>

#include "bathyflow/bathymetry.hpp"
#include "bathyflow/bracket.hpp"
#include "bathyflow/mode_ode.hpp"
#include "bathyflow/params.hpp"

namespace bathyflow {

/// J = {(m,n): 0 < |m| <= m_max, n = +/-kappa}.
struct ModeSet {
    int m_max = 0;
    int kappa = 1;
};

using ModeKey = std::pair<int, int>;  // (m, n)

/// Order-j solution layer. Entries absent from the maps are identically zero.
/// The right-hand sides R_{m,n} of the defining mode equations are kept so
/// the PDE residual can rebuild b'' through the equation itself.
struct SpectralLayer {
    int order = 0;
    std::map<ModeKey, SampledCoefficient> coeffs;
    std::map<ModeKey, SampledCoefficient> rhs;
    double eps = 0.0;
};

struct ExpansionState {
    ChannelParams channel;
    WaveParams wave;
    BathymetrySpec bathymetry;
    std::shared_ptr<const Grid> grid;
    std::vector<SpectralLayer> layers;    // 0..J
    std::vector<double> eps;              // per layer
    double L_measured = 0.0;              // worst eps ratio
    double L_certificate = 0.0;           // analytic L(mu)
    bool stopped_early = false;

    int max_order() const { return int(layers.size()) - 1; }
};

struct HierarchyOptions {
    int J_max = 2;
    int M_max = -1;        // <0: exact support bound m_tilde + J_max * bathy radius
    double stop_eps = 1e-14;
    double tol_case = 1e-9;
    double tol_tail = 1e-12;
    bool allow_uncertified = false;
    int jobs = 1;
};

struct ValidationError : std::runtime_error {
    explicit ValidationError(ValidationReport rep)
        : std::runtime_error("validation failed: " + rep.first_failure()),
          report(std::move(rep)) {}
    ValidationReport report;
};

struct DivergenceError : std::runtime_error {
    DivergenceError(std::string msg, std::vector<double> e)
        : std::runtime_error(std::move(msg)), eps(std::move(e)) {}
    std::vector<double> eps;
};

SpectralLayer zeroth_layer(const WaveParams& wave, std::shared_ptr<const Grid> grid);

SpectralLayer next_layer(const SpectralLayer& prev, const BathymetrySpec& bathy,
                         const ChannelParams& ch, const WaveParams& wave,
                         const ModeSet& modes, const HierarchyOptions& opts);

ExpansionState run_hierarchy(const ChannelParams& ch, const WaveParams& wave,
                             const BathymetrySpec& bathy,
                             std::shared_ptr<const Grid> grid,
                             const HierarchyOptions& opts);

/// sup over modes and grid of max(|m| |b|, |b'|), weighted by exp(nu x / 2)
/// for orders j >= 1 (order zero does not decay).
double layer_envelope(const SpectralLayer& layer, double nu);

/// Reconstructed streamfunction and its first derivatives at a channel point;
/// order zero enters through its closed trigonometric form.
struct FieldSample {
    double psi = 0.0, psi_x = 0.0, psi_y = 0.0, psi_t = 0.0;
};
double reconstruct(const ExpansionState& st, double x, double y, double t, int J = -1);
FieldSample reconstruct_with_gradient(const ExpansionState& st, double x, double y,
                                      double t, int J = -1);
/// Perturbation part only (layers j >= 1).
double reconstruct_tilde(const ExpansionState& st, double x, double y, double t);

struct SymmetryReport {
    double odd_violation = 0.0;        // sup |b_{-m,n} + b_{m,n}|
    double conjugate_violation = 0.0;  // sup |b_{m,n} - conj(b_{-m,-n})|
};
SymmetryReport symmetry_check(const ExpansionState& st);

/// sup |d_x psi| on the channel walls y in {0, 2pi} over random (x, t).
double boundary_check(const ExpansionState& st, int samples, unsigned seed);

/// Re-solves the n = -kappa half of every layer directly (the conjugate mode
/// equation) and reports the worst deviation from the mirrored entries.
double independent_nflip_check(const ExpansionState& st, const HierarchyOptions& opts);

/// sup of the shallow-water operator applied to the order-J reconstruction at
/// random channel points (x on grid nodes); expected O(mu^{J+1}).
double pde_residual(const ExpansionState& st, int samples, unsigned seed, int J = -1);

}  // namespace bathyflow
