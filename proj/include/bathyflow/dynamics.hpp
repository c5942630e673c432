#pragma once

#include <functional>
#include <optional>

#include "bathyflow/model.hpp"

namespace bathyflow {

/// Geostrophic velocity of the reconstructed streamfunction in channel
/// coordinates: xdot = -d_y psi, ydot = d_x psi.
Vec2 lab_velocity(const ExpansionState& st, double x, double y, double t);

struct Trajectory {
    std::vector<double> times;
    std::vector<Vec2> states;
    std::vector<double> conserved;  // frozen-frame energy when recorded
    bool truncated = false;         // left the domain before t1
};

using VectorField = std::function<Vec2(double, const Vec2&)>;

/// Classical fixed-step fourth-order integration.
Trajectory integrate(const VectorField& f, Vec2 start, double t0, double t1, double h,
                     const std::function<double(const Vec2&)>& conserved = nullptr,
                     const std::function<bool(const Vec2&)>& in_domain = nullptr);

/// Streamlines of the frozen (co-moving) field, energy recorded.
Trajectory integrate_frozen(const WaveParams& wave, Vec2 start, double t0, double t1,
                            double h);

/// Streamlines of the reconstructed lab field; truncates at x < 0.
Trajectory integrate_lab(const ExpansionState& st, Vec2 start, double t0, double t1,
                         double h);

/// Eigenvalues of the finite-difference Jacobian of a time-frozen planar field.
std::pair<Complex, Complex> linearize(const std::function<Vec2(const Vec2&)>& field,
                                      const Vec2& point, double fd_step = 1e-6);

struct ProbeResult {
    double excursion = 0.0;      // sup_t |I(t) - I(0)|
    double t_start = 0.0;        // first admissible time (channel constraint)
    Trajectory trajectory;       // (I, phi) samples
};

struct ProbeOptions {
    double h = 0.0;              // 0: 1e-3 * 2pi/|omega|
    double record_dt = 1.0;
    std::size_t lattice_angles = 64;
};

/// Integrates the canonical equations of H0(I) + H1(I, phi, t) from the first
/// admissible time up to T and reports the largest action excursion.
ProbeResult stability_probe(HamiltonianModel& model, double I0, double T,
                            const ProbeOptions& opts = {});

}  // namespace bathyflow
