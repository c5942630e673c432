#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "bathyflow/params.hpp"
#include "bathyflow/poly2.hpp"

namespace bathyflow {

using Vec2 = std::array<double, 2>;

/// One factor of the coordinate chain, written old = fwd(new) as in the
/// construction. `det` is the constant Jacobian determinant the factor is
/// supposed to have; the two pure scalings are canonical up to that known
/// valence, which multiplies the Hamiltonian instead.
struct ChainFactor {
    std::string name;
    std::function<Vec2(const Vec2&)> fwd;
    std::function<Vec2(const Vec2&)> inv;
    double det = 1.0;
};

/// Composition (I, phi) -> (P_B, Q_B) -> (P, Q) -> (p'', q'') -> (p', q') ->
/// (p, q), with the Galilean shift to channel coordinates applied last.
class CanonicalChain {
public:
    CanonicalChain() = default;
    CanonicalChain(const WaveParams& wave, double lambda, Poly2 nf_fwd_p, Poly2 nf_fwd_q,
                   Poly2 nf_inv_p, Poly2 nf_inv_q);

    const std::vector<ChainFactor>& factors() const { return factors_; }
    double omega0() const { return omega0_; }        // -sigma*lambda > 0
    double lambda() const { return lambda_; }
    double expansion_point() const { return p_shift_; }
    /// product of the declared factor determinants
    double composed_det() const;
    /// Hamiltonian valence of the whole chain: kappa*m_tilde*omega0.
    double hamiltonian_factor() const;

    Vec2 to_galilean(const Vec2& action_angle) const;  // (I,phi) -> (p,q)
    Vec2 from_galilean(const Vec2& pq) const;          // (p,q) -> (I,phi)
    /// channel point fed by the Galilean frame: x = q - sigma t / kappa, y = p
    Vec2 to_channel(const Vec2& action_angle, double t) const;

private:
    WaveParams wave_;
    double lambda_ = 0.0, omega0_ = 0.0, p_shift_ = 0.0;
    std::vector<ChainFactor> factors_;  // ordered inner (action-angle) to outer
};

/// P = sqrt(2 I / omega0) cos(phi), Q = sqrt(2 I / omega0) sin(phi).
Vec2 action_angle_to_pq(double I, double phi, double omega0);
/// I = omega0 (P^2 + Q^2)/2, phi = atan2(Q, P) (0 at the origin).
Vec2 pq_to_action_angle(double P, double Q, double omega0);

struct SymplecticReport {
    struct Entry {
        std::string name;
        double det_error = 0.0;  // max |det J / declared - 1|
    };
    std::vector<Entry> factors;
    double composed_det_error = 0.0;
    double round_trip_error = 0.0;
};

/// Finite-difference Jacobians of every factor and of the composition on the
/// given sample points, plus the forward/inverse round trip.
SymplecticReport symplectic_check(const CanonicalChain& chain,
                                  const std::vector<Vec2>& action_angle_points,
                                  double fd_step = 1e-6);

}  // namespace bathyflow
