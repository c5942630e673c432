#pragma once

#include <vector>

#include "bathyflow/chain.hpp"
#include "bathyflow/params.hpp"
#include "bathyflow/poly2.hpp"

namespace bathyflow {

/// Co-moving frame Hamiltonian (sigma/kappa) p - A sin(m~ p) cos(kappa q).
struct FrozenHamiltonian {
    WaveParams wave;
    double value(double p, double q) const;
    Vec2 gradient(double p, double q) const;   // (dH/dp, dH/dq)
    Vec2 velocity(double p, double q) const;   // (pdot, qdot) = (-dH/dq, dH/dp)
};

enum class EquilibriumType { Elliptic, Hyperbolic };

struct Equilibrium {
    double p = 0.0, q = 0.0;
    EquilibriumType type = EquilibriumType::Elliptic;
    Complex eigenvalue;  // one of the linearisation pair (the other is -it)
};

/// The four stagnation points of the frozen flow in [-pi,pi]^2, classified by
/// the linearisation. Requires |sigma/(kappa m~ A)| <= 1.
std::vector<Equilibrium> equilibria(const WaveParams& wave);

struct NormalFormResult {
    double lambda = 0.0;        // ellipticity constant
    double omega = 0.0;         // sigma * lambda
    double quadratic_coeff = 0.0;
    std::vector<double> alpha;  // radial coefficients of (P^2+Q^2)^{k+1}, k>=1
    std::vector<Poly2> generators;
    Poly2 taylor;               // expansion of the composed Hamiltonian
    Poly2 normal_form;          // after the generator chain, grade map_degree
    double angle_residue = 0.0; // worst angle-dependent coefficient, d <= degree
    double radius = 0.0;        // validity radius R
    int degree = 6;
    int map_degree = 16;
};

struct NormalFormOptions {
    int degree = 6;
    int map_degree = 16;  // grade cap for the generator maps and remainders
    double radius_tolerance = 1e-3;
};

/// Composes the shift and the two scalings, Taylor-expands at the elliptic
/// origin, and removes angle dependence degree by degree. Returns the chain
/// (including the generator map and the polar factor) and the NF data.
std::pair<CanonicalChain, NormalFormResult> normal_form_chain(
    const WaveParams& wave, const NormalFormOptions& opts = {});

/// H0(I) derived from the radial normal form through the chain valence.
double h0_value(const NormalFormResult& nf, double omega0, double I);
double h0_slope(const NormalFormResult& nf, double omega0, double I);

}  // namespace bathyflow
