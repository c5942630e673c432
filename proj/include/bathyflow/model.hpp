#pragma once

#include <memory>

#include "bathyflow/chain.hpp"
#include "bathyflow/hierarchy.hpp"
#include "bathyflow/normal_form.hpp"

namespace bathyflow {

/// H(I, phi, eta, t) = H0(I) + eta + H1(I, phi, t). The eta slot is the
/// formal conjugate of t and carries no computation. H1 is the mapped
/// perturbation streamfunction, scaled by the chain valence and carrying the
/// sign the moving-frame Hamiltonian gives the streamfunction.
class HamiltonianModel {
public:
    HamiltonianModel(CanonicalChain chain, NormalFormResult nf,
                     std::shared_ptr<const ExpansionState> expansion);

    double h0(double I) const { return h0_value(nf_, chain_.omega0(), I); }
    double frequency(double I) const { return h0_slope(nf_, chain_.omega0(), I); }

    /// Direct evaluation through the chain; throws std::domain_error when the
    /// requested point maps to x < 0 (early times / large radii).
    double h1(double I, double phi, double t) const;

    /// Smallest time after which every angle at action <= I stays inside the
    /// channel (x >= 0), with a small safety margin.
    double safe_time(double I) const;

    /// Admissible action interval (0, I_max].
    double action_max() const { return action_max_; }
    const CanonicalChain& chain() const { return chain_; }
    const NormalFormResult& normal_form() const { return nf_; }
    const ExpansionState& expansion() const { return *expansion_; }
    double mu() const { return expansion_->channel.mu; }

    /// Tabulates H1 on an (I, phi, t) lattice with a Fourier representation in
    /// phi, so trajectory integration does not re-invert the chain per step.
    void build_lattice(double t_lo, double t_hi, std::size_t n_action = 9,
                       std::size_t n_angle = 64, double dt = 0.25);
    bool has_lattice() const { return !lat_coeff_.empty(); }

    struct H1Eval {
        double value = 0.0, d_phi = 0.0, d_action = 0.0;
    };
    /// Interpolated H1 and its derivatives; zero beyond the tabulated window
    /// (the perturbation has decayed below resolution there).
    H1Eval h1_lattice(double I, double phi, double t) const;

private:
    CanonicalChain chain_;
    NormalFormResult nf_;
    std::shared_ptr<const ExpansionState> expansion_;
    double action_max_ = 0.0;

    // lattice: complex Fourier coefficients over the angle, on a
    // (radius, time) grid with r = sqrt(2 I / omega0)
    std::vector<Complex> lat_coeff_;  // [(i_r * nt + i_t) * n_harm + harmonic]
    std::vector<double> lat_r_, lat_t_;
    std::size_t lat_harm_ = 0;
    double lat_t_hi_ = 0.0;
};

HamiltonianModel assemble_model(CanonicalChain chain, NormalFormResult nf,
                                std::shared_ptr<const ExpansionState> expansion);

}  // namespace bathyflow
