#include "bathyflow/model.hpp"

#include <cmath>
#include <stdexcept>

namespace bathyflow {

HamiltonianModel::HamiltonianModel(CanonicalChain chain, NormalFormResult nf,
                                   std::shared_ptr<const ExpansionState> expansion)
    : chain_(std::move(chain)), nf_(std::move(nf)), expansion_(std::move(expansion)) {
    // image of the validity disc under the polar map, with margin
    action_max_ = 0.8 * chain_.omega0() * nf_.radius * nf_.radius / 2.0;
}

double HamiltonianModel::h1(double I, double phi, double t) const {
    if (mu() == 0.0 || expansion_->bathymetry.flat()) return 0.0;
    const Vec2 xy = chain_.to_channel({I, phi}, t);
    if (xy[0] < 0.0)
        throw std::domain_error("h1: point maps outside the channel (x < 0)");
    const double psi_tilde = reconstruct_tilde(*expansion_, xy[0], xy[1], t);
    // moving-frame Hamiltonian carries -psi; the valence rescales it
    return -chain_.hamiltonian_factor() * psi_tilde;
}

double HamiltonianModel::safe_time(double I) const {
    double q_max = 0.0;
    for (int i = 0; i < 128; ++i) {
        const double phi = 2.0 * M_PI * double(i) / 128.0;
        const Vec2 pq = chain_.to_galilean({I, phi});
        q_max = std::max(q_max, -pq[1]);
    }
    const double sigma = expansion_->wave.sigma;
    return std::max(0.0, (q_max + 1e-3) * double(expansion_->wave.kappa) / std::abs(sigma));
}

void HamiltonianModel::build_lattice(double t_lo, double t_hi, std::size_t n_action,
                                     std::size_t n_angle, double dt) {
    lat_r_.clear();
    lat_t_.clear();
    lat_coeff_.clear();
    lat_harm_ = n_angle;
    lat_t_hi_ = t_hi;

    // tabulate against the polar radius r = sqrt(2 I / omega0): the mapped
    // perturbation is smooth in r, while fourth derivatives in I blow up at
    // the origin and stall the interpolation error
    const double r_hi = std::sqrt(2.0 * action_max_ / chain_.omega0());
    for (std::size_t i = 0; i < n_action; ++i)
        lat_r_.push_back(r_hi * double(i + 1) / double(n_action));
    const auto nt = std::max<std::size_t>(4, std::size_t((t_hi - t_lo) / dt) + 2);
    for (std::size_t k = 0; k < nt; ++k) lat_t_.push_back(t_lo + dt * double(k));

    lat_coeff_.assign(lat_r_.size() * nt * n_angle, Complex(0, 0));
    std::vector<double> samples(n_angle);
    for (std::size_t i = 0; i < lat_r_.size(); ++i)
        for (std::size_t k = 0; k < nt; ++k) {
            for (std::size_t j = 0; j < n_angle; ++j) {
                const double phi = 2.0 * M_PI * double(j) / double(n_angle);
                const double I = chain_.omega0() * lat_r_[i] * lat_r_[i] / 2.0;
                samples[j] = h1(I, phi, lat_t_[k]);
            }
            // plain DFT; the angle count stays small
            Complex* c = &lat_coeff_[(i * nt + k) * n_angle];
            for (std::size_t r = 0; r < n_angle; ++r) {
                Complex acc(0, 0);
                for (std::size_t j = 0; j < n_angle; ++j) {
                    const double ang = -2.0 * M_PI * double(r) * double(j) / double(n_angle);
                    acc += samples[j] * Complex(std::cos(ang), std::sin(ang));
                }
                c[r] = acc / double(n_angle);
            }
        }
}

namespace {

// cubic Lagrange weights (and derivative weights) on 4 consecutive nodes
struct Stencil {
    std::size_t j0;
    double w[4];
    double dw[4];
};

Stencil stencil_for(const std::vector<double>& nodes, double x) {
    const std::size_t n = nodes.size();
    std::size_t i = 0;
    while (i + 2 < n && nodes[i + 1] < x) ++i;
    std::size_t j0 = (i == 0) ? 0 : std::min(i - 1, n - 4);
    Stencil s;
    s.j0 = j0;
    for (int a = 0; a < 4; ++a) {
        double w = 1.0, dw = 0.0;
        for (int b = 0; b < 4; ++b) {
            if (a == b) continue;
            const double da = nodes[j0 + a] - nodes[j0 + b];
            double prod = 1.0;
            for (int cidx = 0; cidx < 4; ++cidx) {
                if (cidx == a || cidx == b) continue;
                prod *= (x - nodes[j0 + cidx]) / (nodes[j0 + a] - nodes[j0 + cidx]);
            }
            dw += prod / da;
            w *= (x - nodes[j0 + b]) / da;
        }
        s.w[a] = w;
        s.dw[a] = dw;
    }
    return s;
}

}  // namespace

HamiltonianModel::H1Eval HamiltonianModel::h1_lattice(double I, double phi, double t) const {
    H1Eval out;
    if (lat_coeff_.empty()) throw std::logic_error("h1_lattice: lattice not built");
    if (t > lat_t_hi_ || t < lat_t_.front()) return out;  // decayed (or before window)

    const double radius = std::sqrt(2.0 * std::max(I, 0.0) / chain_.omega0());
    const double rc = std::min(std::max(radius, lat_r_.front()), lat_r_.back());
    const Stencil si = stencil_for(lat_r_, rc);
    const Stencil st = stencil_for(lat_t_, t);
    const std::size_t nt = lat_t_.size(), nh = lat_harm_;

    // interpolate the Fourier coefficients, then sum harmonics
    Complex val(0, 0), dR(0, 0), dphi(0, 0);
    for (std::size_t r = 0; r < nh; ++r) {
        Complex c(0, 0), cR(0, 0);
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b) {
                const Complex v = lat_coeff_[((si.j0 + a) * nt + (st.j0 + b)) * nh + r];
                c += si.w[a] * st.w[b] * v;
                cR += si.dw[a] * st.w[b] * v;
            }
        const double rr = (r <= nh / 2) ? double(r) : double(r) - double(nh);
        const Complex ph = Complex(std::cos(rr * phi), std::sin(rr * phi));
        val += c * ph;
        dR += cR * ph;
        dphi += c * ph * Complex(0, rr);
    }
    out.value = val.real();
    // dH/dI = (dH/dr) / (omega0 r)
    out.d_action = dR.real() / (chain_.omega0() * rc);
    out.d_phi = dphi.real();
    return out;
}

HamiltonianModel assemble_model(CanonicalChain chain, NormalFormResult nf,
                                std::shared_ptr<const ExpansionState> expansion) {
    if (!expansion) throw std::invalid_argument("assemble_model: missing expansion state");
    return HamiltonianModel(std::move(chain), std::move(nf), std::move(expansion));
}

}  // namespace bathyflow
