#include "bathyflow/chain.hpp"

#include <cmath>
#include <stdexcept>

namespace bathyflow {

Vec2 action_angle_to_pq(double I, double phi, double omega0) {
    if (I < 0) throw std::domain_error("action_angle_to_pq: negative action");
    const double r = std::sqrt(2.0 * I / omega0);
    return {r * std::cos(phi), r * std::sin(phi)};
}

Vec2 pq_to_action_angle(double P, double Q, double omega0) {
    const double I = omega0 * (P * P + Q * Q) / 2.0;
    const double phi = (P == 0.0 && Q == 0.0) ? 0.0 : std::atan2(Q, P);
    return {I, phi};
}

CanonicalChain::CanonicalChain(const WaveParams& wave, double lambda, Poly2 nf_fwd_p,
                               Poly2 nf_fwd_q, Poly2 nf_inv_p, Poly2 nf_inv_q)
    : wave_(wave), lambda_(lambda) {
    omega0_ = -wave.sigma * lambda;
    if (!(omega0_ > 0)) throw std::invalid_argument("CanonicalChain: need -sigma*lambda > 0");
    const double km = double(wave.kappa) * wave.m_tilde;
    const double cosv = wave.sigma / (km * wave.amplitude);
    // the branch of the elliptic pair whose expansion carries +lambda*cos(P);
    // the mirror branch flips the sign of the odd part
    p_shift_ = -std::acos(cosv) / double(wave.m_tilde);

    const double w0 = omega0_;
    factors_.push_back(
        {"action-angle",
         [w0](const Vec2& v) { return action_angle_to_pq(v[0], v[1], w0); },
         [w0](const Vec2& v) { return pq_to_action_angle(v[0], v[1], w0); },
         1.0 / w0});
    factors_.push_back(
        {"nf-generator",
         [fp = std::move(nf_fwd_p), fq = std::move(nf_fwd_q)](const Vec2& v) {
             return Vec2{fp.eval(v[0], v[1]), fq.eval(v[0], v[1])};
         },
         [gp = std::move(nf_inv_p), gq = std::move(nf_inv_q)](const Vec2& v) {
             return Vec2{gp.eval(v[0], v[1]), gq.eval(v[0], v[1])};
         },
         1.0});
    factors_.push_back({"mode-scaling",
                        [km](const Vec2& v) { return Vec2{v[0] / km, v[1]}; },
                        [km](const Vec2& v) { return Vec2{v[0] * km, v[1]}; },
                        1.0 / km});
    const double k = double(wave_.kappa);
    factors_.push_back({"wavenumber-scaling",
                        [k](const Vec2& v) { return Vec2{k * v[0], v[1] / k}; },
                        [k](const Vec2& v) { return Vec2{v[0] / k, k * v[1]}; },
                        1.0});
    const double ps = p_shift_;
    factors_.push_back({"elliptic-shift",
                        [ps](const Vec2& v) { return Vec2{v[0] + ps, v[1]}; },
                        [ps](const Vec2& v) { return Vec2{v[0] - ps, v[1]}; },
                        1.0});
}

double CanonicalChain::composed_det() const {
    double d = 1.0;
    for (const auto& f : factors_) d *= f.det;
    return d;
}

double CanonicalChain::hamiltonian_factor() const {
    return double(wave_.kappa) * wave_.m_tilde * omega0_;
}

Vec2 CanonicalChain::to_galilean(const Vec2& aa) const {
    Vec2 v = aa;
    for (const auto& f : factors_) v = f.fwd(v);
    return v;
}

Vec2 CanonicalChain::from_galilean(const Vec2& pq) const {
    Vec2 v = pq;
    for (auto it = factors_.rbegin(); it != factors_.rend(); ++it) v = it->inv(v);
    return v;
}

Vec2 CanonicalChain::to_channel(const Vec2& aa, double t) const {
    const Vec2 pq = to_galilean(aa);
    const double x = pq[1] - wave_.sigma * t / double(wave_.kappa);
    return {x, pq[0]};
}

namespace {

std::array<double, 4> fd_jacobian(const std::function<Vec2(const Vec2&)>& f, const Vec2& v,
                                  double h) {
    auto fp0 = f({v[0] + h, v[1]}), fm0 = f({v[0] - h, v[1]});
    auto fp1 = f({v[0], v[1] + h}), fm1 = f({v[0], v[1] - h});
    return {(fp0[0] - fm0[0]) / (2 * h), (fp1[0] - fm1[0]) / (2 * h),
            (fp0[1] - fm0[1]) / (2 * h), (fp1[1] - fm1[1]) / (2 * h)};
}

double det2(const std::array<double, 4>& j) { return j[0] * j[3] - j[1] * j[2]; }

}  // namespace

SymplecticReport symplectic_check(const CanonicalChain& chain,
                                  const std::vector<Vec2>& points, double fd_step) {
    SymplecticReport rep;
    for (const auto& f : chain.factors()) rep.factors.push_back({f.name, 0.0});

    for (const Vec2& start : points) {
        Vec2 v = start;
        for (std::size_t i = 0; i < chain.factors().size(); ++i) {
            const auto& f = chain.factors()[i];
            const auto J = fd_jacobian(f.fwd, v, fd_step);
            rep.factors[i].det_error =
                std::max(rep.factors[i].det_error, std::abs(det2(J) / f.det - 1.0));
            v = f.fwd(v);
        }
        const auto Jc = fd_jacobian([&](const Vec2& u) { return chain.to_galilean(u); },
                                    start, fd_step);
        rep.composed_det_error = std::max(
            rep.composed_det_error, std::abs(det2(Jc) / chain.composed_det() - 1.0));

        const Vec2 back = chain.from_galilean(chain.to_galilean(start));
        double dphi = std::remainder(back[1] - start[1], 2.0 * M_PI);
        rep.round_trip_error = std::max(
            rep.round_trip_error, std::max(std::abs(back[0] - start[0]), std::abs(dphi)));
    }
    return rep;
}

}  // namespace bathyflow
