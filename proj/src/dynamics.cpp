#include "bathyflow/dynamics.hpp"

#include <cmath>
#include <stdexcept>

namespace bathyflow {

Vec2 lab_velocity(const ExpansionState& st, double x, double y, double t) {
    const FieldSample s = reconstruct_with_gradient(st, x, y, t);
    return {-s.psi_y, s.psi_x};
}

Trajectory integrate(const VectorField& f, Vec2 start, double t0, double t1, double h,
                     const std::function<double(const Vec2&)>& conserved,
                     const std::function<bool(const Vec2&)>& in_domain) {
    if (!(h > 0)) throw std::invalid_argument("integrate: step must be positive");
    Trajectory tr;
    Vec2 y = start;
    double t = t0;
    auto record = [&] {
        tr.times.push_back(t);
        tr.states.push_back(y);
        if (conserved) tr.conserved.push_back(conserved(y));
    };
    record();
    const auto steps = static_cast<long long>(std::ceil((t1 - t0) / h - 1e-12));
    for (long long s = 0; s < steps; ++s) {
        const double hs = std::min(h, t1 - t);
        const Vec2 k1 = f(t, y);
        const Vec2 y2{y[0] + 0.5 * hs * k1[0], y[1] + 0.5 * hs * k1[1]};
        const Vec2 k2 = f(t + 0.5 * hs, y2);
        const Vec2 y3{y[0] + 0.5 * hs * k2[0], y[1] + 0.5 * hs * k2[1]};
        const Vec2 k3 = f(t + 0.5 * hs, y3);
        const Vec2 y4{y[0] + hs * k3[0], y[1] + hs * k3[1]};
        const Vec2 k4 = f(t + hs, y4);
        y = {y[0] + hs / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
             y[1] + hs / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])};
        t += hs;
        if (in_domain && !in_domain(y)) {
            tr.truncated = true;
            record();
            return tr;
        }
        record();
    }
    return tr;
}

Trajectory integrate_frozen(const WaveParams& wave, Vec2 start, double t0, double t1,
                            double h) {
    const FrozenHamiltonian H{wave};
    return integrate([&](double, const Vec2& v) { return H.velocity(v[0], v[1]); }, start,
                     t0, t1, h, [&](const Vec2& v) { return H.value(v[0], v[1]); });
}

Trajectory integrate_lab(const ExpansionState& st, Vec2 start, double t0, double t1,
                         double h) {
    return integrate([&](double t, const Vec2& v) { return lab_velocity(st, v[0], v[1], t); },
                     start, t0, t1, h, nullptr,
                     [](const Vec2& v) { return v[0] >= 0.0; });
}

std::pair<Complex, Complex> linearize(const std::function<Vec2(const Vec2&)>& field,
                                      const Vec2& v, double h) {
    const auto fp0 = field({v[0] + h, v[1]}), fm0 = field({v[0] - h, v[1]});
    const auto fp1 = field({v[0], v[1] + h}), fm1 = field({v[0], v[1] - h});
    const double a = (fp0[0] - fm0[0]) / (2 * h), b = (fp1[0] - fm1[0]) / (2 * h);
    const double c = (fp0[1] - fm0[1]) / (2 * h), d = (fp1[1] - fm1[1]) / (2 * h);
    const Complex tr(a + d, 0.0), det(a * d - b * c, 0.0);
    const Complex disc = std::sqrt(tr * tr / 4.0 - det);
    return {tr / 2.0 + disc, tr / 2.0 - disc};
}

ProbeResult stability_probe(HamiltonianModel& model, double I0, double T,
                            const ProbeOptions& opts) {
    if (!(I0 > 0.0) || I0 > model.action_max())
        throw std::invalid_argument("stability_probe: I0 outside the admissible interval");

    const double omega = model.frequency(I0);
    const double h = opts.h > 0 ? opts.h : 1e-3 * 2.0 * M_PI / std::abs(omega);

    ProbeResult res;
    // channel constraint: the lattice spans the whole admissible action
    // window, so clear it for every tabulated node
    res.t_start = model.safe_time(model.action_max());
    if (!model.has_lattice()) {
        // perturbation decays like exp(-nu |sigma| t / (2 kappa)); tabulate
        // until it is far below integration resolution
        const auto& ch = model.expansion().channel;
        const auto& wv = model.expansion().wave;
        const double rate = ch.nu * std::abs(wv.sigma) / (2.0 * wv.kappa);
        const double t_hi = std::min(T, res.t_start + 40.0 / rate);
        model.build_lattice(res.t_start, t_hi, 9, opts.lattice_angles, 0.1);
    }

    auto rhs = [&](double t, const Vec2& v) -> Vec2 {
        const auto e = model.h1_lattice(v[0], v[1], t);
        return {-e.d_phi, model.frequency(v[0]) + e.d_action};
    };

    Vec2 y{I0, 0.0};
    double t = res.t_start;
    double worst = 0.0;
    double next_record = t;
    const auto steps = static_cast<long long>(std::ceil((T - t) / h));
    for (long long s = 0; s < steps; ++s) {
        const double hs = std::min(h, T - t);
        const Vec2 k1 = rhs(t, y);
        const Vec2 y2{y[0] + 0.5 * hs * k1[0], y[1] + 0.5 * hs * k1[1]};
        const Vec2 k2 = rhs(t + 0.5 * hs, y2);
        const Vec2 y3{y[0] + 0.5 * hs * k2[0], y[1] + 0.5 * hs * k2[1]};
        const Vec2 k3 = rhs(t + 0.5 * hs, y3);
        const Vec2 y4{y[0] + hs * k3[0], y[1] + hs * k3[1]};
        const Vec2 k4 = rhs(t + hs, y4);
        y = {y[0] + hs / 6.0 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
             y[1] + hs / 6.0 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])};
        t += hs;
        worst = std::max(worst, std::abs(y[0] - I0));
        if (t >= next_record || s + 1 == steps) {
            res.trajectory.times.push_back(t);
            res.trajectory.states.push_back(y);
            next_record += opts.record_dt;
        }
    }
    res.excursion = worst;
    return res;
}

}  // namespace bathyflow
