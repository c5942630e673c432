#include "bathyflow/hierarchy.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <random>
#include <set>
#include <thread>

namespace bathyflow {

namespace {
constexpr Complex kI{0.0, 1.0};

SampledCoefficient conjugated(const SampledCoefficient& c) {
    return c.negated_conjugate().negated();
}
}  // namespace

SpectralLayer zeroth_layer(const WaveParams& wave, std::shared_ptr<const Grid> grid) {
    SpectralLayer layer;
    layer.order = 0;
    const double a4 = wave.amplitude / 4.0;
    for (int sm : {+1, -1})
        for (int sn : {+1, -1}) {
            const int m = sm * wave.m_tilde;
            const int n = sn * wave.kappa;
            std::vector<Complex> v(grid->size()), d(grid->size());
            for (std::size_t k = 0; k < grid->size(); ++k) {
                // A (4i)^{-1} sign(m) exp(i n x)
                const Complex e = std::exp(kI * double(n) * (*grid)[k]);
                v[k] = -kI * a4 * double(sm) * e;
                d[k] = kI * double(n) * v[k];
            }
            layer.coeffs.emplace(ModeKey{m, n},
                                 SampledCoefficient(grid, std::move(v), std::move(d),
                                                    DecayEnvelope{a4, 0.0}));
        }
    layer.eps = layer_envelope(layer, 0.0);
    return layer;
}

double layer_envelope(const SpectralLayer& layer, double nu) {
    double s = 0.0;
    const bool weighted = layer.order >= 1;
    for (const auto& [key, c] : layer.coeffs) {
        const auto& g = c.grid();
        const double am = std::abs(double(key.first));
        for (std::size_t k = 0; k < g.size(); ++k) {
            const double w = weighted ? std::exp(nu * g[k] / 2.0) : 1.0;
            s = std::max(s, w * am * std::abs(c.values()[k]));
            s = std::max(s, w * std::abs(c.deriv_values()[k]));
        }
    }
    return s;
}

SpectralLayer next_layer(const SpectralLayer& prev, const BathymetrySpec& bathy,
                         const ChannelParams& ch, const WaveParams& wave,
                         const ModeSet& modes, const HierarchyOptions& opts) {
    SpectralLayer layer;
    layer.order = prev.order + 1;
    if (bathy.flat()) {
        layer.eps = 0.0;
        return layer;
    }

    // g = mu * g~ enters the bracket; scale once
    CoeffSeq g;
    for (const auto& [l, c] : bathy.coefficients()) g.emplace(l, c.scaled(ch.mu));

    const int n = modes.kappa;
    const double sigma_n = sigma_of(ch, wave, n);
    const double alpha = ch.Fcal / (2.0 * sigma_n);

    CoeffSeq f;  // previous layer, n = +kappa half
    for (const auto& [key, c] : prev.coeffs)
        if (key.second == n) f.emplace(key.first, c);
    if (f.empty()) {
        layer.eps = 0.0;
        return layer;
    }

    // reachable support: previous support shifted by the bathymetry modes
    std::vector<int> targets;
    {
        std::set<int> reach;
        for (const auto& [lf, cf] : f)
            for (const auto& [lg, cg] : g) reach.insert(lf + lg);
        for (int m : reach)
            if (m >= 1 && m <= modes.m_max) targets.push_back(m);
    }

    struct Slot {
        int m = 0;
        SampledCoefficient R, B;
        bool used = false;
    };
    std::vector<Slot> slots(targets.size());

    auto solve_one = [&](std::size_t i) {
        const int m = targets[i];
        SampledCoefficient conv = bracket_mode(f, g, m);
        if (conv.sup_abs() == 0.0) return;
        SampledCoefficient R = conv.scaled(1.0 / sigma_n);
        const auto coeffs = classify(alpha, ch.F + double(m) * m, opts.tol_case);
        OdeSolution sol;
        try {
            sol = solve_mode(coeffs, R, SolveOptions{opts.tol_tail});
        } catch (const SolverRefusal& e) {
            throw SolverRefusal("layer " + std::to_string(layer.order) + " mode (" +
                                std::to_string(m) + "," + std::to_string(n) + "): " + e.what());
        }
        slots[i] = Slot{m, std::move(R), std::move(sol.B), true};
    };

    const int jobs = std::max(1, opts.jobs);
    if (jobs == 1 || targets.size() < 4) {
        for (std::size_t i = 0; i < targets.size(); ++i) solve_one(i);
    } else {
        std::vector<std::thread> pool;
        std::atomic<std::size_t> cursor{0};
        std::exception_ptr err;
        std::mutex err_mu;
        for (int t = 0; t < std::min<int>(jobs, int(targets.size())); ++t)
            pool.emplace_back([&] {
                for (;;) {
                    const std::size_t i = cursor.fetch_add(1);
                    if (i >= targets.size()) return;
                    try {
                        solve_one(i);
                    } catch (...) {
                        std::lock_guard<std::mutex> lk(err_mu);
                        if (!err) err = std::current_exception();
                        return;
                    }
                }
            });
        for (auto& th : pool) th.join();
        if (err) std::rethrow_exception(err);
    }

    // one solve per positive m; the three mirror images follow exactly from
    // b_{-m,n} = -b_{m,n} and b_{m,-n} = -conj(b_{m,n})
    for (auto& s : slots) {
        if (!s.used) continue;
        layer.coeffs.emplace(ModeKey{-s.m, n}, s.B.negated());
        layer.coeffs.emplace(ModeKey{s.m, -n}, s.B.negated_conjugate());
        layer.coeffs.emplace(ModeKey{-s.m, -n}, conjugated(s.B));
        layer.rhs.emplace(ModeKey{-s.m, n}, s.R.negated());
        layer.rhs.emplace(ModeKey{s.m, -n}, s.R.negated_conjugate());
        layer.rhs.emplace(ModeKey{-s.m, -n}, conjugated(s.R));
        layer.coeffs.emplace(ModeKey{s.m, n}, std::move(s.B));
        layer.rhs.emplace(ModeKey{s.m, n}, std::move(s.R));
    }
    layer.eps = layer_envelope(layer, ch.nu);
    return layer;
}

ExpansionState run_hierarchy(const ChannelParams& ch, const WaveParams& wave,
                             const BathymetrySpec& bathy,
                             std::shared_ptr<const Grid> grid,
                             const HierarchyOptions& opts) {
    ValidationReport rep = validate(ch, wave);
    if (!rep.hard_ok || (!rep.certified && !opts.allow_uncertified))
        throw ValidationError(rep);

    ExpansionState st;
    st.channel = ch;
    st.wave = wave;
    st.bathymetry = bathy;
    st.grid = grid;
    st.L_certificate = rep.threshold;

    ModeSet modes;
    modes.kappa = wave.kappa;
    modes.m_max = opts.M_max >= 0
                      ? opts.M_max
                      : std::abs(wave.m_tilde) + opts.J_max * bathy.support_radius();

    st.layers.push_back(zeroth_layer(wave, grid));
    st.eps.push_back(st.layers[0].eps);

    int rising = 0;
    for (int j = 1; j <= opts.J_max; ++j) {
        SpectralLayer layer = next_layer(st.layers.back(), bathy, ch, wave, modes, opts);
        st.layers.push_back(std::move(layer));
        const double e = st.layers.back().eps;
        st.eps.push_back(e);
        const double prev = st.eps[j - 1];
        if (prev > 0.0 && e / prev > 1.0) {
            if (++rising >= 2)
                throw DivergenceError("hierarchy diverging: eps ratio > 1 twice", st.eps);
        } else {
            rising = 0;
        }
        if (e < opts.stop_eps) {
            st.stopped_early = true;
            break;
        }
    }

    st.L_measured = 0.0;
    for (std::size_t j = 1; j < st.eps.size(); ++j)
        if (st.eps[j - 1] > 0.0) st.L_measured = std::max(st.L_measured, st.eps[j] / st.eps[j - 1]);
    return st;
}

namespace {

struct LayerZero {
    double A, sigma;
    int kappa, m_tilde;
    double psi(double x, double y, double t) const {
        return A * std::sin(m_tilde * y) * std::cos(kappa * x + sigma * t);
    }
    double px(double x, double y, double t) const {
        return -A * kappa * std::sin(m_tilde * y) * std::sin(kappa * x + sigma * t);
    }
    double py(double x, double y, double t) const {
        return A * m_tilde * std::cos(m_tilde * y) * std::cos(kappa * x + sigma * t);
    }
    double pt(double x, double y, double t) const {
        return -A * sigma * std::sin(m_tilde * y) * std::sin(kappa * x + sigma * t);
    }
};

LayerZero layer_zero(const ExpansionState& st) {
    return LayerZero{st.wave.amplitude, st.wave.sigma, st.wave.kappa, st.wave.m_tilde};
}

double checked_real(Complex z, const char* what) {
    if (std::abs(z.imag()) > 1e-10)
        throw std::runtime_error(std::string("reconstruct: symmetry violation, Im(") + what +
                                 ") = " + std::to_string(z.imag()));
    return z.real();
}

int clamp_order(const ExpansionState& st, int J) {
    return (J < 0) ? st.max_order() : std::min(J, st.max_order());
}

}  // namespace

double reconstruct(const ExpansionState& st, double x, double y, double t, int J) {
    const int Jc = clamp_order(st, J);
    Complex acc(0.0, 0.0);
    for (int j = 1; j <= Jc; ++j)
        for (const auto& [key, c] : st.layers[j].coeffs) {
            const auto [m, n] = key;
            const double sn = sigma_of(st.channel, st.wave, n);
            acc += c.eval(x) * std::exp(kI * (m * y + sn * t));
        }
    return layer_zero(st).psi(x, y, t) + checked_real(acc, "psi");
}

double reconstruct_tilde(const ExpansionState& st, double x, double y, double t) {
    Complex acc(0.0, 0.0);
    for (int j = 1; j <= st.max_order(); ++j)
        for (const auto& [key, c] : st.layers[j].coeffs) {
            const auto [m, n] = key;
            const double sn = sigma_of(st.channel, st.wave, n);
            acc += c.eval(x) * std::exp(kI * (m * y + sn * t));
        }
    return checked_real(acc, "psi~");
}

FieldSample reconstruct_with_gradient(const ExpansionState& st, double x, double y,
                                      double t, int J) {
    const int Jc = clamp_order(st, J);
    Complex v(0, 0), vx(0, 0), vy(0, 0), vt(0, 0);
    for (int j = 1; j <= Jc; ++j)
        for (const auto& [key, c] : st.layers[j].coeffs) {
            const auto [m, n] = key;
            const double sn = sigma_of(st.channel, st.wave, n);
            const Complex ph = std::exp(kI * (m * y + sn * t));
            const Complex b = c.eval(x);
            v += b * ph;
            vx += c.eval_deriv(x) * ph;
            vy += kI * double(m) * b * ph;
            vt += kI * sn * b * ph;
        }
    const LayerZero z0 = layer_zero(st);
    FieldSample out;
    out.psi = z0.psi(x, y, t) + checked_real(v, "psi");
    out.psi_x = z0.px(x, y, t) + checked_real(vx, "psi_x");
    out.psi_y = z0.py(x, y, t) + checked_real(vy, "psi_y");
    out.psi_t = z0.pt(x, y, t) + checked_real(vt, "psi_t");
    return out;
}

SymmetryReport symmetry_check(const ExpansionState& st) {
    SymmetryReport rep;
    for (const auto& layer : st.layers)
        for (const auto& [key, c] : layer.coeffs) {
            const auto [m, n] = key;
            auto odd = layer.coeffs.find(ModeKey{-m, n});
            auto cnj = layer.coeffs.find(ModeKey{-m, -n});
            if (odd == layer.coeffs.end() || cnj == layer.coeffs.end()) {
                rep.odd_violation = std::numeric_limits<double>::infinity();
                continue;
            }
            for (std::size_t k = 0; k < c.values().size(); ++k) {
                rep.odd_violation = std::max(
                    rep.odd_violation, std::abs(c.values()[k] + odd->second.values()[k]));
                rep.conjugate_violation =
                    std::max(rep.conjugate_violation,
                             std::abs(c.values()[k] - std::conj(cnj->second.values()[k])));
            }
        }
    return rep;
}

double boundary_check(const ExpansionState& st, int samples, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> ux(0.0, st.grid->x_max());
    std::uniform_real_distribution<double> ut(0.0, 10.0 * 2.0 * M_PI / std::abs(st.wave.sigma));
    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const double x = ux(rng), t = ut(rng);
        for (double y : {0.0, 2.0 * M_PI}) {
            const auto s = reconstruct_with_gradient(st, x, y, t);
            worst = std::max(worst, std::abs(s.psi_x));
        }
    }
    return worst;
}

double independent_nflip_check(const ExpansionState& st, const HierarchyOptions& opts) {
    if (st.bathymetry.flat()) return 0.0;
    CoeffSeq g;
    for (const auto& [l, c] : st.bathymetry.coefficients())
        g.emplace(l, c.scaled(st.channel.mu));

    const int n = -st.wave.kappa;
    const double sigma_n = sigma_of(st.channel, st.wave, n);
    const double alpha = st.channel.Fcal / (2.0 * sigma_n);  // negative branch

    double worst = 0.0;
    for (int j = 1; j <= st.max_order(); ++j) {
        CoeffSeq f;
        for (const auto& [key, c] : st.layers[j - 1].coeffs)
            if (key.second == n) f.emplace(key.first, c);
        if (f.empty()) continue;
        for (const auto& [key, stored] : st.layers[j].coeffs) {
            const auto [m, nn] = key;
            if (nn != n || m <= 0) continue;
            SampledCoefficient conv = bracket_mode(f, g, m);
            SampledCoefficient R = conv.scaled(1.0 / sigma_n);
            const auto coeffs =
                classify(alpha, st.channel.F + double(m) * m, opts.tol_case);
            OdeSolution sol = solve_mode(coeffs, R, SolveOptions{opts.tol_tail});
            for (std::size_t k = 0; k < stored.values().size(); ++k) {
                worst = std::max(worst,
                                 std::abs(sol.B.values()[k] - stored.values()[k]));
                worst = std::max(worst, std::abs(sol.B.deriv_values()[k] -
                                                 stored.deriv_values()[k]));
            }
        }
    }
    return worst;
}

double pde_residual(const ExpansionState& st, int samples, unsigned seed, int J) {
    const int Jc = clamp_order(st, J);
    std::mt19937 rng(seed);
    std::uniform_int_distribution<std::size_t> uk(0, st.grid->size() - 1);
    std::uniform_real_distribution<double> uy(0.0, 2.0 * M_PI);
    std::uniform_real_distribution<double> ut(0.0, 5.0 * 2.0 * M_PI / std::abs(st.wave.sigma));

    double worst = 0.0;
    for (int i = 0; i < samples; ++i) {
        const std::size_t k = uk(rng);
        const double x = (*st.grid)[k];
        const double y = uy(rng), t = ut(rng);

        // d_t(Lap psi - F psi) + Fcal d_x psi, mode by mode through the
        // defining equations: only i*sigma(n)*R_{m,n} survives
        Complex modal(0.0, 0.0);
        for (int j = 1; j <= Jc; ++j)
            for (const auto& [key, R] : st.layers[j].rhs) {
                const auto [m, n] = key;
                const double sn = sigma_of(st.channel, st.wave, n);
                modal += kI * sn * R.values()[k] * std::exp(kI * (m * y + sn * t));
            }

        const auto s = reconstruct_with_gradient(st, x, y, t, Jc);
        const double jac = s.psi_x * st.channel.mu * st.bathymetry.eval_dy(x, y) -
                           s.psi_y * st.channel.mu * st.bathymetry.eval_dx(x, y);
        worst = std::max(worst, std::abs(modal.real() + jac) + std::abs(modal.imag()));
    }
    return worst;
}

}  // namespace bathyflow
