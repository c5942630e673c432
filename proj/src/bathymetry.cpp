#include "bathyflow/bathymetry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bathyflow {

BathymetrySpec::BathymetrySpec(std::map<int, SampledCoefficient> coeffs)
    : coeffs_(std::move(coeffs)) {}

int BathymetrySpec::support_radius() const {
    int r = 0;
    for (const auto& [l, c] : coeffs_) r = std::max(r, std::abs(l));
    return r;
}

const SampledCoefficient* BathymetrySpec::coefficient(int l) const {
    auto it = coeffs_.find(l);
    return it == coeffs_.end() ? nullptr : &it->second;
}

double BathymetrySpec::eval(double x, double y) const {
    double v = 0.0;
    for (const auto& [l, c] : coeffs_)
        if (l > 0) v += -2.0 * std::imag(c.eval(x)) * std::sin(l * y);
    return v;
}

double BathymetrySpec::eval_dx(double x, double y) const {
    double v = 0.0;
    for (const auto& [l, c] : coeffs_)
        if (l > 0) v += -2.0 * std::imag(c.eval_deriv(x)) * std::sin(l * y);
    return v;
}

double BathymetrySpec::eval_dy(double x, double y) const {
    double v = 0.0;
    for (const auto& [l, c] : coeffs_)
        if (l > 0) v += -2.0 * double(l) * std::imag(c.eval(x)) * std::cos(l * y);
    return v;
}

double BathymetrySpec::symmetry_violation() const {
    double s = 0.0;
    for (const auto& [l, c] : coeffs_) {
        const auto* mirror = coefficient(-l);
        if (!mirror) return std::numeric_limits<double>::infinity();
        const auto& a = c.values();
        const auto& b = mirror->values();
        for (std::size_t k = 0; k < a.size(); ++k) {
            s = std::max(s, std::abs(a[k] + b[k]));                // g_{-l} = -g_l
            s = std::max(s, std::abs(b[k] - std::conj(a[k])));     // g_{-l} = conj(g_l)
        }
    }
    return s;
}

namespace {

void insert_with_mirror(std::map<int, SampledCoefficient>& out, int l, SampledCoefficient c) {
    out.emplace(-l, c.negated());
    out.emplace(l, std::move(c));
}

// not-a-knot cubic spline through (t_i, y_i), evaluated with first derivative
struct Spline {
    std::vector<double> t;
    std::vector<Complex> y, m;  // m: second derivatives at the knots

    Complex eval(double x, bool deriv) const {
        auto it = std::upper_bound(t.begin(), t.end(), x);
        std::size_t i = (it == t.begin()) ? 0 : std::size_t(it - t.begin()) - 1;
        i = std::min(i, t.size() - 2);
        const double h = t[i + 1] - t[i];
        const double a = t[i + 1] - x, b = x - t[i];
        if (deriv)
            return -m[i] * a * a / (2.0 * h) + m[i + 1] * b * b / (2.0 * h) +
                   (y[i + 1] - y[i]) / h - (m[i + 1] - m[i]) * h / 6.0;
        return m[i] * a * a * a / (6.0 * h) + m[i + 1] * b * b * b / (6.0 * h) +
               (y[i] / h - m[i] * h / 6.0) * a + (y[i + 1] / h - m[i + 1] * h / 6.0) * b;
    }
};

Spline build_spline(std::vector<double> t, std::vector<Complex> y) {
    const std::size_t n = t.size();
    if (n < 4) throw std::invalid_argument("bathymetry table: need at least 4 rows per mode");
    std::vector<double> h(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = t[i + 1] - t[i];
        if (!(h[i] > 0)) throw std::invalid_argument("bathymetry table: abscissae must increase");
    }
    // unknowns M_1..M_{n-2}; not-a-knot eliminates M_0 and M_{n-1}
    const std::size_t m = n - 2;
    std::vector<double> lo(m, 0.0), di(m, 0.0), up(m, 0.0);
    std::vector<Complex> rhs(m);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const std::size_t r = i - 1;
        lo[r] = h[i - 1] / 6.0;
        di[r] = (h[i - 1] + h[i]) / 3.0;
        up[r] = h[i] / 6.0;
        rhs[r] = (y[i + 1] - y[i]) / h[i] - (y[i] - y[i - 1]) / h[i - 1];
    }
    // M_0 = (1 + h0/h1) M_1 - (h0/h1) M_2
    {
        const double q = h[0] / h[1];
        di[0] += lo[0] * (1.0 + q);
        up[0] -= lo[0] * q;
        lo[0] = 0.0;
    }
    // M_{n-1} = (1 + h_{n-2}/h_{n-3}) M_{n-2} - (h_{n-2}/h_{n-3}) M_{n-3}
    {
        const double q = h[n - 2] / h[n - 3];
        di[m - 1] += up[m - 1] * (1.0 + q);
        lo[m - 1] -= up[m - 1] * q;
        up[m - 1] = 0.0;
    }
    // Thomas sweep
    for (std::size_t r = 1; r < m; ++r) {
        const double w = lo[r] / di[r - 1];
        di[r] -= w * up[r - 1];
        rhs[r] -= w * rhs[r - 1];
    }
    std::vector<Complex> M(n);
    M[n - 2] = rhs[m - 1] / di[m - 1];
    for (std::size_t r = m - 1; r-- > 0;) M[r + 1] = (rhs[r] - up[r] * M[r + 2]) / di[r];
    M[0] = (1.0 + h[0] / h[1]) * M[1] - (h[0] / h[1]) * M[2];
    M[n - 1] = (1.0 + h[n - 2] / h[n - 3]) * M[n - 2] - (h[n - 2] / h[n - 3]) * M[n - 3];
    return Spline{std::move(t), std::move(y), std::move(M)};
}

SampledCoefficient finalize_mode(std::shared_ptr<const Grid> grid, int l,
                                 std::vector<Complex> vals, std::vector<Complex> derivs) {
    // both symmetry relations together force conj(g_l) = -g_l, i.e. a purely
    // imaginary coefficient; anything else cannot be mirrored consistently
    double peak = 0.0, re_peak = 0.0;
    for (const auto& v : vals) {
        peak = std::max(peak, std::abs(v));
        re_peak = std::max(re_peak, std::abs(v.real()));
    }
    if (re_peak > 1e-12 * std::max(peak, 1e-300))
        throw std::invalid_argument("bathymetry: mode " + std::to_string(l) +
                                    " has a real part; symmetry admits only i * (real)");
    for (auto& v : vals) v = Complex(0.0, v.imag());
    for (auto& v : derivs) v = Complex(0.0, v.imag());

    auto env = fit_decay(*grid, vals);
    if (peak > 0.0) {
        if (!env || env->rate <= 0.0)
            throw std::invalid_argument("bathymetry: mode " + std::to_string(l) +
                                        " has a non-decaying tail");
    } else {
        env = DecayEnvelope{0.0, 1.0};
    }
    return SampledCoefficient(grid, std::move(vals), std::move(derivs), env);
}

}  // namespace

BathymetrySpec build_bathymetry(std::shared_ptr<const Grid> grid,
                                const std::vector<BathymetryMode>& modes) {
    std::map<int, SampledCoefficient> out;
    for (const auto& mode : modes) {
        if (mode.l <= 0) throw std::invalid_argument("bathymetry: builtin modes use l > 0");
        if (out.count(mode.l)) throw std::invalid_argument("bathymetry: duplicate mode index");
        if (std::abs(mode.amplitude.imag()) > 0.0)
            throw std::invalid_argument("bathymetry: complex amplitude rejected, "
                                        "symmetry admits only real a in g_l = i*a*exp(-nu x)");
        if (!(mode.nu > 0)) throw std::invalid_argument("bathymetry: mode decay must be positive");
        const double a = mode.amplitude.real();
        std::vector<Complex> v(grid->size()), d(grid->size());
        for (std::size_t k = 0; k < grid->size(); ++k) {
            const double e = std::exp(-mode.nu * (*grid)[k]);
            v[k] = Complex(0.0, a * e);
            d[k] = Complex(0.0, -mode.nu * a * e);
        }
        SampledCoefficient c(grid, std::move(v), std::move(d),
                             DecayEnvelope{std::abs(a), mode.nu});
        insert_with_mirror(out, mode.l, std::move(c));
    }
    return BathymetrySpec(std::move(out));
}

BathymetrySpec build_bathymetry_from_table(std::shared_ptr<const Grid> grid,
                                           const std::vector<BathymetryTableRow>& rows) {
    std::map<int, std::vector<std::pair<double, Complex>>> by_mode;
    for (const auto& r : rows) {
        if (r.l <= 0)
            throw std::invalid_argument("bathymetry table: provide l > 0 rows only; "
                                        "the l < 0 half is mirrored");
        by_mode[r.l].push_back({r.x, Complex(r.re, r.im)});
    }
    std::map<int, SampledCoefficient> out;
    for (auto& [l, pts] : by_mode) {
        std::sort(pts.begin(), pts.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        std::vector<double> t(pts.size());
        std::vector<Complex> y(pts.size());
        for (std::size_t i = 0; i < pts.size(); ++i) {
            t[i] = pts[i].first;
            y[i] = pts[i].second;
        }
        if (t.front() > 0.0 || t.back() < grid->x_max())
            throw std::invalid_argument("bathymetry table: mode " + std::to_string(l) +
                                        " does not cover [0, x_max]");
        Spline s = build_spline(std::move(t), std::move(y));
        std::vector<Complex> v(grid->size()), d(grid->size());
        for (std::size_t k = 0; k < grid->size(); ++k) {
            v[k] = s.eval((*grid)[k], false);
            d[k] = s.eval((*grid)[k], true);
        }
        insert_with_mirror(out, l, finalize_mode(grid, l, std::move(v), std::move(d)));
    }
    return BathymetrySpec(std::move(out));
}

}  // namespace bathyflow
