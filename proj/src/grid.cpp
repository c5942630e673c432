#include "bathyflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bathyflow {

Grid::Grid(std::size_t n, double x_max) {
    if (n < 8) throw std::invalid_argument("Grid: need at least 8 nodes");
    if (!(x_max > 0)) throw std::invalid_argument("Grid: x_max must be positive");
    x_.resize(n);
    h_ = x_max / static_cast<double>(n - 1);
    for (std::size_t k = 0; k < n; ++k) x_[k] = h_ * static_cast<double>(k);
    x_.back() = x_max;
}

std::shared_ptr<const Grid> Grid::make(std::size_t n, double x_max) {
    return std::make_shared<const Grid>(n, x_max);
}

std::shared_ptr<const Grid> Grid::default_for_decay(double nu, std::size_t n) {
    if (!(nu > 0)) throw std::invalid_argument("Grid: decay rate must be positive");
    return make(n, std::max(10.0, 35.0 / nu));
}

std::size_t Grid::interval_of(double x) const {
    if (x <= 0) return 0;
    auto k = static_cast<std::size_t>(x / h_);
    return std::min(k, x_.size() - 2);
}

namespace {

// m_j = int_0^h u^j exp(z*u) du for j = 0..3, stable for Re(z) <= 0.
struct Moments {
    Complex m0, m1, m2, m3;
};

Moments exp_moments(Complex z, double h) {
    Moments m;
    if (std::abs(z) * h < 0.25) {
        // series: m_j = h^{j+1} sum_n (zh)^n / (n! (n+j+1))
        Complex zh = z * h;
        Complex term(1.0, 0.0);
        Complex s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
        for (int n = 0; n < 16; ++n) {
            s0 += term / double(n + 1);
            s1 += term / double(n + 2);
            s2 += term / double(n + 3);
            s3 += term / double(n + 4);
            term *= zh / double(n + 1);
        }
        m.m0 = h * s0;
        m.m1 = h * h * s1;
        m.m2 = h * h * h * s2;
        m.m3 = h * h * h * h * s3;
    } else {
        Complex e = std::exp(z * h);
        m.m0 = (e - 1.0) / z;
        m.m1 = (h * e - m.m0) / z;
        m.m2 = (h * h * e - 2.0 * m.m1) / z;
        m.m3 = (h * h * h * e - 3.0 * m.m2) / z;
    }
    return m;
}

// Parabola coefficients p(u) = a0 + a1*u + a2*u^2 fitted to three samples.
// "u" runs away from the reference node; the three samples sit at the given
// u-offsets (multiples of h).
struct Parabola {
    Complex a0, a1, a2;
};

// samples at u = 0, h, -h (reference, next-away, next-toward)
Parabola fit_centered(Complex f0, Complex fp, Complex fm, double h) {
    Parabola p;
    p.a0 = f0;
    p.a1 = (fp - fm) / (2.0 * h);
    p.a2 = (fp - 2.0 * f0 + fm) / (2.0 * h * h);
    return p;
}

// samples at u = 0, h, 2h (one-sided, all in the integration direction)
Parabola fit_onesided(Complex f0, Complex f1, Complex f2, double h) {
    Parabola p;
    p.a0 = f0;
    p.a1 = (4.0 * f1 - 3.0 * f0 - f2) / (2.0 * h);
    p.a2 = (f2 - 2.0 * f1 + f0) / (2.0 * h * h);
    return p;
}

Complex apply(const Parabola& p, const Moments& m) {
    return p.a0 * m.m0 + p.a1 * m.m1 + p.a2 * m.m2;
}
Complex apply_first_moment(const Parabola& p, const Moments& m) {
    return p.a0 * m.m1 + p.a1 * m.m2 + p.a2 * m.m3;
}

void check_sizes(const Grid& g, const std::vector<Complex>& f) {
    if (f.size() != g.size())
        throw std::invalid_argument("weighted integral: sample count does not match grid");
}

}  // namespace

std::vector<Complex> cumulative_weighted_forward(const Grid& g,
                                                 const std::vector<Complex>& f,
                                                 Complex w) {
    check_sizes(g, f);
    if (w.real() > 1e-15)
        throw std::invalid_argument("cumulative_weighted_forward: Re(w) must be <= 0");
    const std::size_t n = g.size();
    const double h = g.spacing();
    const Moments mom = exp_moments(w, h);
    const Complex att = std::exp(w * h);

    std::vector<Complex> out(n);
    out[0] = 0.0;
    // interval [x_{k-1}, x_k]; integrand written as f(x_k - u), u in [0,h].
    // Alternating stencils cancel the leading odd-order interpolation error,
    // recovering composite-Simpson-grade accuracy for the prefix values.
    for (std::size_t k = 1; k < n; ++k) {
        Parabola p;
        const bool centered_ok = (k + 1 < n);
        const bool onesided_ok = (k >= 2);
        if ((k % 2 == 1 && centered_ok) || !onesided_ok) {
            // u = 0 at x_k, u = h at x_{k-1}, u = -h at x_{k+1}
            p = fit_centered(f[k], f[k - 1], f[k + 1], h);
        } else {
            // u = 0, h, 2h at x_k, x_{k-1}, x_{k-2}
            p = fit_onesided(f[k], f[k - 1], f[k - 2], h);
        }
        out[k] = att * out[k - 1] + apply(p, mom);
    }
    return out;
}

std::vector<Complex> cumulative_weighted_backward(const Grid& g,
                                                  const std::vector<Complex>& f,
                                                  Complex w) {
    return cumulative_weighted_backward_moments(g, f, w).zeroth;
}

BackwardMoments cumulative_weighted_backward_moments(const Grid& g,
                                                     const std::vector<Complex>& f,
                                                     Complex w) {
    check_sizes(g, f);
    if (w.real() < -1e-15)
        throw std::invalid_argument("cumulative_weighted_backward: Re(w) must be >= 0");
    const std::size_t n = g.size();
    const double h = g.spacing();
    const Complex z = -w;  // integrand kernel exp(-w*u), u = y - x_k
    const Moments mom = exp_moments(z, h);
    const Complex att = std::exp(-w * h);

    BackwardMoments r;
    r.zeroth.assign(n, Complex(0.0, 0.0));
    r.first.assign(n, Complex(0.0, 0.0));
    for (std::size_t k = n - 1; k-- > 0;) {
        Parabola p;
        const bool centered_ok = (k >= 1);
        const bool onesided_ok = (k + 2 < n);
        if ((k % 2 == 1 && centered_ok) || !onesided_ok) {
            // u = 0 at x_k, u = h at x_{k+1}, u = -h at x_{k-1}
            p = fit_centered(f[k], f[k + 1], f[k - 1], h);
        } else {
            p = fit_onesided(f[k], f[k + 1], f[k + 2], h);
        }
        r.zeroth[k] = att * r.zeroth[k + 1] + apply(p, mom);
        r.first[k] = att * (r.first[k + 1] + h * r.zeroth[k + 1]) + apply_first_moment(p, mom);
    }
    return r;
}

std::vector<Complex> cumulative_integral(const Grid& g, const std::vector<Complex>& f) {
    return cumulative_weighted_forward(g, f, Complex(0.0, 0.0));
}

Complex integrate(const Grid& g, const std::vector<Complex>& f) {
    return cumulative_weighted_forward(g, f, Complex(0.0, 0.0)).back();
}

}  // namespace bathyflow
