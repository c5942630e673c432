#include "bathyflow/sampled.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace bathyflow {

SampledCoefficient::SampledCoefficient(std::shared_ptr<const Grid> grid,
                                       std::vector<Complex> values,
                                       std::vector<Complex> deriv_values,
                                       std::optional<DecayEnvelope> decay)
    : grid_(std::move(grid)),
      values_(std::move(values)),
      deriv_(std::move(deriv_values)),
      decay_(decay) {
    if (!grid_) throw std::invalid_argument("SampledCoefficient: null grid");
    if (values_.size() != grid_->size())
        throw std::invalid_argument("SampledCoefficient: value count does not match grid");
    if (!deriv_.empty() && deriv_.size() != grid_->size())
        throw std::invalid_argument("SampledCoefficient: derivative count does not match grid");
}

const DecayEnvelope& SampledCoefficient::decay() const {
    if (!decay_) throw std::logic_error("SampledCoefficient: no decay metadata");
    return *decay_;
}

namespace {

Complex interp4(const Grid& g, const std::vector<Complex>& v, double x) {
    const std::size_t n = g.size();
    std::size_t i = g.interval_of(x);
    std::size_t j0 = (i == 0) ? 0 : std::min(i - 1, n - 4);
    const double h = g.spacing();
    // Lagrange weights on the 4-point uniform stencil
    double t = (x - g[j0]) / h;  // in [0,3] nominally
    double w0 = -(t - 1.0) * (t - 2.0) * (t - 3.0) / 6.0;
    double w1 = t * (t - 2.0) * (t - 3.0) / 2.0;
    double w2 = -t * (t - 1.0) * (t - 3.0) / 2.0;
    double w3 = t * (t - 1.0) * (t - 2.0) / 6.0;
    return w0 * v[j0] + w1 * v[j0 + 1] + w2 * v[j0 + 2] + w3 * v[j0 + 3];
}

Complex eval_impl(const Grid& g, const std::vector<Complex>& v,
                  const std::optional<DecayEnvelope>& decay, double x) {
    if (x < 0.0) throw std::domain_error("SampledCoefficient: x < 0 (semi-infinite channel)");
    const double xmax = g.x_max();
    if (x > xmax) {
        const double rate = decay ? decay->rate : 0.0;
        return v.back() * std::exp(-rate * (x - xmax));
    }
    // node values are returned exactly
    const double h = g.spacing();
    const double kf = x / h;
    const double kr = std::round(kf);
    if (std::abs(kf - kr) < 1e-12 && kr >= 0 && kr < double(g.size()))
        return v[static_cast<std::size_t>(kr)];
    return interp4(g, v, x);
}

}  // namespace

Complex SampledCoefficient::eval(double x) const { return eval_impl(*grid_, values_, decay_, x); }

Complex SampledCoefficient::eval_deriv(double x) const {
    if (deriv_.empty()) throw std::logic_error("SampledCoefficient: no derivative samples");
    return eval_impl(*grid_, deriv_, decay_, x);
}

double SampledCoefficient::sup_abs() const {
    double s = 0.0;
    for (const auto& v : values_) s = std::max(s, std::abs(v));
    return s;
}

double SampledCoefficient::sup_abs_deriv() const {
    double s = 0.0;
    for (const auto& v : deriv_) s = std::max(s, std::abs(v));
    return s;
}

SampledCoefficient SampledCoefficient::scaled(Complex c) const {
    std::vector<Complex> v(values_), d(deriv_);
    for (auto& z : v) z *= c;
    for (auto& z : d) z *= c;
    std::optional<DecayEnvelope> env = decay_;
    if (env) env->amplitude *= std::abs(c);
    return SampledCoefficient(grid_, std::move(v), std::move(d), env);
}

SampledCoefficient SampledCoefficient::negated() const { return scaled(Complex(-1.0, 0.0)); }

SampledCoefficient SampledCoefficient::negated_conjugate() const {
    std::vector<Complex> v(values_), d(deriv_);
    for (auto& z : v) z = -std::conj(z);
    for (auto& z : d) z = -std::conj(z);
    return SampledCoefficient(grid_, std::move(v), std::move(d), decay_);
}

SampledCoefficient SampledCoefficient::zero(std::shared_ptr<const Grid> grid) {
    std::vector<Complex> v(grid->size(), Complex(0.0, 0.0));
    return SampledCoefficient(grid, v, v, DecayEnvelope{0.0, 1.0});
}

SampledCoefficient add(const SampledCoefficient& a, const SampledCoefficient& b) {
    if (&a.grid() != &b.grid() && a.grid().size() != b.grid().size())
        throw std::invalid_argument("add: mismatched grids");
    std::vector<Complex> v(a.values());
    for (std::size_t k = 0; k < v.size(); ++k) v[k] += b.values()[k];
    std::vector<Complex> d;
    if (a.has_derivative() && b.has_derivative()) {
        d = a.deriv_values();
        for (std::size_t k = 0; k < d.size(); ++k) d[k] += b.deriv_values()[k];
    }
    auto env = fit_decay(a.grid(), v);
    return SampledCoefficient(a.grid_ptr(), std::move(v), std::move(d), env);
}

std::optional<DecayEnvelope> fit_decay(const Grid& grid,
                                       const std::vector<Complex>& values,
                                       double tail_fraction) {
    const std::size_t n = grid.size();
    double peak = 0.0;
    for (const auto& v : values) peak = std::max(peak, std::abs(v));
    if (peak <= 0.0) return std::nullopt;
    const double floor = peak * 1e-12;

    auto regress = [&](std::size_t k0) -> std::optional<DecayEnvelope> {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        std::size_t used = 0;
        for (std::size_t k = k0; k < n; ++k) {
            double a = std::abs(values[k]);
            if (a < floor) continue;
            double x = grid[k], y = std::log(a);
            sx += x; sy += y; sxx += x * x; sxy += x * y;
            ++used;
        }
        if (used < 8) return std::nullopt;
        double denom = double(used) * sxx - sx * sx;
        if (denom == 0.0) return std::nullopt;
        double slope = (double(used) * sxy - sx * sy) / denom;
        double icept = (sy - slope * sx) / double(used);
        return DecayEnvelope{std::exp(icept), -slope};
    };

    auto k0 = static_cast<std::size_t>(double(n) * (1.0 - tail_fraction));
    if (auto env = regress(k0)) return env;
    // tail already at the noise floor: back off to wherever data survives
    for (; k0 >= n / 8; k0 -= n / 8)
        if (auto env = regress(k0 - n / 8)) return env;
    return std::nullopt;
}

}  // namespace bathyflow
