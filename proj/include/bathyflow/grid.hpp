#pragma once

#include <complex>
#include <memory>
#include <vector>

namespace bathyflow {

using Complex = std::complex<double>;

/// Uniform abscissae on [0, x_max] shared by every sampled coefficient of a run.
class Grid {
public:
    Grid(std::size_t n, double x_max);

    static std::shared_ptr<const Grid> make(std::size_t n, double x_max);

    /// Default resolution for a bathymetry decaying like exp(-nu*x):
    /// x_max = max(10, 35/nu) pushes the truncated tail below 1e-12
    /// relative to an O(1) envelope amplitude.
    static std::shared_ptr<const Grid> default_for_decay(double nu, std::size_t n = 2048);

    std::size_t size() const { return x_.size(); }
    double x_max() const { return x_.back(); }
    double spacing() const { return h_; }
    double operator[](std::size_t k) const { return x_[k]; }
    const std::vector<double>& nodes() const { return x_; }

    /// Index of the interval [x_k, x_{k+1}] containing x (clamped).
    std::size_t interval_of(double x) const;

private:
    std::vector<double> x_;
    double h_;
};

// Weighted cumulative integrals of a sampled integrand f against an
// exponential kernel. All recurrences keep the kernel factored so that every
// intermediate stays bounded by sup|f| * x_max; raw prefix sums of
// exp(-w*y)*f(y) would overflow and cancel catastrophically once
// |Re w| * x_max exceeds a few hundred.

/// U_k = int_0^{x_k} exp(w*(x_k - y)) f(y) dy, requires Re(w) <= 0.
std::vector<Complex> cumulative_weighted_forward(const Grid& g,
                                                 const std::vector<Complex>& f,
                                                 Complex w);

/// T_k = int_{x_k}^{x_max} exp(w*(x_k - y)) f(y) dy, requires Re(w) >= 0.
std::vector<Complex> cumulative_weighted_backward(const Grid& g,
                                                  const std::vector<Complex>& f,
                                                  Complex w);

/// First-moment tail: M_k = int_{x_k}^{x_max} (y - x_k) exp(w*(x_k - y)) f(y) dy.
/// Requires Re(w) >= 0. Returns {M, T} with T as in cumulative_weighted_backward.
struct BackwardMoments {
    std::vector<Complex> first;   // M_k
    std::vector<Complex> zeroth;  // T_k
};
BackwardMoments cumulative_weighted_backward_moments(const Grid& g,
                                                     const std::vector<Complex>& f,
                                                     Complex w);

/// Plain cumulative integral int_0^{x_k} f dy (w = 0 specialisation).
std::vector<Complex> cumulative_integral(const Grid& g, const std::vector<Complex>& f);

/// Whole-interval integral int_0^{x_max} f dy.
Complex integrate(const Grid& g, const std::vector<Complex>& f);

}  // namespace bathyflow
