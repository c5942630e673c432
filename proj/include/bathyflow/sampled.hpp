#pragma once

#include <optional>
#include <vector>

#include "bathyflow/grid.hpp"

namespace bathyflow {

/// Fitted exponential envelope |f(x)| <= amplitude * exp(-rate * x).
struct DecayEnvelope {
    double amplitude = 0.0;
    double rate = 0.0;
};

/// One Fourier coefficient as a function of x: samples on the shared grid,
/// the x-derivative co-stored (never produced here by differencing values),
/// and the decay envelope as metadata.
class SampledCoefficient {
public:
    SampledCoefficient() = default;
    SampledCoefficient(std::shared_ptr<const Grid> grid,
                       std::vector<Complex> values,
                       std::vector<Complex> deriv_values = {},
                       std::optional<DecayEnvelope> decay = std::nullopt);

    const Grid& grid() const { return *grid_; }
    std::shared_ptr<const Grid> grid_ptr() const { return grid_; }
    const std::vector<Complex>& values() const { return values_; }
    const std::vector<Complex>& deriv_values() const { return deriv_; }
    bool has_derivative() const { return !deriv_.empty(); }
    bool has_decay() const { return decay_.has_value(); }
    const DecayEnvelope& decay() const;

    /// Local cubic (4-point Lagrange) interpolation; reproduces cubics exactly.
    /// x < 0 is outside the semi-infinite channel; x > x_max extends by the
    /// fitted envelope so decay-rate diagnostics survive past the grid.
    Complex eval(double x) const;
    Complex eval_deriv(double x) const;

    double sup_abs() const;
    double sup_abs_deriv() const;

    SampledCoefficient scaled(Complex c) const;
    /// Entry for the opposite-m mode: b_{-m} = -b_m, exact.
    SampledCoefficient negated() const;
    /// Entry for the opposite-n mode: -conj(b), exact.
    SampledCoefficient negated_conjugate() const;

    static SampledCoefficient zero(std::shared_ptr<const Grid> grid);

private:
    std::shared_ptr<const Grid> grid_;
    std::vector<Complex> values_;
    std::vector<Complex> deriv_;
    std::optional<DecayEnvelope> decay_;
};

SampledCoefficient add(const SampledCoefficient& a, const SampledCoefficient& b);

/// Least-squares fit of log|f| over the tail of the grid. Samples below
/// max|f| * 1e-12 are excluded (they carry only roundoff). Returns nullopt
/// for an (almost) identically zero function.
std::optional<DecayEnvelope> fit_decay(const Grid& grid,
                                       const std::vector<Complex>& values,
                                       double tail_fraction = 0.25);

}  // namespace bathyflow
