#pragma once

#include <map>

#include "bathyflow/sampled.hpp"

namespace bathyflow {

/// Fourier representation of the order-one bathymetry profile g~(x,y):
/// coefficients g_l(x) for l != 0 with g_0 == 0. The two symmetry relations
/// g_{-l} = -g_l and g_{-l} = conj(g_l) force every g_l to be purely
/// imaginary; the builders enforce that by construction.
class BathymetrySpec {
public:
    BathymetrySpec() = default;
    explicit BathymetrySpec(std::map<int, SampledCoefficient> coeffs);

    bool flat() const { return coeffs_.empty(); }
    int support_radius() const;
    const std::map<int, SampledCoefficient>& coefficients() const { return coeffs_; }
    const SampledCoefficient* coefficient(int l) const;

    /// Direct evaluation of g~ and its partial derivatives at a channel point.
    double eval(double x, double y) const;
    double eval_dx(double x, double y) const;
    double eval_dy(double x, double y) const;

    /// sup over grid and l of |g_l + g_{-l}| and |g_{-l} - conj(g_l)|.
    double symmetry_violation() const;

private:
    std::map<int, SampledCoefficient> coeffs_;
};

/// One builtin mode: g_l(x) = i * amplitude * exp(-nu * x) for l > 0.
/// The symmetry relations admit only real amplitudes; a complex one is
/// rejected at build time.
struct BathymetryMode {
    int l = 1;
    Complex amplitude{0.25, 0.0};
    double nu = 0.5;
};

BathymetrySpec build_bathymetry(std::shared_ptr<const Grid> grid,
                                const std::vector<BathymetryMode>& modes);

/// One row of the tabulated form (l, x, re, im); only l > 0 rows are
/// accepted, the l < 0 half is mirrored exactly.
struct BathymetryTableRow {
    int l = 0;
    double x = 0.0;
    double re = 0.0;
    double im = 0.0;
};

BathymetrySpec build_bathymetry_from_table(std::shared_ptr<const Grid> grid,
                                           const std::vector<BathymetryTableRow>& rows);

}  // namespace bathyflow
