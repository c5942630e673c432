#pragma once

#include <vector>

#include "bathyflow/grid.hpp"

namespace bathyflow {

/// Graded real polynomial in two canonical variables (P, Q). The grade cap is
/// a hard truncation order: products drop everything above it.
class Poly2 {
public:
    explicit Poly2(int max_degree = 0);

    static Poly2 constant(double c, int max_degree);
    static Poly2 variable_p(int max_degree);
    static Poly2 variable_q(int max_degree);

    int max_degree() const { return max_degree_; }
    double at(int a, int b) const;       // coefficient of P^a Q^b
    void set(int a, int b, double v);
    void add(int a, int b, double v);

    Poly2& operator+=(const Poly2& o);
    Poly2& operator-=(const Poly2& o);
    Poly2& operator*=(double s);
    friend Poly2 operator+(Poly2 a, const Poly2& b) { return a += b; }
    friend Poly2 operator-(Poly2 a, const Poly2& b) { return a -= b; }
    friend Poly2 operator*(Poly2 a, double s) { return a *= s; }
    friend Poly2 operator*(double s, Poly2 a) { return a *= s; }

    Poly2 multiplied(const Poly2& o, int cutoff) const;
    Poly2 partial_p() const;
    Poly2 partial_q() const;

    /// {f, g} = f_P g_Q - f_Q g_P, truncated at cutoff.
    static Poly2 poisson(const Poly2& f, const Poly2& g, int cutoff);

    double eval(double p, double q) const;
    Complex eval(Complex p, Complex q) const;

    Poly2 homogeneous_part(int d) const;
    Poly2 truncated(int degree) const;
    double max_abs_coeff() const;
    /// sum of |coeff| * r^degree over degrees in [d_lo, d_hi]
    double majorant_at(double r, int d_lo, int d_hi) const;

    /// F(X(.), Y(.)) truncated at cutoff; the constant term of F carries over.
    static Poly2 compose(const Poly2& f, const Poly2& x, const Poly2& y, int cutoff);

private:
    int max_degree_;
    std::vector<double> c_;  // triangle layout; index (a, b) -> off(a+b) + a
    static std::size_t tri(int d) { return std::size_t(d) * (d + 1) / 2; }
    std::size_t idx(int a, int b) const { return tri(a + b) + std::size_t(a); }
};

/// exp(L_chi) f = sum_s (1/s!) {..{f, chi}..}, truncated; converges as a
/// polynomial because chi has grade >= 3.
Poly2 lie_transform(const Poly2& f, const Poly2& chi, int cutoff);

/// Homogeneous-degree solve of {H2, chi} = -(nonresonant part of Hd) for
/// H2 = (omega/2)(P^2+Q^2); returns chi and the resonant remainder.
struct HomologicalSplit {
    Poly2 generator;  // chi_d
    Poly2 resonant;   // Z_d, a multiple of (P^2+Q^2)^{d/2} (zero for odd d)
};
HomologicalSplit solve_homological(const Poly2& Hd, int d, double omega);

}  // namespace bathyflow
