#include "bathyflow/poly2.hpp"

#include <cmath>
#include <stdexcept>

namespace bathyflow {

Poly2::Poly2(int max_degree) : max_degree_(max_degree) {
    if (max_degree < 0) throw std::invalid_argument("Poly2: negative degree");
    c_.assign(tri(max_degree + 1), 0.0);
}

Poly2 Poly2::constant(double v, int max_degree) {
    Poly2 p(max_degree);
    p.set(0, 0, v);
    return p;
}
Poly2 Poly2::variable_p(int max_degree) {
    Poly2 p(max_degree);
    p.set(1, 0, 1.0);
    return p;
}
Poly2 Poly2::variable_q(int max_degree) {
    Poly2 p(max_degree);
    p.set(0, 1, 1.0);
    return p;
}

double Poly2::at(int a, int b) const {
    if (a < 0 || b < 0 || a + b > max_degree_) return 0.0;
    return c_[idx(a, b)];
}
void Poly2::set(int a, int b, double v) {
    if (a < 0 || b < 0 || a + b > max_degree_)
        throw std::out_of_range("Poly2::set: monomial beyond grade cap");
    c_[idx(a, b)] = v;
}
void Poly2::add(int a, int b, double v) {
    if (a < 0 || b < 0 || a + b > max_degree_) return;  // truncation
    c_[idx(a, b)] += v;
}

Poly2& Poly2::operator+=(const Poly2& o) {
    for (int d = 0; d <= o.max_degree_; ++d)
        for (int a = 0; a <= d; ++a) add(a, d - a, o.at(a, d - a));
    return *this;
}
Poly2& Poly2::operator-=(const Poly2& o) {
    for (int d = 0; d <= o.max_degree_; ++d)
        for (int a = 0; a <= d; ++a) add(a, d - a, -o.at(a, d - a));
    return *this;
}
Poly2& Poly2::operator*=(double s) {
    for (auto& v : c_) v *= s;
    return *this;
}

Poly2 Poly2::multiplied(const Poly2& o, int cutoff) const {
    Poly2 out(cutoff);
    for (int d1 = 0; d1 <= max_degree_; ++d1)
        for (int a1 = 0; a1 <= d1; ++a1) {
            const double v1 = at(a1, d1 - a1);
            if (v1 == 0.0) continue;
            for (int d2 = 0; d2 + d1 <= cutoff && d2 <= o.max_degree_; ++d2)
                for (int a2 = 0; a2 <= d2; ++a2) {
                    const double v2 = o.at(a2, d2 - a2);
                    if (v2 == 0.0) continue;
                    out.add(a1 + a2, d1 + d2 - a1 - a2, v1 * v2);
                }
        }
    return out;
}

Poly2 Poly2::partial_p() const {
    Poly2 out(std::max(0, max_degree_ - 1));
    for (int d = 1; d <= max_degree_; ++d)
        for (int a = 1; a <= d; ++a) out.add(a - 1, d - a, double(a) * at(a, d - a));
    return out;
}
Poly2 Poly2::partial_q() const {
    Poly2 out(std::max(0, max_degree_ - 1));
    for (int d = 1; d <= max_degree_; ++d)
        for (int a = 0; a < d; ++a) out.add(a, d - a - 1, double(d - a) * at(a, d - a));
    return out;
}

Poly2 Poly2::poisson(const Poly2& f, const Poly2& g, int cutoff) {
    Poly2 out = f.partial_p().multiplied(g.partial_q(), cutoff);
    out -= f.partial_q().multiplied(g.partial_p(), cutoff);
    return out;
}

double Poly2::eval(double p, double q) const {
    // Horner in q within each p-power block would need a rectangle; with the
    // triangle layout a direct power accumulation is simplest and exact enough
    double out = 0.0;
    std::vector<double> pp(max_degree_ + 1, 1.0), qq(max_degree_ + 1, 1.0);
    for (int i = 1; i <= max_degree_; ++i) {
        pp[i] = pp[i - 1] * p;
        qq[i] = qq[i - 1] * q;
    }
    for (int d = 0; d <= max_degree_; ++d)
        for (int a = 0; a <= d; ++a) {
            const double v = at(a, d - a);
            if (v != 0.0) out += v * pp[a] * qq[d - a];
        }
    return out;
}

Complex Poly2::eval(Complex p, Complex q) const {
    Complex out(0.0, 0.0);
    std::vector<Complex> pp(max_degree_ + 1, Complex(1, 0)), qq(max_degree_ + 1, Complex(1, 0));
    for (int i = 1; i <= max_degree_; ++i) {
        pp[i] = pp[i - 1] * p;
        qq[i] = qq[i - 1] * q;
    }
    for (int d = 0; d <= max_degree_; ++d)
        for (int a = 0; a <= d; ++a) {
            const double v = at(a, d - a);
            if (v != 0.0) out += v * pp[a] * qq[d - a];
        }
    return out;
}

Poly2 Poly2::homogeneous_part(int d) const {
    Poly2 out(std::min(d, max_degree_));
    if (d > max_degree_) return out;
    for (int a = 0; a <= d; ++a) out.set(a, d - a, at(a, d - a));
    return out;
}

Poly2 Poly2::truncated(int degree) const {
    Poly2 out(std::min(degree, max_degree_));
    for (int d = 0; d <= out.max_degree_; ++d)
        for (int a = 0; a <= d; ++a) out.set(a, d - a, at(a, d - a));
    return out;
}

double Poly2::max_abs_coeff() const {
    double s = 0.0;
    for (double v : c_) s = std::max(s, std::abs(v));
    return s;
}

double Poly2::majorant_at(double r, int d_lo, int d_hi) const {
    double s = 0.0;
    for (int d = std::max(0, d_lo); d <= std::min(d_hi, max_degree_); ++d) {
        double block = 0.0;
        for (int a = 0; a <= d; ++a) block += std::abs(at(a, d - a));
        s += block * std::pow(r, d);
    }
    return s;
}

Poly2 Poly2::compose(const Poly2& f, const Poly2& x, const Poly2& y, int cutoff) {
    Poly2 out = Poly2::constant(f.at(0, 0), cutoff);
    Poly2 xa = Poly2::constant(1.0, cutoff);
    for (int a = 0; a <= f.max_degree_; ++a) {
        if (a > 0) xa = xa.multiplied(x, cutoff);
        Poly2 term = xa;
        for (int b = 0; a + b <= f.max_degree_; ++b) {
            if (b > 0) term = term.multiplied(y, cutoff);
            const double v = f.at(a, b);
            if (v != 0.0 && !(a == 0 && b == 0)) {
                Poly2 t = term;
                t *= v;
                out += t;
            }
        }
    }
    return out;
}

Poly2 lie_transform(const Poly2& f, const Poly2& chi, int cutoff) {
    Poly2 out = f.truncated(cutoff);
    Poly2 term = f.truncated(cutoff);
    double fact = 1.0;
    for (int s = 1; s <= cutoff; ++s) {
        term = Poly2::poisson(term, chi, cutoff);
        if (term.max_abs_coeff() == 0.0) break;
        fact *= double(s);
        Poly2 t = term;
        t *= 1.0 / fact;
        out += t;
    }
    return out;
}

HomologicalSplit solve_homological(const Poly2& Hd, int d, double omega) {
    if (omega == 0.0) throw std::invalid_argument("solve_homological: zero frequency");
    // complexify: z = P + iQ, zbar = P - iQ; monomial z^j zbar^k picks up the
    // eigenvalue i*omega*(j-k) under {H2, .}
    std::vector<Complex> c(std::size_t(d) + 1, Complex(0, 0));
    for (int a = 0; a <= d; ++a) {
        const int b = d - a;
        const double v = Hd.at(a, b);
        if (v == 0.0) continue;
        // P^a Q^b = 2^{-a} (z+zb)^a * (2i)^{-b} (z-zb)^b
        const Complex scale = v * std::pow(Complex(2, 0), -a) * std::pow(Complex(0, 2), -b);
        std::vector<double> binA(a + 1), binB(b + 1);
        binA[0] = 1.0;
        for (int p = 1; p <= a; ++p) binA[p] = binA[p - 1] * double(a - p + 1) / double(p);
        binB[0] = 1.0;
        for (int r = 1; r <= b; ++r) binB[r] = binB[r - 1] * double(b - r + 1) / double(r);
        for (int p = 0; p <= a; ++p)
            for (int r = 0; r <= b; ++r) {
                const double sgn = ((b - r) % 2 == 0) ? 1.0 : -1.0;
                c[std::size_t(p + r)] += scale * binA[p] * binB[r] * sgn;
            }
    }

    std::vector<Complex> chi_c(std::size_t(d) + 1, Complex(0, 0));
    std::vector<Complex> res_c(std::size_t(d) + 1, Complex(0, 0));
    for (int j = 0; j <= d; ++j) {
        const int k = d - j;
        if (j == k)
            res_c[std::size_t(j)] = c[std::size_t(j)];
        else
            chi_c[std::size_t(j)] = -c[std::size_t(j)] / (Complex(0, 1) * omega * double(j - k));
    }

    auto back_to_real = [&](const std::vector<Complex>& cc) {
        Poly2 out(d);
        for (int j = 0; j <= d; ++j) {
            const int k = d - j;
            const Complex v = cc[std::size_t(j)];
            if (v == Complex(0, 0)) continue;
            // z^j zb^k = (P+iQ)^j (P-iQ)^k
            std::vector<double> binJ(j + 1), binK(k + 1);
            binJ[0] = 1.0;
            for (int p = 1; p <= j; ++p) binJ[p] = binJ[p - 1] * double(j - p + 1) / double(p);
            binK[0] = 1.0;
            for (int r = 1; r <= k; ++r) binK[r] = binK[r - 1] * double(k - r + 1) / double(r);
            for (int p = 0; p <= j; ++p)
                for (int r = 0; r <= k; ++r) {
                    // (iQ)^{j-p} * (-iQ)^{k-r}
                    const Complex iq = std::pow(Complex(0, 1), j - p) *
                                       std::pow(Complex(0, -1), k - r);
                    const Complex term = v * binJ[p] * binK[r] * iq;
                    out.add(p + r, (j - p) + (k - r), term.real());
                }
        }
        return out;
    };

    HomologicalSplit split{back_to_real(chi_c), back_to_real(res_c)};
    return split;
}

}  // namespace bathyflow
