#ifndef HEUN_POLYNOMIAL_HPP
#define HEUN_POLYNOMIAL_HPP

#include <vector>

#include "heun/types.hpp"

namespace heun {

// Dense univariate polynomial over Complex, coefficients ascending by degree.
// The zero polynomial is represented by {0}.
class Polynomial {
  public:
    Polynomial() : coeffs_{Complex(0.0)} {}
    explicit Polynomial(std::vector<Complex> coeffs);
    static Polynomial constant(Complex c) { return Polynomial({c}); }
    static Polynomial linear_root(Complex r) { return Polynomial({-r, Complex(1.0)}); }

    const std::vector<Complex>& coeffs() const { return coeffs_; }
    Complex coeff(int k) const;  // 0 outside the stored range
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    bool is_zero() const;
    double max_abs_coeff() const;

    Complex eval(Complex z) const;        // Horner
    Polynomial derivative() const;

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial operator*(Complex s) const;

    // Drop leading coefficients below rel_tol * max|coeff|.
    Polynomial trimmed(double rel_tol = 0.0) const;

    // Deflate by (x - root); returns quotient, |remainder| reported via *remainder.
    Polynomial deflate(Complex root, double* remainder = nullptr) const;

  private:
    std::vector<Complex> coeffs_;
};

// p expressed in powers of w = z - z1 (synthetic division shift); exact in
// exact arithmetic.
Polynomial taylor_shift(const Polynomial& p, Complex z1);

// All complex roots by Durand–Kerner with Newton polishing.
// Postcondition: |p(root)| < 1e-10 * max|coeff| for every root.
std::vector<Complex> solve_roots(const Polynomial& p);

}  // namespace heun

#endif
