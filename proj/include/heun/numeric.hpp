#ifndef HEUN_NUMERIC_HPP
#define HEUN_NUMERIC_HPP

#include <cmath>
#include <cstdlib>
#include <vector>

#include "heun/types.hpp"

namespace heun {

inline bool is_finite(Complex z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// x within `tol` of an integer <= 0 (real axis), the usual pole test
inline bool is_nonpositive_integer(Complex z, double tol = 1e-12) {
    if (std::abs(z.imag()) > tol) return false;
    double r = std::round(z.real());
    return r <= 0.5 && std::abs(z.real() - r) <= tol;
}

// value of the nonpositive integer (call only after the test above)
inline long nonpositive_integer_value(Complex z) {
    return static_cast<long>(std::round(z.real()));
}

// principal-branch power exp(p*log(b)); 0^p handled for Re p > 0
inline Complex cpow(Complex base, Complex p) {
    if (base == Complex(0.0)) {
        if (p == Complex(0.0)) return {1.0, 0.0};
        return {0.0, 0.0};
    }
    return std::exp(p * std::log(base));
}

inline double rel_err(Complex got, Complex want) {
    double scale = std::abs(want);
    if (scale < 1e-300) return std::abs(got - want);
    return std::abs(got - want) / scale;
}

// Neumaier-compensated accumulation, componentwise on re/im.
class CompensatedSum {
  public:
    void add(Complex term) {
        add_part(re_, re_c_, term.real());
        add_part(im_, im_c_, term.imag());
    }
    Complex value() const { return {re_ + re_c_, im_ + im_c_}; }

  private:
    static void add_part(double& s, double& c, double x) {
        double t = s + x;
        if (std::abs(s) >= std::abs(x))
            c += (s - t) + x;
        else
            c += (x - t) + s;
        s = t;
    }
    double re_ = 0, re_c_ = 0, im_ = 0, im_c_ = 0;
};

// Least-squares fit of y ~ k1*b1 + k2*b2 over complex samples; returns (k1, k2)
// and the relative residual ||y - fit|| / ||y||.
struct SpanFit {
    Complex k1, k2;
    double rel_residual;
};
SpanFit fit_two_column_span(const std::vector<Complex>& b1, const std::vector<Complex>& b2,
                            const std::vector<Complex>& y);

// Roots of a*x^2 + b*x + c (a != 0), cancellation-safe.
std::pair<Complex, Complex> quadratic_roots(Complex a, Complex b, Complex c);

}  // namespace heun

#endif
