#ifndef HEUN_SPECIAL_FUNCTIONS_HPP
#define HEUN_SPECIAL_FUNCTIONS_HPP

#include "heun/types.hpp"

namespace heun {

// Global series controls. Terms are declared converged when two consecutive
// terms fall below sum_tol * (1 + |partial sum|); hard caps guard divergence.
struct SumOptions {
    double sum_tol = 1e-16;
    int max_terms_2f1 = 100000;
    int max_diagonals_f1 = 4000;
};

struct FnResult {
    Complex value;
    SeriesDiagnostics diag;
};

// Gauss hypergeometric sum_k (a)_k (b)_k / ((c)_k k!) z^k.
// |z| < 1, or z = 1 with Re(c-a-b) > 0 (closed form via log-gamma), or a
// terminating series (a or b a nonpositive integer reached before any c pole).
FnResult gauss_2f1(Complex a, Complex b, Complex c, Complex z, const SumOptions& opt = {});

// Incomplete Beta B(a,b;z) = z^a/a * 2F1(a, 1-b; a+1; z), principal branch of
// z^a. z = 1 allowed when Re(b) > 0 (complete Beta).
FnResult incomplete_beta(Complex a, Complex b, Complex z, const SumOptions& opt = {});

// Appell F1 double series sum_{m,n} (a)_{m+n}(b1)_m(b2)_n/((c)_{m+n} m! n!) x^m y^n,
// summed by diagonals. A direction with a nonpositive-integer numerator
// parameter terminates and is exempt from the |.| < 1 domain requirement.
FnResult appell_f1(Complex a, Complex b1, Complex b2, Complex c, Complex x, Complex y,
                   const SumOptions& opt = {});

// x -> 1 limit of F1(a1; b1, b2; a1+1; x, y):
// Gamma(a1+1)Gamma(1-b1)/Gamma(a1+1-b1) * 2F1(a1, b2; a1+1-b1; y).
Complex appell_f1_at_one(Complex a1, Complex b1, Complex b2, Complex y, const SumOptions& opt = {});

// log Gamma, real on the positive real axis; exp(log_gamma(z)) = Gamma(z).
Complex log_gamma(Complex z);

}  // namespace heun

#endif
