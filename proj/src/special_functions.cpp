#include "heun/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "heun/numeric.hpp"

namespace heun {

namespace {

constexpr double kNearlyOne = 1e-14;

// terminating-series order: smallest m >= 0 with (p)_{m+1} = 0, or -1
long termination_order(Complex p) {
    if (!is_nonpositive_integer(p)) return -1;
    return -nonpositive_integer_value(p);
}

// log(sin z) stable for large |Im z|; branch chosen so the reflection
// formula below reproduces principal values on the real axis.
Complex log_sin(Complex z) {
    const Complex i(0.0, 1.0);
    const double half_pi = std::numbers::pi / 2.0;
    const double ln2 = std::numbers::ln2;
    if (z.imag() > 0.0)
        return -i * half_pi - ln2 - i * z + std::log(std::exp(2.0 * i * z) - 1.0);
    return -i * half_pi - ln2 + i * z + std::log(1.0 - std::exp(-2.0 * i * z));
}

}  // namespace

Complex log_gamma(Complex z) {
    if (!is_finite(z)) throw Error(ErrorCode::GammaPole, "non-finite argument");
    if (is_nonpositive_integer(z)) throw Error(ErrorCode::GammaPole, "gamma pole at nonpositive integer");

    if (z.real() < 0.5) {
        // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
        return std::log(std::numbers::pi) - log_sin(std::numbers::pi * z) - log_gamma(1.0 - z);
    }

    // Lanczos, g = 607/128, 15 coefficients (Godfrey/Boost set)
    static const double g = 607.0 / 128.0;
    static const double coef[] = {
        0.99999999999999709182,     57.156235665862923517,     -59.597960355475491248,
        14.136097974741747174,      -0.49191381609762019978,   0.33994649984811888699e-4,
        0.46523628927048575665e-4,  -0.98374475304879564677e-4, 0.15808870322491248884e-3,
        -0.21026444172410488319e-3, 0.21743961811521264320e-3, -0.16431810653676389022e-3,
        0.84418223983852743293e-4,  -0.26190838401581408670e-4, 0.36899182659531622704e-5,
    };
    Complex ser(coef[0], 0.0);
    for (int k = 1; k < 15; ++k) ser += coef[k] / (z + Complex(double(k - 1)));
    Complex t = z + (g - 0.5);
    return 0.5 * std::log(2.0 * std::numbers::pi) + (z - 0.5) * std::log(t) - t + std::log(ser);
}

FnResult gauss_2f1(Complex a, Complex b, Complex c, Complex z, const SumOptions& opt) {
    for (Complex p : {a, b, c, z})
        if (!is_finite(p)) throw Error(ErrorCode::OutsideDomain, "non-finite argument");

    long na = termination_order(a);
    long nb = termination_order(b);
    long cutoff = -1;  // last term index of a terminating series
    if (na >= 0) cutoff = na;
    if (nb >= 0) cutoff = (cutoff < 0) ? nb : std::min(cutoff, nb);

    if (is_nonpositive_integer(c)) {
        long nc = -nonpositive_integer_value(c);
        if (cutoff < 0 || cutoff > nc)
            throw Error(ErrorCode::PoleAtC, "c is a nonpositive integer and the series does not terminate first");
    }

    const double az = std::abs(z);
    if (cutoff < 0 && az >= 1.0) {
        if (std::abs(z - 1.0) <= kNearlyOne && (c - a - b).real() > 0.0) {
            // Gauss summation at z = 1
            Complex v = std::exp(log_gamma(c) + log_gamma(c - a - b) - log_gamma(c - a) - log_gamma(c - b));
            return {v, SeriesDiagnostics{0, 0.0, true}};
        }
        throw Error(ErrorCode::OutsideDomain, "|z| >= 1 without a terminating or boundary case");
    }

    CompensatedSum sum;
    Complex term(1.0, 0.0);
    sum.add(term);
    double prev_mag = 1.0;
    SeriesDiagnostics diag;
    diag.terms_used = 1;
    for (long k = 0;; ++k) {
        if (cutoff >= 0 && k >= cutoff) {
            diag.converged = true;
            diag.last_term_magnitude = std::abs(term);
            break;
        }
        if (k >= opt.max_terms_2f1) {
            diag.last_term_magnitude = std::abs(term);
            throw Error(ErrorCode::NoConvergence, "2F1 term cap reached");
        }
        term *= (a + Complex(double(k))) * (b + Complex(double(k))) * z /
                ((c + Complex(double(k))) * Complex(double(k + 1)));
        sum.add(term);
        ++diag.terms_used;
        double mag = std::abs(term);
        double floor = opt.sum_tol * (1.0 + std::abs(sum.value()));
        if (mag <= floor && prev_mag <= floor) {
            diag.converged = true;
            diag.last_term_magnitude = mag;
            break;
        }
        prev_mag = mag;
    }
    return {sum.value(), diag};
}

FnResult incomplete_beta(Complex a, Complex b, Complex z, const SumOptions& opt) {
    if (is_nonpositive_integer(a))
        throw Error(ErrorCode::NonPositiveIntegerA, "B(a,b;z) needs a not a nonpositive integer");
    if (std::abs(z - 1.0) <= kNearlyOne) {
        if (b.real() <= 0.0) throw Error(ErrorCode::OutsideDomain, "z = 1 needs Re(b) > 0");
        Complex v = std::exp(log_gamma(a) + log_gamma(b) - log_gamma(a + b));
        return {v, SeriesDiagnostics{0, 0.0, true}};
    }
    if (std::abs(z) >= 1.0) throw Error(ErrorCode::OutsideDomain, "|z| >= 1 in incomplete beta");
    FnResult f = gauss_2f1(a, 1.0 - b, a + 1.0, z, opt);
    f.value *= cpow(z, a) / a;
    return f;
}

FnResult appell_f1(Complex a, Complex b1, Complex b2, Complex c, Complex x, Complex y,
                   const SumOptions& opt) {
    for (Complex p : {a, b1, b2, c, x, y})
        if (!is_finite(p)) throw Error(ErrorCode::OutsideDomain, "non-finite argument");

    long mmax = termination_order(b1);  // (b1)_m kills m > mmax
    long nmax = termination_order(b2);
    long amax = termination_order(a);   // (a)_{m+n} kills whole diagonals
    if (is_nonpositive_integer(c)) {
        long nc = -nonpositive_integer_value(c);
        bool safe = (amax >= 0 && amax <= nc) ||
                    (mmax >= 0 && nmax >= 0 && mmax + nmax <= nc);
        if (!safe) throw Error(ErrorCode::PoleAtC, "c is a nonpositive integer and the double series does not terminate first");
    }
    if (mmax < 0 && amax < 0 && std::abs(x) >= 1.0)
        throw Error(ErrorCode::OutsideDomain, "|x| >= 1 in Appell F1");
    if (nmax < 0 && amax < 0 && std::abs(y) >= 1.0)
        throw Error(ErrorCode::OutsideDomain, "|y| >= 1 in Appell F1");

    // diagonal s holds terms T[m] with m + n = s; extend from diagonal s-1:
    //   T_s[m]   = T_{s-1}[m]   * (a+s-1)(b2+n-1) / ((c+s-1) n) * y   (n = s-m)
    //   T_s[s]   = T_{s-1}[s-1] * (a+s-1)(b1+s-1) / ((c+s-1) s) * x
    std::vector<Complex> row{Complex(1.0, 0.0)};
    CompensatedSum sum;
    sum.add(row[0]);
    SeriesDiagnostics diag;
    diag.terms_used = 1;
    double prev_diag_mag = 1.0;
    for (long s = 1;; ++s) {
        if (amax >= 0 && s > amax) {
            diag.converged = true;
            break;
        }
        if (s > opt.max_diagonals_f1) throw Error(ErrorCode::NoConvergence, "F1 diagonal cap reached");
        std::vector<Complex> next(static_cast<size_t>(s) + 1, Complex(0.0));
        Complex fa = a + Complex(double(s - 1));
        Complex fc = c + Complex(double(s - 1));
        for (long m = 0; m < s; ++m) {
            Complex t = row[static_cast<size_t>(m)];
            if (t == Complex(0.0)) continue;
            long n = s - m;  // >= 1
            next[static_cast<size_t>(m)] = t * fa * (b2 + Complex(double(n - 1))) / (fc * Complex(double(n))) * y;
        }
        next[static_cast<size_t>(s)] =
            row[static_cast<size_t>(s - 1)] * fa * (b1 + Complex(double(s - 1))) / (fc * Complex(double(s))) * x;

        CompensatedSum diag_sum;
        double diag_mag = 0.0;
        for (Complex t : next) {
            diag_sum.add(t);
            diag_mag += std::abs(t);
        }
        sum.add(diag_sum.value());
        diag.terms_used += static_cast<int>(s) + 1;
        double floor = opt.sum_tol * (1.0 + std::abs(sum.value()));
        if (diag_mag <= floor && prev_diag_mag <= floor) {
            diag.converged = true;
            diag.last_term_magnitude = diag_mag;
            break;
        }
        prev_diag_mag = diag_mag;
        diag.last_term_magnitude = diag_mag;
        row = std::move(next);
    }
    return {sum.value(), diag};
}

Complex appell_f1_at_one(Complex a1, Complex b1, Complex b2, Complex y, const SumOptions& opt) {
    if ((1.0 - b1).real() <= 0.0)
        throw Error(ErrorCode::OutsideDomain, "x -> 1 limit needs Re(1 - b1) > 0");
    for (Complex p : {a1 + 1.0, 1.0 - b1, a1 + 1.0 - b1})
        if (is_nonpositive_integer(p)) throw Error(ErrorCode::GammaPole, "gamma pole in the x -> 1 limit prefactor");
    Complex pref = std::exp(log_gamma(a1 + 1.0) + log_gamma(1.0 - b1) - log_gamma(a1 + 1.0 - b1));
    return pref * gauss_2f1(a1, b2, a1 + 1.0 - b1, y, opt).value;
}

}  // namespace heun
