#include "heun/polynomial.hpp"

#include <algorithm>
#include <cmath>

#include "heun/numeric.hpp"

namespace heun {

Polynomial::Polynomial(std::vector<Complex> coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.empty()) coeffs_.push_back(Complex(0.0));
}

Complex Polynomial::coeff(int k) const {
    if (k < 0 || k >= static_cast<int>(coeffs_.size())) return {0.0, 0.0};
    return coeffs_[static_cast<size_t>(k)];
}

bool Polynomial::is_zero() const {
    for (Complex c : coeffs_)
        if (c != Complex(0.0)) return false;
    return true;
}

double Polynomial::max_abs_coeff() const {
    double m = 0.0;
    for (Complex c : coeffs_) m = std::max(m, std::abs(c));
    return m;
}

Complex Polynomial::eval(Complex z) const {
    Complex acc(0.0);
    for (size_t i = coeffs_.size(); i-- > 0;) acc = acc * z + coeffs_[i];
    return acc;
}

Polynomial Polynomial::derivative() const {
    if (coeffs_.size() <= 1) return Polynomial();
    std::vector<Complex> d(coeffs_.size() - 1);
    for (size_t i = 1; i < coeffs_.size(); ++i) d[i - 1] = coeffs_[i] * Complex(double(i));
    return Polynomial(std::move(d));
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
    std::vector<Complex> out(std::max(coeffs_.size(), o.coeffs_.size()), Complex(0.0));
    for (size_t i = 0; i < coeffs_.size(); ++i) out[i] += coeffs_[i];
    for (size_t i = 0; i < o.coeffs_.size(); ++i) out[i] += o.coeffs_[i];
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
    return *this + o * Complex(-1.0);
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
    std::vector<Complex> out(coeffs_.size() + o.coeffs_.size() - 1, Complex(0.0));
    for (size_t i = 0; i < coeffs_.size(); ++i)
        for (size_t j = 0; j < o.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * o.coeffs_[j];
    return Polynomial(std::move(out));
}

Polynomial Polynomial::operator*(Complex s) const {
    std::vector<Complex> out(coeffs_);
    for (Complex& c : out) c *= s;
    return Polynomial(std::move(out));
}

Polynomial Polynomial::trimmed(double rel_tol) const {
    double floor = rel_tol * max_abs_coeff();
    size_t n = coeffs_.size();
    while (n > 1 && std::abs(coeffs_[n - 1]) <= floor) --n;
    return Polynomial(std::vector<Complex>(coeffs_.begin(), coeffs_.begin() + n));
}

Polynomial Polynomial::deflate(Complex root, double* remainder) const {
    const int d = degree();
    if (d < 1) {
        if (remainder) *remainder = std::abs(coeffs_[0]);
        return Polynomial();
    }
    std::vector<Complex> q(static_cast<size_t>(d), Complex(0.0));
    Complex carry = coeffs_[static_cast<size_t>(d)];
    for (int i = d - 1; i >= 0; --i) {
        q[static_cast<size_t>(i)] = carry;
        carry = coeffs_[static_cast<size_t>(i)] + carry * root;
    }
    if (remainder) *remainder = std::abs(carry);
    return Polynomial(std::move(q));
}

Polynomial taylor_shift(const Polynomial& p, Complex z1) {
    // repeated synthetic division by (z - z1)
    std::vector<Complex> work(p.coeffs());
    const size_t n = work.size();
    std::vector<Complex> out(n, Complex(0.0));
    for (size_t k = 0; k < n; ++k) {
        Complex rem = work[n - 1];
        for (size_t i = n - 1; i-- > k;) {
            Complex next = work[i] + rem * z1;
            work[i] = rem;
            rem = next;
        }
        out[k] = rem;
        // remaining quotient sits in work[k..n-1]
        for (size_t i = n - 1; i > k; --i) work[i] = work[i - 1];
        work[k] = Complex(0.0);
    }
    return Polynomial(std::move(out));
}

std::vector<Complex> solve_roots(const Polynomial& p_in) {
    Polynomial p = p_in.trimmed(0.0);
    const int deg = p.degree();
    if (deg < 1) throw Error(ErrorCode::DegreeMismatch, "root solve needs degree >= 1");
    const auto& c = p.coeffs();
    const Complex lead = c[static_cast<size_t>(deg)];

    // starting circle radius from the Cauchy bound
    double bound = 0.0;
    for (int i = 0; i < deg; ++i) bound = std::max(bound, std::abs(c[static_cast<size_t>(i)] / lead));
    double radius = 1.0 + bound;

    std::vector<Complex> r(static_cast<size_t>(deg));
    const Complex seed(0.4, 0.9);
    Complex w(1.0, 0.0);
    for (int i = 0; i < deg; ++i) {
        r[static_cast<size_t>(i)] = w * radius * 0.7;
        w *= seed;
    }

    const int max_iter = 600;
    for (int it = 0; it < max_iter; ++it) {
        double step = 0.0;
        for (int i = 0; i < deg; ++i) {
            Complex denom = lead;
            for (int j = 0; j < deg; ++j)
                if (j != i) denom *= r[static_cast<size_t>(i)] - r[static_cast<size_t>(j)];
            if (denom == Complex(0.0)) {
                r[static_cast<size_t>(i)] += Complex(1e-8, 1e-8);
                continue;
            }
            Complex d = p.eval(r[static_cast<size_t>(i)]) / denom;
            r[static_cast<size_t>(i)] -= d;
            step = std::max(step, std::abs(d));
        }
        if (step < 1e-14 * (1.0 + radius)) break;
    }

    // Newton polish
    Polynomial dp = p.derivative();
    for (auto& root : r) {
        for (int k = 0; k < 8; ++k) {
            Complex f = p.eval(root);
            Complex df = dp.eval(root);
            if (std::abs(df) < 1e-300) break;
            Complex d = f / df;
            if (!is_finite(d)) break;
            // multiple roots: plain Newton stalls, keep the DK value then
            if (std::abs(d) > 0.5 * (1.0 + std::abs(root))) break;
            root -= d;
            if (std::abs(d) < 1e-16 * (1.0 + std::abs(root))) break;
        }
    }

    double coeff_scale = p.max_abs_coeff();
    for (Complex root : r) {
        if (!is_finite(root) || std::abs(p.eval(root)) > 1e-10 * coeff_scale * std::pow(1.0 + std::abs(root), deg))
            throw Error(ErrorCode::NoConvergence, "root iteration failed to converge");
    }
    std::sort(r.begin(), r.end(), [](Complex a, Complex b) {
        if (a.real() != b.real()) return a.real() < b.real();
        return a.imag() < b.imag();
    });
    return r;
}

}  // namespace heun
