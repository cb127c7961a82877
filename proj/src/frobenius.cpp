#include "heun/frobenius.hpp"

#include <algorithm>
#include <cmath>

#include "heun/numeric.hpp"

namespace heun {

namespace {

// relative threshold for "A vanishes at the center"
bool is_root_of(const Polynomial& p, Complex c) {
    double scale = 0.0;
    double zk = 1.0;
    for (int k = 0; k <= p.degree(); ++k) {
        scale += std::abs(p.coeff(k)) * zk;
        zk *= std::abs(c);
    }
    return std::abs(p.eval(c)) <= 1e-10 * (scale + 1e-300);
}

}  // namespace

std::pair<Complex, Complex> indicial_exponents(const PolyOde& ode, Complex center) {
    if (!is_root_of(ode.A, center)) return {Complex(0.0), Complex(1.0)};
    Polynomial as = taylor_shift(ode.A, center);
    Polynomial bs = taylor_shift(ode.B, center);
    double scale = as.max_abs_coeff();
    if (std::abs(as.coeff(1)) <= 1e-10 * (scale + 1e-300))
        throw Error(ErrorCode::IrregularPoint, "A has a multiple root at the center");
    // mu(mu-1) A'(c) + mu B(c) = 0
    Complex second = 1.0 - bs.coeff(0) / as.coeff(1);
    return {Complex(0.0), second};
}

LocalRecurrence::LocalRecurrence(Polynomial a_shifted, Polynomial b_shifted, Polynomial c_shifted,
                                 Complex center, Complex mu, bool singular_center)
    : as_(std::move(a_shifted)),
      bs_(std::move(b_shifted)),
      cs_(std::move(c_shifted)),
      center_(center),
      mu_(mu),
      singular_(singular_center) {
    int da = as_.degree(), db = bs_.degree(), dc = cs_.degree();
    bandwidth_ = singular_ ? 1 + std::max({da - 1, db, dc + 1})
                           : 1 + std::max({da, db + 1, dc + 2});
}

Complex LocalRecurrence::coeff(int n, int j) const {
    Complex s = Complex(double(n - j)) + mu_;
    if (singular_) {
        // equation index n+1 of the raw power collection, unknown a_n
        return as_.coeff(j + 1) * s * (s - 1.0) + bs_.coeff(j) * s + cs_.coeff(j - 1);
    }
    return as_.coeff(j) * s * (s - 1.0) + bs_.coeff(j - 1) * s + cs_.coeff(j - 2);
}

LocalRecurrence local_recurrence(const PolyOde& ode, Complex center, Complex mu) {
    bool singular = is_root_of(ode.A, center);
    Polynomial as = taylor_shift(ode.A, center);
    Polynomial bs = taylor_shift(ode.B, center);
    Polynomial cs = taylor_shift(ode.C, center);
    if (singular) {
        // validate mu against the indicial polynomial; degenerate systems
        // (identically-zero indicial data, e.g. q = 0) accept any mu here and
        // are sorted out by run_recurrence.
        Complex a1 = as.coeff(1), b0 = bs.coeff(0);
        double scale = std::abs(a1) * (std::norm(mu) + std::abs(mu)) + std::abs(b0) * std::abs(mu);
        Complex ind = a1 * mu * (mu - 1.0) + b0 * mu;
        if (std::abs(ind) > 1e-8 * (scale + 1e-300) &&
            (std::abs(a1) + std::abs(b0)) > 1e-12 * (as.max_abs_coeff() + bs.max_abs_coeff()))
            throw Error(ErrorCode::NotAnExponent, "mu is not an indicial exponent at this center");
    } else {
        if (!(mu == Complex(0.0) || mu == Complex(1.0)))
            throw Error(ErrorCode::NotAnExponent, "ordinary point admits mu = 0 or 1 only");
    }
    return LocalRecurrence(std::move(as), std::move(bs), std::move(cs), center, mu, singular);
}

RunReport run_recurrence_reported(const LocalRecurrence& rec, int n_max, const RunOptions& opt) {
    const int k = rec.bandwidth();

    // offsets that vanish identically shift the whole relation (three-term
    // degenerations at q = 0 / alpha = 0)
    int shift = 0;
    for (; shift < k; ++shift) {
        bool all_zero = true;
        for (int n = 1; n <= std::max(6, k + 2) && all_zero; ++n) {
            double scale = 0.0;
            for (int j = 0; j < k; ++j) scale = std::max(scale, std::abs(rec.coeff(n, j)));
            if (std::abs(rec.coeff(n, shift)) > 1e-14 * (scale + 1e-300)) all_zero = false;
        }
        if (!all_zero) break;
    }
    if (shift >= k) throw Error(ErrorCode::InternalError, "recurrence has no nonzero offsets");
    if (shift > 0) {
        // skipped equations reduce to constraints on a_0 alone; coeff(m, m+shift)
        // style terms vanish within the identically-zero offsets, nothing to check
        // beyond the first surviving one which run below enforces at n = 1.
    }

    RunReport rep;
    rep.series.center = rec.center();
    rep.series.mu = rec.mu();
    auto& a = rep.series.coeffs;
    a.assign(static_cast<size_t>(n_max) + 1, Complex(0.0));
    a[0] = Complex(1.0);
    double running = 1.0;

    for (int n = 1; n <= n_max; ++n) {
        Complex lead = rec.coeff(n + shift, shift);
        CompensatedSum acc;
        double cscale = std::abs(lead);
        for (int i = 1; i < k - shift; ++i) {
            if (n - i < 0) break;
            Complex cij = rec.coeff(n + shift, shift + i);
            cscale = std::max(cscale, std::abs(cij));
            acc.add(cij * a[static_cast<size_t>(n - i)]);
        }
        Complex rhs = acc.value();
        if (std::abs(lead) < opt.lead_tol * (cscale + 1e-300)) {
            double obstruction = std::abs(rhs) / (cscale * running + 1e-300);
            rep.max_resonance_obstruction = std::max(rep.max_resonance_obstruction, obstruction);
            rep.resonance_indices.push_back(n);
            if (obstruction > opt.consistency_tol)
                throw Error(ErrorCode::Resonance,
                            "leading coefficient vanishes at n = " + std::to_string(n) +
                                " with inconsistent remainder");
            a[static_cast<size_t>(n)] = Complex(0.0);  // free coefficient: pick the 0 member
        } else {
            a[static_cast<size_t>(n)] = -rhs / lead;
        }
        running = std::max(running, std::abs(a[static_cast<size_t>(n)]));
    }
    return rep;
}

LocalSeries run_recurrence(const LocalRecurrence& rec, int n_max, const RunOptions& opt) {
    return run_recurrence_reported(rec, n_max, opt).series;
}

}  // namespace heun
