#include "heun/expansions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "heun/numeric.hpp"

namespace heun {

namespace {

constexpr double kParamZero = 1e-13;  // gamma/delta treated as exactly 0 for the reductions
constexpr int kBetaRefresh = 25;      // recompute the contiguous Beta chain from scratch

[[noreturn]] void degenerate(const char* what) {
    throw Error(ErrorCode::DegenerateGammaDelta, what);
}

// Beta chain stepping the first parameter: B(a+1,b;z) = (a B(a,b;z) - z^a(1-z)^b)/(a+b)
class BetaChainA {
  public:
    BetaChainA(Complex a0, Complex b, Complex z, const SumOptions& opt)
        : a_(a0), b_(b), z_(z), opt_(opt) {
        refresh();
    }
    Complex current() const { return bval_; }
    void step() {
        ++count_;
        if (count_ % kBetaRefresh == 0) {
            a_ += 1.0;
            refresh();
            return;
        }
        bval_ = (a_ * bval_ - e_) / (a_ + b_);
        e_ *= z_;
        a_ += 1.0;
    }

  private:
    void refresh() {
        try {
            bval_ = incomplete_beta(a_, b_, z_, opt_).value;
        } catch (const Error& err) {
            if (err.code() == ErrorCode::NonPositiveIntegerA) degenerate("Beta parameter hit a nonpositive integer");
            throw;
        }
        e_ = cpow(z_, a_) * cpow(1.0 - z_, b_);
    }
    Complex a_, b_, z_, bval_, e_;
    SumOptions opt_;
    int count_ = 0;
};

// Beta chain stepping the second parameter: B(a,b+1;z) = (b B(a,b;z) + z^a(1-z)^b)/(a+b).
// No periodic recomputation here: the hypergeometric series for large b loses
// ~e^(b z) digits to cancellation, while the recurrence itself is a contraction
// (the error propagator b/(a+b) has modulus < 1 throughout).
class BetaChainB {
  public:
    BetaChainB(Complex a, Complex b0, Complex z, const SumOptions& opt) : a_(a), b_(b0), z_(z) {
        try {
            bval_ = incomplete_beta(a_, b_, z_, opt).value;
        } catch (const Error& err) {
            if (err.code() == ErrorCode::NonPositiveIntegerA) degenerate("Beta parameter hit a nonpositive integer");
            throw;
        }
        e_ = cpow(z_, a_) * cpow(1.0 - z_, b_);
    }
    Complex current() const { return bval_; }
    void step() {
        bval_ = (b_ * bval_ + e_) / (a_ + b_);
        e_ *= (1.0 - z_);
        b_ += 1.0;
    }

  private:
    Complex a_, b_, z_, bval_, e_;
};

AppellRoute appell_route(const HeunParams& p, AppellRoute requested) {
    if (requested != AppellRoute::Auto) return requested;
    if (std::abs(p.delta) <= kParamZero) return AppellRoute::DeltaZero;
    if (std::abs(p.gamma) <= kParamZero) return AppellRoute::GammaZero;
    return AppellRoute::Full;
}

// derivative-identity prefactor W(z) with d(term_n)/dz = W(z) (z - center)^n,
// and its logarithmic derivative
struct Prefactor {
    Complex W;
    Complex Wlog;
};

Prefactor basis_prefactor(const ExpansionSpec& spec, Complex z) {
    const auto& p = spec.params;
    Prefactor out;
    switch (spec.kind) {
        case ExpansionKind::Type1Beta0:
        case ExpansionKind::Type2Beta0:
            out.W = cpow(z, spec.mu - p.gamma) * cpow(1.0 - z, -p.delta);
            out.Wlog = (spec.mu - p.gamma) / z + p.delta / (1.0 - z);
            break;
        case ExpansionKind::Type1Beta1:
        case ExpansionKind::Type2Beta1:
            out.W = cpow(z, -p.gamma) * cpow(1.0 - z, spec.mu - p.delta);
            out.Wlog = -p.gamma / z - (spec.mu - p.delta) / (1.0 - z);
            break;
        case ExpansionKind::Type1Appell:
        case ExpansionKind::Type2Appell: {
            Complex z1 = spec.center;
            out.W = cpow(z, -p.gamma) * cpow(1.0 - z, -p.delta) * cpow(-z1, spec.mu) *
                    cpow(1.0 - z / z1, spec.mu);
            out.Wlog = -p.gamma / z + p.delta / (1.0 - z) + spec.mu / (z - z1);
            break;
        }
    }
    return out;
}

// basis terms term_0..term_N at z
std::vector<Complex> basis_terms(const ExpansionSpec& spec, Complex z, int n_terms,
                                 const SumOptions& opt, AppellRoute route = AppellRoute::Auto) {
    const auto& p = spec.params;
    std::vector<Complex> t(static_cast<size_t>(n_terms) + 1);
    switch (spec.kind) {
        case ExpansionKind::Type1Beta0:
        case ExpansionKind::Type2Beta0: {
            BetaChainA chain(1.0 - p.gamma + spec.mu, 1.0 - p.delta, z, opt);
            for (int n = 0; n <= n_terms; ++n) {
                t[size_t(n)] = chain.current();
                if (n < n_terms) chain.step();
            }
            break;
        }
        case ExpansionKind::Type1Beta1:
        case ExpansionKind::Type2Beta1: {
            // reflected form of (-1)^n B(1-gamma, 1+n-delta+mu; z): the complete-
            // Beta halves are n-independent constants absorbed into the reported
            // c0, and what remains converges geometrically in powers of 1-z
            BetaChainA chain(1.0 - p.delta + spec.mu, 1.0 - p.gamma, 1.0 - z, opt);
            Complex sign(-1.0, 0.0);
            for (int n = 0; n <= n_terms; ++n) {
                t[size_t(n)] = sign * chain.current();
                sign = -sign;
                if (n < n_terms) chain.step();
            }
            break;
        }
        case ExpansionKind::Type1Appell:
        case ExpansionKind::Type2Appell: {
            Complex z1 = spec.center;
            switch (appell_route(p, route)) {
                case AppellRoute::DeltaZero: {
                    // B(1-gamma, 1+mu+n; z/z1) with the same normalization as the
                    // full route (the w^{1-gamma} factors cancel exactly)
                    Complex w = z / z1;
                    Complex head = cpow(-z1, spec.mu) * cpow(z, 1.0 - p.gamma) * cpow(w, p.gamma - 1.0);
                    BetaChainB chain(1.0 - p.gamma, 1.0 + spec.mu, w, opt);
                    Complex fac(1.0, 0.0);
                    for (int n = 0; n <= n_terms; ++n) {
                        t[size_t(n)] = head * fac * chain.current();
                        fac *= -z1;
                        if (n < n_terms) chain.step();
                    }
                    break;
                }
                case AppellRoute::GammaZero: {
                    // antiderivative based at z1; the constant kappa matches the
                    // full route's derivative normalization on the current branch
                    Complex w = (z - z1) / (1.0 - z1);
                    Prefactor full = basis_prefactor(spec, z);
                    Complex w16 = cpow(w, spec.mu) * cpow(1.0 - w, -p.delta) / (1.0 - z1);
                    if (std::abs(w16) < 1e-300) degenerate("gamma=0 route prefactor underflow");
                    Complex kappa = full.W / w16;
                    BetaChainA chain(1.0 + spec.mu, 1.0 - p.delta, w, opt);
                    Complex fac(1.0, 0.0);
                    for (int n = 0; n <= n_terms; ++n) {
                        t[size_t(n)] = kappa * fac * chain.current();
                        fac *= (1.0 - z1);
                        if (n < n_terms) chain.step();
                    }
                    break;
                }
                case AppellRoute::Auto:
                case AppellRoute::Full: {
                    if (std::abs(1.0 - p.gamma) < 1e-12) degenerate("gamma = 1 pole in the Appell basis");
                    Complex head = cpow(z, 1.0 - p.gamma) / (1.0 - p.gamma);
                    Complex y = z / z1;
                    for (int n = 0; n <= n_terms; ++n) {
                        Complex f1;
                        try {
                            f1 = appell_f1(1.0 - p.gamma, p.delta, -spec.mu - Complex(double(n)),
                                           2.0 - p.gamma, z, y, opt)
                                     .value;
                        } catch (const Error& err) {
                            if (err.code() == ErrorCode::PoleAtC) degenerate("2-gamma pole in the Appell basis");
                            throw;
                        }
                        t[size_t(n)] = cpow(-z1, spec.mu + Complex(double(n))) * head * f1;
                    }
                    break;
                }
            }
            break;
        }
    }
    for (Complex v : t)
        if (!is_finite(v)) degenerate("non-finite basis term");
    return t;
}

struct SumPieces {
    Complex F, dF, d2F;  // partial sum and its analytic derivatives
};

SumPieces sum_pieces(const ExpansionSpec& spec, const std::vector<Complex>& a, Complex z,
                     const SumOptions& opt, AppellRoute route = AppellRoute::Auto) {
    const int N = static_cast<int>(a.size()) - 1;
    std::vector<Complex> terms = basis_terms(spec, z, N, opt, route);
    CompensatedSum facc;
    for (int n = 0; n <= N; ++n) facc.add(a[size_t(n)] * terms[size_t(n)]);

    Complex w = z - spec.center;
    Complex h(0.0), dh(0.0);
    for (size_t i = a.size(); i-- > 0;) {
        dh = dh * w + h;
        h = h * w + a[i];
    }
    Prefactor pf = basis_prefactor(spec, z);
    SumPieces out;
    out.F = facc.value();
    out.dF = pf.W * h;
    out.d2F = pf.W * (pf.Wlog * h + dh);
    return out;
}

// L[u] pieces for u = c0 * g + F~ with the Type2 exponential folded in
struct OdeApply {
    Complex Lg;        // L[g] at z (g = 1 or e^{-eps z/2})
    Complex LF;        // L[F~]
    double scale;
};

OdeApply apply_heun_operator(const ExpansionSpec& spec, const std::vector<Complex>& a, Complex z,
                             const SumOptions& opt, AppellRoute route = AppellRoute::Auto) {
    const auto& p = spec.params;
    SumPieces s = sum_pieces(spec, a, z, opt, route);
    Complex P = p.gamma / z + p.delta / (z - 1.0) + p.epsilon;
    Complex Q = (p.alpha * z - p.q) / (z * (z - 1.0));

    Complex F = s.F, dF = s.dF, d2F = s.d2F;
    Complex Lg;
    if (spec.is_type2()) {
        Complex e = std::exp(-p.epsilon * z / 2.0);
        Complex half = p.epsilon / 2.0;
        Complex Ft = e * F;
        Complex dFt = e * (dF - half * F);
        Complex d2Ft = e * (d2F - p.epsilon * dF + half * half * F);
        F = Ft;
        dF = dFt;
        d2F = d2Ft;
        Lg = e * spec.p0 * (z - spec.w1) * (z - spec.w2) / (z * (z - 1.0));
    } else {
        Lg = Q;
    }
    OdeApply out;
    out.LF = d2F + P * dF + Q * F;
    out.Lg = Lg;
    out.scale = std::abs(d2F) + std::abs(P * dF) + std::abs(Q * F);
    return out;
}

}  // namespace

const char* expansion_kind_name(ExpansionKind k) {
    switch (k) {
        case ExpansionKind::Type1Beta0: return "type1beta0";
        case ExpansionKind::Type1Beta1: return "type1beta1";
        case ExpansionKind::Type1Appell: return "type1appell";
        case ExpansionKind::Type2Beta0: return "type2beta0";
        case ExpansionKind::Type2Beta1: return "type2beta1";
        case ExpansionKind::Type2Appell: return "type2appell";
    }
    return "?";
}

std::optional<ExpansionKind> expansion_kind_from_name(const std::string& name) {
    for (ExpansionKind k : {ExpansionKind::Type1Beta0, ExpansionKind::Type1Beta1,
                            ExpansionKind::Type1Appell, ExpansionKind::Type2Beta0,
                            ExpansionKind::Type2Beta1, ExpansionKind::Type2Appell})
        if (name == expansion_kind_name(k)) return k;
    return std::nullopt;
}

ExpansionSpec make_spec(ExpansionKind kind, const HeunParams& params, Complex center, Complex mu) {
    ExpansionSpec spec;
    spec.kind = kind;
    spec.params = params;
    spec.center = center;
    spec.mu = mu;

    bool type2 = kind == ExpansionKind::Type2Beta0 || kind == ExpansionKind::Type2Beta1 ||
                 kind == ExpansionKind::Type2Appell;
    if (type2) {
        ScaledDerivativeOde s = build_eq25(params);  // throws EpsilonZero
        spec.aux = std::move(s.ode);
        spec.w1 = s.z1;
        spec.w2 = s.z2;
        spec.p0 = s.p0;
    } else {
        DerivativeOde d = build_eq3(params);  // throws AlphaZero
        spec.aux = std::move(d.ode);
        spec.z0 = d.z0;
    }

    auto mu_matches = [&](Complex want) { return std::abs(mu - want) <= 1e-9 * (1.0 + std::abs(want)); };

    switch (kind) {
        case ExpansionKind::Type1Beta0:
        case ExpansionKind::Type2Beta0:
            if (center != Complex(0.0)) throw Error(ErrorCode::InvalidMu, "Beta0 kinds are centered at 0");
            if (!mu_matches(Complex(0.0)) && !mu_matches(params.gamma))
                throw Error(ErrorCode::InvalidMu, "mu must be 0 or gamma at center 0");
            break;
        case ExpansionKind::Type1Beta1:
        case ExpansionKind::Type2Beta1:
            if (center != Complex(1.0)) throw Error(ErrorCode::InvalidMu, "Beta1 kinds are centered at 1");
            if (!mu_matches(Complex(0.0)) && !mu_matches(params.delta))
                throw Error(ErrorCode::InvalidMu, "mu must be 0 or delta at center 1");
            break;
        case ExpansionKind::Type1Appell:
        case ExpansionKind::Type2Appell: {
            if (std::abs(center) < 1e-12 || std::abs(center - 1.0) < 1e-12)
                throw Error(ErrorCode::InvalidMu, "Appell kinds need a center off 0 and 1");
            auto [m1, m2] = indicial_exponents(spec.aux, center);
            if (!mu_matches(m1) && !mu_matches(m2))
                throw Error(ErrorCode::InvalidMu, "mu is not an indicial exponent at the center");
            break;
        }
    }
    return spec;
}

LocalSeries expansion_series(const ExpansionSpec& spec, int n_terms) {
    LocalRecurrence rec = local_recurrence(spec.aux, spec.center, spec.mu);
    return run_recurrence(rec, n_terms);
}

std::optional<Complex> c0_closed_form(const ExpansionSpec& spec) {
    const auto& p = spec.params;
    switch (spec.kind) {
        case ExpansionKind::Type1Beta0:
            if ((1.0 - p.gamma + spec.mu).real() <= 0.0) return std::nullopt;
            if (spec.mu == Complex(0.0)) return Complex(0.0);
            if (std::abs(p.q) < 1e-300) return std::nullopt;
            return -spec.mu / p.q;
        case ExpansionKind::Type2Beta0: {
            if ((1.0 - p.gamma + spec.mu).real() <= 0.0) return std::nullopt;
            if (spec.mu == Complex(0.0)) return Complex(0.0);
            Complex den = p.q - p.gamma * p.epsilon / 2.0;
            if (std::abs(den) < 1e-300) return std::nullopt;
            return -spec.mu / den;
        }
        case ExpansionKind::Type1Beta1:
        case ExpansionKind::Type2Beta1:
            if ((1.0 - p.gamma).real() <= 0.0) return std::nullopt;
            return Complex(0.0);
        default:
            return std::nullopt;
    }
}

namespace {

struct ProbedC0 {
    Complex value;
    double floor;  // absolute uncertainty from the operator scale at the probe
};

ProbedC0 c0_at_probe(const ExpansionSpec& spec, const std::vector<Complex>& a, Complex z,
                     const SumOptions& opt, AppellRoute route = AppellRoute::Auto) {
    const auto& p = spec.params;
    OdeApply ap = apply_heun_operator(spec, a, z, opt, route);
    double lg_scale;
    if (spec.is_type2())
        lg_scale = std::abs(spec.p0) * std::abs(z - spec.w1) * std::abs(z - spec.w2) /
                   std::abs(z * (z - 1.0));
    else
        lg_scale = std::abs(p.alpha * z - p.q) / std::abs(z * (z - 1.0));
    double ref = (std::abs(p.alpha) * std::abs(z) + std::abs(p.q) + 1.0) / std::abs(z * (z - 1.0));
    if (lg_scale < 1e-12 * ref) throw Error(ErrorCode::ProbeDegenerate, "C0 coefficient vanishes at the probe");
    ProbedC0 out;
    out.value = -ap.LF / ap.Lg;
    out.floor = 1e-10 * ap.scale / std::abs(ap.Lg);
    // series truncation feeds the residual through Q * tail
    Complex Q = (p.alpha * z - p.q) / (z * (z - 1.0));
    double w_pow = std::pow(std::abs(z - spec.center), double(a.size() - 1));
    double tail = 8.0 * std::abs(a.back()) * w_pow;
    if (spec.is_type2()) tail *= std::abs(std::exp(-p.epsilon * z / 2.0));
    out.floor += tail * std::abs(Q) / std::abs(ap.Lg);
    return out;
}

}  // namespace

namespace {

// dual-probe residual solve for the constant of the working representation
Complex c0_effective(const ExpansionSpec& spec, Complex probe_z, int n_terms,
                     AppellRoute route = AppellRoute::Auto) {
    SumOptions opt;
    Complex probe2 = spec.center + (probe_z - spec.center) * 0.9;
    if (std::abs(probe2) < 1e-6 || std::abs(probe2 - 1.0) < 1e-6)
        probe2 = spec.center + (probe_z - spec.center) * 1.08;
    // truncation shows up as probe disagreement and shrinks under doubling;
    // a genuine inconsistency would not
    for (int attempt = 0;; ++attempt) {
        LocalSeries series = expansion_series(spec, n_terms);
        ProbedC0 c1 = c0_at_probe(spec, series.coeffs, probe_z, opt, route);
        ProbedC0 c2 = c0_at_probe(spec, series.coeffs, probe2, opt, route);
        double scale = std::max(std::abs(c1.value), std::abs(c2.value));
        double tol = 1e-8 * scale + std::max(c1.floor, c2.floor);
        if (std::abs(c1.value - c2.value) <= tol) return c1.value;
        if (attempt >= 2) throw Error(ErrorCode::ProbesDisagree, "C0 probes disagree beyond 1e-8");
        n_terms *= 2;
    }
}

bool is_beta1_kind(ExpansionKind k) {
    return k == ExpansionKind::Type1Beta1 || k == ExpansionKind::Type2Beta1;
}

// The center-1 expansion written over B(1-gamma, 1+n-delta+mu; z) differs from
// the reflected working form by the constant sum_n a_n (-1)^n B(1-gamma, 1+n-delta+mu),
// whose terms decay like n^-2; Richardson in 1/N brings the partial sums to
// ~1e-9 accuracy.
Complex beta1_constant_shift(const ExpansionSpec& spec) {
    const auto& p = spec.params;
    int base = 600;
    LocalSeries s = expansion_series(spec, 4 * base);
    // forward rounding noise regrows through apparent-point shadows near the
    // center; cap the accelerated sum before that wall
    {
        double head = 0.0;
        for (int n = 0; n < 20; ++n) head = std::max(head, std::abs(s.coeffs[size_t(n)]));
        int wall = 4 * base;
        for (int n = 20; n <= 4 * base; ++n)
            if (std::abs(s.coeffs[size_t(n)]) > 20.0 * head) {
                wall = n;
                break;
            }
        base = std::max(24, std::min(base, wall / 4));
    }
    Complex lg_head = log_gamma(1.0 - p.gamma);
    auto complete_beta_n = [&](int n) {
        Complex b = 1.0 + Complex(double(n)) - p.delta + spec.mu;
        return std::exp(lg_head + log_gamma(b) - log_gamma(b + 1.0 - p.gamma));
    };
    Complex partial[3];
    CompensatedSum acc;
    Complex sign(1.0, 0.0);
    int mark = 0;
    for (int n = 0; n <= 4 * base; ++n) {
        acc.add(sign * s.coeffs[size_t(n)] * complete_beta_n(n));
        sign = -sign;
        if (n == base || n == 2 * base || n == 4 * base) partial[mark++] = acc.value();
    }
    // two elimination stages for the c1/N + c2/N^2 tail
    Complex a1 = 2.0 * partial[1] - partial[0];
    Complex a2 = 2.0 * partial[2] - partial[1];
    return (4.0 * a2 - a1) / 3.0;
}

}  // namespace

Complex c0_numeric(const ExpansionSpec& spec, Complex probe_z, int n_terms) {
    Complex eff = c0_effective(spec, probe_z, n_terms);
    if (is_beta1_kind(spec.kind)) return eff - beta1_constant_shift(spec);
    return eff;
}

EvaluatedExpansion eval_expansion(const ExpansionSpec& spec, Complex z, int n_terms,
                                  const EvalOptions& opt) {
    if (z == Complex(0.0)) throw Error(ErrorCode::OutsideDomain, "evaluate at z != 0");
    LocalSeries series = expansion_series(spec, n_terms);

    // Beta1 kinds always need the solved constant: their closed form refers to
    // the unreflected basis, whose constant parts are folded into c0 here.
    Complex c0;
    std::optional<Complex> cf = is_beta1_kind(spec.kind) ? std::nullopt : c0_closed_form(spec);
    if (cf) {
        c0 = *cf;
    } else {
        Complex probe = z;
        try {
            c0 = c0_effective(spec, probe, n_terms, opt.appell_route);
        } catch (const Error& err) {
            if (err.code() != ErrorCode::ProbeDegenerate) throw;
            c0 = c0_effective(spec, spec.center + (z - spec.center) * 0.83, n_terms, opt.appell_route);
        }
    }

    std::vector<Complex> terms = basis_terms(spec, z, n_terms, opt.sum, opt.appell_route);
    Complex prefactor(1.0, 0.0);
    if (spec.is_type2()) prefactor = std::exp(-spec.params.epsilon * z / 2.0);

    EvaluatedExpansion out;
    out.c0 = c0;
    out.partial_sums.reserve(terms.size());
    CompensatedSum acc;
    acc.add(c0);
    double prev_inc = std::numeric_limits<double>::infinity();
    int converged_at = -1;
    double last_inc = 0.0;
    for (size_t n = 0; n < terms.size(); ++n) {
        Complex inc = series.coeffs[n] * terms[n];
        acc.add(inc);
        out.partial_sums.push_back(prefactor * acc.value());
        last_inc = std::abs(inc) * std::abs(prefactor);
        double floor = opt.sum.sum_tol * (1.0 + std::abs(out.partial_sums.back()));
        if (converged_at < 0 && last_inc <= floor && prev_inc <= floor) converged_at = static_cast<int>(n) + 1;
        prev_inc = last_inc;
    }
    out.value = out.partial_sums.back();
    out.diagnostics.terms_used = converged_at >= 0 ? converged_at : static_cast<int>(terms.size());
    out.diagnostics.last_term_magnitude = last_inc;
    out.diagnostics.converged = converged_at >= 0;
    if (!is_finite(out.value)) {
        if (!opt.allow_divergence) throw Error(ErrorCode::NoConvergence, "expansion sum is non-finite");
        out.diagnostics.converged = false;
    }
    return out;
}

Complex eval_partial(const ExpansionSpec& spec, const std::vector<Complex>& coeffs, Complex c0,
                     Complex z) {
    SumOptions opt;
    std::vector<Complex> terms = basis_terms(spec, z, static_cast<int>(coeffs.size()) - 1, opt);
    CompensatedSum acc;
    acc.add(c0);
    for (size_t n = 0; n < coeffs.size(); ++n) acc.add(coeffs[n] * terms[n]);
    Complex prefactor(1.0, 0.0);
    if (spec.is_type2()) prefactor = std::exp(-spec.params.epsilon * z / 2.0);
    return prefactor * acc.value();
}

ResidualValue assembled_residual(const ExpansionSpec& spec, const std::vector<Complex>& coeffs,
                                 Complex c0, Complex z) {
    SumOptions opt;
    OdeApply ap = apply_heun_operator(spec, coeffs, z, opt);
    ResidualValue rv;
    rv.residual = c0 * ap.Lg + ap.LF;
    rv.scale = ap.scale + std::abs(c0 * ap.Lg) + 1e-300;
    return rv;
}

double empirical_domain(const ExpansionSpec& spec, double ray_angle, int n_terms) {
    LocalSeries series = expansion_series(spec, n_terms);
    // terminating series converge wherever the basis terms do; a genuine
    // termination leaves a long flat rounding-level tail right after a small
    // head, unlike the geometric decay of a convergent series
    // detection window right after the head, before forward rounding noise
    // can regrow through the apparent-point shadow; the scale is the head
    // itself, never the (possibly noise-blown) far tail
    for (size_t tail_start = 1; tail_start <= 12 && tail_start + 12 <= series.coeffs.size();
         ++tail_start) {
        double head = 0.0;
        for (size_t i = 0; i < tail_start; ++i) head = std::max(head, std::abs(series.coeffs[i]));
        bool all_tiny = true;
        for (size_t i = tail_start; i < tail_start + 12; ++i)
            if (std::abs(series.coeffs[i]) > 1e-13 * head) {
                all_tiny = false;
                break;
            }
        if (all_tiny) return std::numeric_limits<double>::infinity();
    }

    Complex dir = std::polar(1.0, ray_angle);
    auto decays = [&](double r) {
        Complex z = spec.center + r * dir;
        EvalOptions opt;
        opt.allow_divergence = true;
        EvaluatedExpansion ev;
        try {
            ev = eval_expansion(spec, z, n_terms, opt);
        } catch (const Error&) {
            return false;
        }
        const auto& ps = ev.partial_sums;
        if (ps.size() < 24) return false;
        std::vector<double> inc(ps.size() - 1);
        for (size_t i = 1; i < ps.size(); ++i) inc[i - 1] = std::abs(ps[i] - ps[i - 1]);
        for (int w = 0; w < 3; ++w) {
            size_t end = inc.size() - 1 - static_cast<size_t>(w);
            size_t start = end - 19;
            double d0 = 0.0, d1 = 0.0;
            size_t i0 = start, i1 = end;
            while (i0 <= end && inc[i0] == 0.0) ++i0;
            while (i1 > start && inc[i1] == 0.0) --i1;
            if (i0 >= i1) continue;  // all-zero tail decays trivially
            d0 = inc[i0];
            d1 = inc[i1];
            double ratio = std::pow(d1 / d0, 1.0 / double(i1 - i0));
            if (!(ratio < 0.98)) return false;
        }
        return true;
    };

    double r = 0.5;
    if (decays(r)) {
        while (r < 4.0 && decays(2.0 * r)) r *= 2.0;
    } else {
        while (r > 1e-3 && !decays(r)) r /= 2.0;
        if (r <= 1e-3) return 0.0;
    }
    double lo = r, hi = 2.0 * r;
    for (int it = 0; it < 40; ++it) {
        double mid = 0.5 * (lo + hi);
        if (decays(mid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

}  // namespace heun
