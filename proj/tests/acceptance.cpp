// Acceptance suite: one criterion per entry, each printing a single
// pass/fail line with its measured numbers. Run all or a single one with
// --criterion k.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "heun/expansions.hpp"
#include "heun/frobenius.hpp"
#include "heun/heun_core.hpp"
#include "heun/numeric.hpp"
#include "heun/special_functions.hpp"
#include "heun/termination.hpp"
#include "test_util.hpp"

using namespace heun;
using heun::test::crel;
using heun::test::DrawOptions;
using heun::test::Rng;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

// ---------- shared helpers ----------

template <typename Ref>
double ratio_spread(const LocalRecurrence& rec, int offset, Ref&& ref) {
    std::vector<Complex> ratios;
    for (int n = 1; n <= 30; ++n) {
        Complex r = ref(n);
        if (std::abs(r) < 1e-12) continue;
        ratios.push_back(rec.coeff(n, offset) / r);
    }
    Complex mean(0.0);
    for (Complex r : ratios) mean += r;
    mean /= double(ratios.size());
    double spread = 0.0;
    for (Complex r : ratios) spread = std::max(spread, std::abs(r - mean));
    return spread / std::abs(mean);
}

struct FdResidual {
    double rel;
    double slope;
};

template <typename F>
FdResidual fd_heun_residual(const HeunParams& p, F&& u, Complex z, double h) {
    auto residual_at = [&](double hh) {
        Complex uz = u(z);
        Complex d2 = (u(z + hh) - 2.0 * uz + u(z - hh)) / (hh * hh);
        Complex d1 = (u(z + hh) - u(z - hh)) / (2.0 * hh);
        Complex P = p.gamma / z + p.delta / (z - 1.0) + p.epsilon;
        Complex Q = (p.alpha * z - p.q) / (z * (z - 1.0));
        Complex r = d2 + P * d1 + Q * uz;
        double scale = std::abs(d2) + std::abs(P * d1) + std::abs(Q * uz) + 1e-300;
        return std::abs(r) / scale;
    };
    FdResidual out;
    double r1 = residual_at(h);
    double r2 = residual_at(h / 2.0);
    out.rel = r2;
    out.slope = std::log2(r1 / r2);
    return out;
}

double span_residual(const HeunParams& p, const std::vector<Complex>& zs,
                     const std::vector<Complex>& uvals) {
    auto b0 = frobenius_heun(p, ExponentChoice::zero, 320);
    auto b1 = frobenius_heun(p, ExponentChoice::one_minus_gamma, 320);
    std::vector<Complex> c0, c1;
    for (Complex z : zs) {
        c0.push_back(eval_oracle(b0, z).u);
        c1.push_back(eval_oracle(b1, z).u);
    }
    return fit_two_column_span(c0, c1, uvals).rel_residual;
}

// ---------- criteria ----------

Outcome criterion1() {
    Rng rng(9001);
    DrawOptions dopt;
    dopt.min_z0 = 0.0;
    dopt.min_w12 = 0.0;
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
        HeunParams p = heun::test::draw_params(rng, dopt);
        DerivativeOde d = build_eq3(p);
        ScaledDerivativeOde s = build_eq25(p);
        Complex zc = rng.box(1.3, 2.2, 0.4, 1.0);
        if (local_recurrence(d.ode, {0, 0}, {0, 0}).bandwidth() != 4) return {false, "bandwidth at 0"};
        if (local_recurrence(d.ode, {1, 0}, p.delta).bandwidth() != 4) return {false, "bandwidth at 1"};
        if (local_recurrence(d.ode, d.z0, {2, 0}).bandwidth() != 4) return {false, "bandwidth at z0"};
        if (local_recurrence(d.ode, zc, {0, 0}).bandwidth() != 5) return {false, "generic bandwidth"};
        if (local_recurrence(s.ode, {0, 0}, p.gamma).bandwidth() != 6) return {false, "rescaled bandwidth"};

        for (Complex mu : {Complex(0.0), p.gamma}) {
            LocalRecurrence rec = local_recurrence(d.ode, {0, 0}, mu);
            worst = std::max(worst, ratio_spread(rec, 0, [&](int n) {
                                 Complex nn{double(n), 0};
                                 return p.q * (nn + mu) * (nn - p.gamma + mu);
                             }));
            worst = std::max(worst, ratio_spread(rec, 3, [&](int n) {
                                 Complex m{double(n - 3), 0};
                                 return p.alpha * (p.alpha + p.epsilon * (1.0 + m - p.gamma - p.delta + mu));
                             }));
        }
        LocalRecurrence rg = local_recurrence(d.ode, zc, {0, 0});
        worst = std::max(worst, ratio_spread(rg, 0, [&](int n) {
                             Complex nn{double(n), 0};
                             return zc * (zc - 1.0) * (zc - d.z0) * nn * (nn - 1.0);
                         }));
        worst = std::max(worst, ratio_spread(rg, 4, [&](int n) {
                             Complex m{double(n - 4), 0};
                             return p.alpha + p.epsilon * (1.0 + m - p.gamma - p.delta);
                         }));
        LocalRecurrence rs = local_recurrence(s.ode, {0, 0}, p.gamma);
        worst = std::max(worst, ratio_spread(rs, 0, [&](int n) {
                             Complex nn{double(n), 0};
                             return -s.z1 * s.z2 * (p.gamma + nn) * (nn + 0.0);
                         }));
        Complex want = -p.epsilon * p.epsilon / 4.0;
        for (int n = 6; n <= 30; ++n)
            if (rs.coeff(n, 5) != want) return {false, "rescaled trailing coefficient not exact"};
    }
    std::ostringstream ss;
    ss << "bandwidths 4/4/4/5/6 over 10 draws; worst closed-form coefficient ratio spread " << worst;
    return {worst < 1e-10, ss.str()};
}

Outcome criterion2() {
    auto t0 = std::chrono::steady_clock::now();
    Rng rng(9002);
    DrawOptions dopt;
    dopt.need_c0_denominator = true;
    dopt.min_sing_from1 = 1.1;  // center-1 kinds need the apparent points clear of 1
    double worst_res = 0.0, worst_span = 0.0, worst_slope_lo = 2.0, worst_slope_hi = 2.0;
    int draws_per_kind = 25;
    for (int kidx = 0; kidx < 6; ++kidx) {
        ExpansionKind kind = static_cast<ExpansionKind>(kidx);
        for (int t = 0; t < draws_per_kind; ++t) {
            HeunParams p = heun::test::draw_params(rng, dopt);
            Complex mu, center;
            bool appell = false;
            switch (kind) {
                case ExpansionKind::Type1Beta0:
                case ExpansionKind::Type2Beta0:
                    center = {0, 0};
                    mu = (t % 2 == 0) ? Complex(0.0) : p.gamma;
                    break;
                case ExpansionKind::Type1Beta1:
                case ExpansionKind::Type2Beta1:
                    center = {1, 0};
                    mu = (t % 2 == 0) ? Complex(0.0) : p.delta;
                    break;
                default: {
                    appell = true;
                    center = {-0.42, 0.46};
                    DerivativeOde d3 = build_eq3(p);
                    ScaledDerivativeOde s25 = build_eq25(p);
                    auto clash = [&](Complex w) { return std::abs(center - w) < 0.18; };
                    for (int k = 0; k < 6; ++k) {
                        bool bad = (kind == ExpansionKind::Type2Appell) ? (clash(s25.z1) || clash(s25.z2))
                                                                        : clash(d3.z0);
                        if (!bad) break;
                        center += Complex(0.09, -0.07);
                    }
                    mu = (t % 2 == 0) ? Complex(0.0) : Complex(1.0);
                    break;
                }
            }
            ExpansionSpec spec = make_spec(kind, p, center, mu);
            int n_terms = appell ? 18 : 130;
            std::vector<Complex> zs;
            Rng zr(7000 + t);
            while (zs.size() < 12) {
                Complex z;
                if (appell) {
                    z = center * Complex(zr.uniform(0.78, 0.86), zr.uniform(-0.03, 0.03));
                } else {
                    z = zr.box(0.25, 0.6, -0.25, 0.25);
                    if (std::abs(z - 1.0) < 0.3) continue;
                }
                zs.push_back(z);
            }
            auto ueval = [&](Complex z) { return eval_expansion(spec, z, n_terms).value; };
            std::vector<Complex> uvals;
            for (Complex z : zs) uvals.push_back(ueval(z));
            for (int k = 0; k < 5; ++k) {
                FdResidual fr = fd_heun_residual(p, ueval, zs[size_t(k)], 3e-3);
                worst_res = std::max(worst_res, fr.rel);
                worst_slope_lo = std::min(worst_slope_lo, fr.slope);
                worst_slope_hi = std::max(worst_slope_hi, fr.slope);
            }
            worst_span = std::max(worst_span, span_residual(p, zs, uvals));
        }
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream ss;
    ss << "6 kinds x 25 draws: max fd residual " << worst_res << " (limit 1e-5), slope range ["
       << worst_slope_lo << ", " << worst_slope_hi << "], max span residual " << worst_span
       << " (limit 1e-6), " << secs << " s";
    bool pass = worst_res < 1e-5 && worst_slope_lo > 1.8 && worst_slope_hi < 2.2 && worst_span < 1e-6;
    return {pass, ss.str()};
}

Outcome criterion3() {
    Rng rng(9003);
    DrawOptions dopt;
    dopt.need_c0_denominator = true;
    dopt.min_sing_from1 = 1.1;  // keep the center-1 series clear of shadow noise
    double worst_b0 = 0.0, worst_t2 = 0.0, worst_b1 = 0.0, worst_t2b1 = 0.0;
    for (int t = 0; t < 10; ++t) {
        HeunParams p = heun::test::draw_params(rng, dopt);
        {
            auto spec = make_spec(ExpansionKind::Type1Beta0, p, {0, 0}, p.gamma);
            worst_b0 = std::max(worst_b0, crel(c0_numeric(spec, {0.3, 0.05}, 140), -p.gamma / p.q));
        }
        {
            auto spec = make_spec(ExpansionKind::Type2Beta0, p, {0, 0}, p.gamma);
            Complex want = -p.gamma / (p.q - p.gamma * p.epsilon / 2.0);
            worst_t2 = std::max(worst_t2, crel(c0_numeric(spec, {0.3, 0.05}, 140), want));
        }
        {
            auto spec = make_spec(ExpansionKind::Type1Beta1, p, {1, 0}, {0, 0});
            worst_b1 = std::max(worst_b1, std::abs(c0_numeric(spec, {0.55, 0.05}, 300)));
        }
        {
            auto spec = make_spec(ExpansionKind::Type2Beta1, p, {1, 0}, {0, 0});
            worst_t2b1 = std::max(worst_t2b1, std::abs(c0_numeric(spec, {0.55, 0.05}, 300)));
        }
    }
    std::ostringstream ss;
    ss << "-mu/q dev " << worst_b0 << ", -mu/(q-ge/2) dev " << worst_t2
       << " (both limit 1e-10); center-1 claimed C0=0, measured |C0| up to " << worst_b1 << " and "
       << worst_t2b1 << " — the limit balance keeps gamma*(regular part of u') + q*u(0) = 0, so "
       << "u(0) is generically nonzero there";
    bool pass = worst_b0 < 1e-10 && worst_t2 < 1e-10 && worst_b1 < 1e-10 && worst_t2b1 < 1e-10;
    return {pass, ss.str()};
}

Outcome criterion4() {
    Rng rng(9004);
    DrawOptions dopt;
    dopt.min_z0 = 0.0;
    dopt.min_w12 = 0.0;
    for (int t = 0; t < 10; ++t) {
        HeunParams base = heun::test::draw_params(rng, dopt);
        HeunParams pq = base;
        pq.q = {0, 0};
        LocalRecurrence rq = local_recurrence(build_eq3_cleared(pq), {0, 0}, {0, 0});
        for (int n = 1; n <= 30; ++n)
            if (rq.coeff(n, 0) != Complex(0.0)) return {false, "q=0 leading array not exactly zero"};
        HeunParams pa = base;
        pa.alpha = {0, 0};
        LocalRecurrence ra = local_recurrence(build_eq3_cleared(pa), {0, 0}, {0, 0});
        for (int n = 1; n <= 30; ++n)
            if (ra.coeff(n, ra.bandwidth() - 1) != Complex(0.0))
                return {false, "alpha=0 trailing array not exactly zero"};
    }
    return {true, "q=0 leading and alpha=0 trailing coefficient arrays are exact zeros, 10 draws"};
}

Outcome criterion5() {
    auto t0 = std::chrono::steady_clock::now();
    Rng rng(9005);
    DrawOptions dopt;
    dopt.min_z0 = 0.0;
    dopt.min_w12 = 0.0;
    bool all_certify = true, dependence = true;
    int degree_hits = 0, degree_total = 0;
    std::ostringstream deg;
    for (int t = 0; t < 5; ++t) {
        HeunParams p = heun::test::draw_params(rng, dopt);
        for (int N : {1, 2, 3}) {
            for (MuChoice mc : {MuChoice::zero, MuChoice::exponent}) {
                QPolynomial qp = q_polynomial(N, mc, 0, p.gamma, p.delta, p.epsilon);
                ++degree_total;
                if (qp.reduced.degree() == N + 1) ++degree_hits;
                auto roots = solve_roots(qp.reduced);
                for (Complex r : roots) {
                    try {
                        Certificate cert = certify(N, mc, 0, p.gamma, p.delta, p.epsilon, r);
                        if (cert.a_tail_norms[1] > 1e-9 || cert.a_tail_norms[2] > 1e-9)
                            dependence = false;
                    } catch (const Error&) {
                        all_certify = false;
                    }
                }
            }
        }
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::ostringstream ss;
    ss << "certified-root polynomial has degree N+1 in " << degree_hits << "/" << degree_total
       << " cases (mu=gamma yes; mu=0 gives N certified roots plus the structural non-terminating "
          "candidate alpha-eps*delta excluded); all reduced roots certify="
       << (all_certify ? "yes" : "NO") << ", unforced tail dependence=" << (dependence ? "yes" : "NO")
       << ", " << secs << " s";
    bool pass = degree_hits == degree_total && all_certify && dependence;
    return {pass, ss.str()};
}

Outcome criterion6() {
    Complex gamma{0.31, 0.07}, delta{-0.22, 0.11};
    FiveTermResult r2 = five_term_termination(1, 2, gamma, delta);
    bool certs2 = true;
    for (const auto& pr : r2.pairs)
        certs2 = certs2 && pr.cert.max_residual < 1e-8 && pr.cert.a_tail_norms[0] < 1e-8 &&
                 pr.cert.a_tail_norms[1] < 1e-8 && pr.cert.a_tail_norms[2] < 1e-8;
    FiveTermResult r0 = five_term_termination(1, 0, gamma, delta);
    bool certs0 = true;
    for (const auto& pr : r0.pairs) certs0 = certs0 && pr.cert.max_residual < 1e-8;
    bool flagged0 = r0.count_mismatch;  // the mu=0 system is a curve: must be flagged
    std::ostringstream ss;
    ss << "mu=2: found " << r2.pairs.size() << " pairs vs (N+1)(N+2)=6"
       << (r2.count_mismatch ? " (flagged mismatch)" : " (exact)") << ", all certify="
       << (certs2 ? "yes" : "NO") << "; mu=0: found " << r0.pairs.size() << " vs N^2=1, "
       << "flagged=" << (flagged0 ? "yes" : "NO") << " (" << r0.note << "), certify="
       << (certs0 ? "yes" : "NO");
    bool pass = certs2 && certs0 && static_cast<int>(r2.pairs.size()) == 6 && flagged0;
    return {pass, ss.str()};
}

Outcome criterion7() {
    Rng rng(9007);
    DrawOptions dopt;
    dopt.min_z0 = 0.0;
    dopt.min_w12 = 0.0;
    for (int t = 0; t < 10; ++t) {
        HeunParams p = heun::test::draw_params(rng, dopt);
        ScaledDerivativeOde s = build_eq25(p);
        LocalRecurrence rec = local_recurrence(s.ode, {0, 0}, p.gamma);
        Complex want = -p.epsilon * p.epsilon / 4.0;
        for (int n = rec.bandwidth(); n <= 30; ++n)
            if (rec.coeff(n, rec.bandwidth() - 1) != want)
                return {false, "trailing coefficient differs from -eps^2/4"};
        if (want == Complex(0.0)) return {false, "eps vanished in a draw"};
    }
    return {true, "trailing six-term coefficient equals -eps^2/4 exactly (nonzero), 10 draws"};
}

Outcome criterion8() {
    // spot values
    auto g = gauss_2f1({1, 0}, {1, 0}, {2, 0}, {0.5, 0});
    if (crel(g.value, Complex(2.0 * std::numbers::ln2)) > 1e-10) return {false, "2F1 spot value"};
    auto b = incomplete_beta({0.5, 0}, {0.5, 0}, {1, 0});
    if (crel(b.value, Complex(std::numbers::pi)) > 1e-10) return {false, "complete Beta spot value"};
    if (crel(std::exp(log_gamma({0.5, 0})), Complex(std::sqrt(std::numbers::pi))) > 1e-10)
        return {false, "sqrt(pi) spot value"};
    if (crel(std::exp(log_gamma({5, 0})), Complex(24.0)) > 1e-10) return {false, "4! spot value"};

    // derivative identity
    Rng rng(9008);
    for (int i = 0; i < 8; ++i) {
        Complex a = rng.box(0.2, 2.0, -0.5, 0.5);
        Complex bb = rng.box(-1.5, 1.5, -0.5, 0.5);
        if (is_nonpositive_integer(a)) continue;
        double z = rng.uniform(0.1, 0.85);
        Complex got = heun::test::fd1([&](Complex w) { return incomplete_beta(a, bb, w).value; },
                                      Complex(z, 0.0), 1e-5);
        Complex want = cpow(Complex(z), a - 1.0) * cpow(Complex(1.0 - z), bb - 1.0);
        if (crel(got, want) > 1e-6) return {false, "Beta derivative identity"};
    }

    // Appell reductions
    auto ry = appell_f1({0.3, 0}, {0.7, 0}, {1.2, 0}, {1.9, 0}, {0.4, 0}, {0, 0});
    if (crel(ry.value, gauss_2f1({0.3, 0}, {0.7, 0}, {1.9, 0}, {0.4, 0}).value) > 1e-10)
        return {false, "F1 y=0 reduction"};
    auto rc = appell_f1({0.3, 0}, {0.7, 0}, {1.2, 0}, {1.9, 0}, {0.25, 0}, {0.25, 0});
    if (crel(rc.value, gauss_2f1({0.3, 0}, {1.9, 0}, {1.9, 0}, {0.25, 0}).value) > 1e-10)
        return {false, "F1 x=y confluence"};
    auto rb = appell_f1({0.4, 0}, {0.6, 0}, {0, 0}, {1.3, 0}, {0.3, 0}, {0.77, 0});
    auto rb2 = appell_f1({0.4, 0}, {0.6, 0}, {0, 0}, {1.3, 0}, {0.3, 0}, {0.11, 0});
    if (crel(rb.value, rb2.value) > 1e-10) return {false, "F1 b2=0 reduction"};

    // x -> 1 limit identity, Richardson-extrapolated along x = 1 - 2^-k
    auto limit_by_extrapolation = [](Complex a1, Complex b1, Complex b2, Complex y) {
        SumOptions opt;
        opt.max_diagonals_f1 = 200000;
        std::vector<Complex> vals;
        for (int k = 4; k <= 9; ++k)
            vals.push_back(appell_f1(a1, b1, b2, a1 + 1.0, {1.0 - std::pow(2.0, -k), 0}, y, opt).value);
        Complex e = 1.0 - b1;
        return heun::test::richardson_limit(vals, {e, Complex(1.0), e + 1.0, Complex(2.0), e + 2.0});
    };
    int checked = 0;
    double worst = 0.0;
    for (int i = 0; checked < 20 && i < 200; ++i) {
        Complex pa = rng.box(0.15, 0.9, -0.2, 0.2);
        Complex pb1 = rng.box(0.15, 0.65, -0.1, 0.1);
        Complex pb2 = rng.box(-0.7, 0.7, -0.3, 0.3);
        Complex py = rng.box(-0.45, 0.45, -0.2, 0.2);
        Complex want;
        try {
            want = appell_f1_at_one(pa, pb1, pb2, py);
        } catch (const Error&) {
            continue;
        }
        worst = std::max(worst, crel(limit_by_extrapolation(pa, pb1, pb2, py), want));
        ++checked;
    }
    std::ostringstream ss;
    ss << "spot values (2ln2, pi, sqrt(pi), 4!) at 1e-10; derivative identity; F1 reductions; "
       << "x->1 limit worst dev " << worst << " over " << checked << " draws (limit 1e-6)";
    return {checked == 20 && worst < 1e-6, ss.str()};
}

Outcome criterion9() {
    Rng rng(9009);
    DrawOptions dopt;
    dopt.min_z0 = 0.0;
    dopt.min_w12 = 0.0;
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
        HeunParams p = heun::test::draw_params(rng, dopt);
        DerivativeOde d = build_eq3(p);
        auto [m1, m2] = indicial_exponents(d.ode, d.z0);
        if (std::abs(m1) > 1e-10 || crel(m2, Complex(2.0)) > 1e-8) return {false, "exponents at z0"};
        RunReport rep = run_recurrence_reported(local_recurrence(d.ode, d.z0, {0, 0}), 30);
        if (rep.resonance_indices != std::vector<int>{2}) return {false, "resonance index at z0"};
        worst = std::max(worst, rep.max_resonance_obstruction);

        ScaledDerivativeOde s = build_eq25(p);
        for (Complex c : {s.z1, s.z2}) {
            auto [w1, w2] = indicial_exponents(s.ode, c);
            if (std::abs(w1) > 1e-10 || crel(w2, Complex(2.0)) > 1e-7)
                return {false, "exponents at z1/z2"};
            RunReport r2 = run_recurrence_reported(local_recurrence(s.ode, c, {0, 0}), 30);
            if (r2.resonance_indices != std::vector<int>{2}) return {false, "resonance index at z1/z2"};
            worst = std::max(worst, r2.max_resonance_obstruction);
        }
    }
    std::ostringstream ss;
    ss << "exponents {0,2} at all apparent points; worst n=2 obstruction " << worst
       << " (limit 1e-10), 10 draws";
    return {worst < 1e-10, ss.str()};
}

Outcome criterion10() {
    Rng rng(9010);
    DrawOptions dopt;
    dopt.min_z0 = 0.0;
    dopt.min_w12 = 0.0;
    double worst = 0.0;
    for (int t = 0; t < 50; ++t) {
        HeunParams p = heun::test::draw_params(rng, dopt);
        auto fro = frobenius_heun(p, ExponentChoice::zero, 320);
        auto start = eval_oracle(fro, {0.1, 0});
        int done = 0;
        while (done < 20) {
            Complex z = rng.box(-0.6, 0.8, -0.55, 0.55);
            if (std::abs(z) > 0.8 || std::abs(z) < 0.15) continue;
            if (std::abs(z - 1.0) < 0.2) continue;
            // straight path from 0.1 must clear both singularities
            auto seg_dist = [&](Complex pt) {
                Complex a{0.1, 0.0};
                Complex dseg = z - a;
                double L2 = std::norm(dseg);
                double tt = std::clamp(((pt - a) * std::conj(dseg)).real() / L2, 0.0, 1.0);
                return std::abs(pt - (a + tt * dseg));
            };
            if (seg_dist({0, 0}) < 2e-2 || seg_dist({1, 0}) < 2e-2) continue;
            auto path = integrate_heun(p, {{0.1, 0}, z}, {start.u, start.du});
            auto direct = eval_oracle(fro, z);
            worst = std::max(worst, crel(path.back().u, direct.u));
            ++done;
        }
    }
    std::ostringstream ss;
    ss << "series vs path-integration oracles: worst relative deviation " << worst
       << " over 50 draws x 20 points (limit 1e-9)";
    return {worst < 1e-9, ss.str()};
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    for (int i = 1; i < argc; ++i)
        if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) only = std::atoi(argv[i + 1]);

    std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"recurrence shapes and closed-form coefficient patterns", criterion1},
        {"expansions solve the equation and sit in the oracle span", criterion2},
        {"closed-form C0 reproduction", criterion3},
        {"three-term degenerations are exact zeros", criterion4},
        {"four-term termination certification", criterion5},
        {"five-term termination pair counts", criterion6},
        {"second-type series cannot right-terminate", criterion7},
        {"special-function layer identities", criterion8},
        {"apparent-singularity exponents and resonances", criterion9},
        {"oracle independence gate", criterion10},
    };

    bool all_pass = true;
    for (size_t i = 0; i < criteria.size(); ++i) {
        int idx = static_cast<int>(i) + 1;
        if (only != 0 && only != idx) continue;
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("threw: ") + e.what()};
        }
        std::printf("criterion %d: %s — %s — %s\n", idx, o.pass ? "PASS" : "FAIL",
                    criteria[i].first, o.detail.c_str());
        std::fflush(stdout);
        all_pass = all_pass && o.pass;
    }
    return all_pass ? 0 : 1;
}
