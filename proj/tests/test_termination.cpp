#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "heun/frobenius.hpp"
#include "heun/termination.hpp"
#include "test_util.hpp"

using namespace heun;
using heun::test::crel;

namespace {

// numeric tail coefficients of the center-`center` series at a given q
std::vector<Complex> tails_at(int N, Complex mu, int center, Complex gamma, Complex delta,
                              Complex epsilon, Complex q) {
    Complex alpha = termination_alpha(N, mu, gamma, delta, epsilon);
    HeunParams p{gamma, delta, epsilon, alpha, q};
    DerivativeOde d = build_eq3(p);
    LocalRecurrence rec = local_recurrence(d.ode, Complex(double(center)), mu);
    return run_recurrence(rec, N + 3).coeffs;
}

}  // namespace

TEST_CASE("alpha condition") {
    CHECK(crel(termination_alpha(1, {0, 0}, {0, 0}, {0, 0}, {1, 0}), Complex(-2.0)) < 1e-15);
    CHECK(crel(termination_alpha(2, {0.5, 0}, {0.5, 0}, {0.3, 0}, {2, 0}), Complex(-5.4)) < 1e-14);
    CHECK_THROWS_AS(termination_alpha(1, {0, 0}, {0.3, 0}, {0.2, 0}, {0, 0}), Error);

    // the trailing recurrence coefficient vanishes at relation index N+3
    heun::test::Rng rng(601);
    heun::test::DrawOptions dopt;
    dopt.min_z0 = 0.0;
    dopt.min_w12 = 0.0;
    for (int t = 0; t < 4; ++t) {
        HeunParams base = heun::test::draw_params(rng, dopt);
        for (int N : {1, 2, 3}) {
            for (Complex mu : {Complex(0.0), base.gamma}) {
                Complex alpha = termination_alpha(N, mu, base.gamma, base.delta, base.epsilon);
                HeunParams p = base;
                p.alpha = alpha;
                DerivativeOde d = build_eq3(p);
                LocalRecurrence rec = local_recurrence(d.ode, {0, 0}, mu);
                double scale = 0.0;
                for (int j = 0; j < rec.bandwidth(); ++j)
                    scale = std::max(scale, std::abs(rec.coeff(N + 3, j)));
                CHECK(std::abs(rec.coeff(N + 3, rec.bandwidth() - 1)) < 1e-13 * scale);
            }
        }
    }
}

TEST_CASE("q polynomial structure and certified roots") {
    heun::test::Rng rng(602);
    heun::test::DrawOptions dopt;
    dopt.min_z0 = 0.0;
    dopt.min_w12 = 0.0;
    for (int t = 0; t < 2; ++t) {
        HeunParams base = heun::test::draw_params(rng, dopt);
        for (int N : {1, 2, 3}) {
            for (MuChoice mc : {MuChoice::zero, MuChoice::exponent}) {
                QPolynomial qp;
                try {
                    qp = q_polynomial(N, mc, 0, base.gamma, base.delta, base.epsilon);
                } catch (const Error& e) {
                    FAIL("q_polynomial threw: ", e.what());
                    continue;
                }
                // candidate equation: N+1 candidates for mu = 0, N+2 for mu = gamma
                int expected_raw = (mc == MuChoice::zero) ? N + 1 : N + 2;
                CHECK(qp.raw.degree() == expected_raw);
                // all reduced roots terminate; exactly one structural
                // non-terminating candidate is excluded
                CHECK(qp.reduced.degree() == expected_raw - 1);
                CHECK(qp.excluded.size() == 1);

                // monic by construction
                CHECK(crel(qp.reduced.coeffs().back(), Complex(1.0)) < 1e-12);

                auto roots = solve_roots(qp.reduced);
                for (Complex r : roots) {
                    auto cert = certify(N, mc, 0, base.gamma, base.delta, base.epsilon, r);
                    CHECK(cert.max_residual < 1e-9);
                    // dependence: the next two tails vanish without being imposed
                    CHECK(cert.a_tail_norms[1] < 1e-9);
                    CHECK(cert.a_tail_norms[2] < 1e-9);
                    CHECK(cert.a_n_norm > 1e-9);
                }

                // internal consistency: the raw polynomial tracks the numeric
                // tail coefficient up to the cleared q-power
                Complex mu = (mc == MuChoice::zero) ? Complex(0.0) : base.gamma;
                Complex q1{0.83, 0.21}, q2{-0.67, 0.44};
                int extra = (mc == MuChoice::zero) ? 0 : 1;
                auto t1 = tails_at(N, mu, 0, base.gamma, base.delta, base.epsilon, q1);
                auto t2 = tails_at(N, mu, 0, base.gamma, base.delta, base.epsilon, q2);
                Complex lhs = qp.raw.eval(q1) / qp.raw.eval(q2);
                Complex rhs = (t1[size_t(N + 1)] * cpow(q1, Complex(double(extra)))) /
                              (t2[size_t(N + 1)] * cpow(q2, Complex(double(extra))));
                CHECK(crel(lhs, rhs) < 1e-8);
            }
        }
    }
}

TEST_CASE("perturbed roots fail certification and non-roots do not terminate") {
    heun::test::Rng rng(603);
    heun::test::DrawOptions dopt;
    dopt.min_z0 = 0.0;
    dopt.min_w12 = 0.0;
    HeunParams base = heun::test::draw_params(rng, dopt);
    const int N = 2;
    QPolynomial qp = q_polynomial(N, MuChoice::zero, 0, base.gamma, base.delta, base.epsilon);
    auto roots = solve_roots(qp.reduced);
    REQUIRE(!roots.empty());
    CHECK_THROWS_AS(certify(N, MuChoice::zero, 0, base.gamma, base.delta, base.epsilon,
                             roots[0] + Complex(1e-3, 0)),
                    Error);

    // a q far from every root keeps a sizeable a_{N+1}
    Complex far{2.9, 1.7};
    bool too_close = false;
    for (Complex r : solve_roots(qp.raw))
        if (std::abs(far - r) < 0.1) too_close = true;
    REQUIRE(!too_close);
    auto tl = tails_at(N, {0, 0}, 0, base.gamma, base.delta, base.epsilon, far);
    double scale = 0.0;
    for (int n = 0; n <= N; ++n) scale = std::max(scale, std::abs(tl[size_t(n)]));
    CHECK(std::abs(tl[size_t(N + 1)]) > 1e-3 * scale);
}

TEST_CASE("center-1 termination with mu in {0, delta}") {
    heun::test::Rng rng(604);
    heun::test::DrawOptions dopt;
    dopt.min_z0 = 0.0;
    dopt.min_w12 = 0.0;
    HeunParams base = heun::test::draw_params(rng, dopt);
    for (MuChoice mc : {MuChoice::zero, MuChoice::exponent}) {
        TerminationResult res = four_term_termination(1, mc, 1, base.gamma, base.delta, base.epsilon);
        CHECK(!res.roots.empty());
        for (const auto& cert : res.certificates) {
            CHECK(cert.max_residual < 1e-9);
            CHECK(cert.a_tail_norms[0] < 1e-9);
        }
    }
}

TEST_CASE("five-term pairs at the apparent center") {
    Complex gamma{0.31, 0.07}, delta{-0.22, 0.11};

    FiveTermResult r2 = five_term_termination(1, 2, gamma, delta);
    CHECK(r2.count_expected == 6);
    CHECK(!r2.degenerate_first_equation);
    for (const auto& pr : r2.pairs) {
        CHECK(pr.cert.a_tail_norms[0] < 1e-8);
        CHECK(pr.cert.a_tail_norms[1] < 1e-8);
        CHECK(pr.cert.a_tail_norms[2] < 1e-8);
        CHECK(pr.cert.max_residual < 1e-8);
    }
    CHECK(static_cast<int>(r2.pairs.size()) == 6);
    CHECK(!r2.count_mismatch);

    FiveTermResult r0 = five_term_termination(1, 0, gamma, delta);
    CHECK(r0.count_expected == 1);
    // the zero-convention resonance coefficient sits exactly at the tail head:
    // the first equation is identically satisfied and the solutions form a curve
    CHECK(r0.degenerate_first_equation);
    CHECK(r0.count_mismatch);
    CHECK(r0.pairs.size() >= 2);  // sampled curve points
    for (const auto& pr : r0.pairs) CHECK(pr.cert.max_residual < 1e-8);
}

TEST_CASE("finite-sum object: structure, round trip, two evaluation paths") {
    heun::test::Rng rng(605);
    heun::test::DrawOptions dopt;
    dopt.min_z0 = 0.0;
    dopt.min_w12 = 0.0;
    HeunParams base = heun::test::draw_params(rng, dopt);
    const int N = 1;
    QPolynomial qp = q_polynomial(N, MuChoice::exponent, 0, base.gamma, base.delta, base.epsilon);
    auto roots = solve_roots(qp.reduced);
    REQUIRE(static_cast<int>(roots.size()) == N + 1);

    FiniteSum fs = finite_sum_solution(N, MuChoice::exponent, 0, base.gamma, base.delta,
                                       base.epsilon, roots[0]);
    CHECK(fs.coeffs.size() == size_t(N + 1));  // exactly N+1 basis terms plus C0

    std::string text = fs.serialize();
    FiniteSum back = FiniteSum::parse(text);
    Complex z{0.5, 0};
    Complex v1 = fs.eval(z);
    Complex v2 = back.eval(z);
    CHECK(std::memcmp(&v1, &v2, sizeof(Complex)) == 0);

    // agrees with the N-truncated expansion evaluation
    ExpansionSpec spec = make_spec(fs.kind, fs.params, fs.center, fs.mu);
    for (int k = 0; k < 10; ++k) {
        Complex zz{0.08 + 0.08 * k, 0.0};
        EvaluatedExpansion ev = eval_expansion(spec, zz, N, {});
        CHECK(crel(fs.eval(zz), ev.value) < 1e-9);
    }
}
