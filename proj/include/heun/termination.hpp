#ifndef HEUN_TERMINATION_HPP
#define HEUN_TERMINATION_HPP

#include <string>
#include <vector>

#include "heun/expansions.hpp"
#include "heun/polynomial.hpp"
#include "heun/types.hpp"

namespace heun {

enum class MuChoice { zero, exponent };  // exponent = gamma at center 0, delta at center 1

// alpha forced by a vanishing trailing recurrence coefficient at index N:
// alpha = -eps (1 + N - gamma - delta + mu). eps = 0 leaves only the alpha = 0
// three-term degeneration, which is not a termination result.
Complex termination_alpha(int N, Complex mu, Complex gamma, Complex delta, Complex epsilon);

// Polynomial restriction on q for right-side termination at index N of the
// center-0 / center-1 incomplete-Beta expansions.
//   raw      — monic polynomial from the exact polynomial-in-q recurrence with
//              the structural S-root power stripped (the candidate equation
//              a_{N+1}(q) = 0 cleared of denominators);
//   reduced  — monic polynomial over exactly the roots that pass the full
//              certification (tail coefficients, a_N nonzero, finite-sum
//              residual);
//   excluded — raw roots that do not certify: always the structural
//              non-terminating candidate, plus any candidate too close to
//              the q-degeneration for double precision.
struct QPolynomial {
    Polynomial reduced;
    Polynomial raw;
    std::vector<Complex> excluded;
    Complex alpha;
    Complex mu;
};

QPolynomial q_polynomial(int N, MuChoice mu_choice, int center, Complex gamma, Complex delta,
                         Complex epsilon);

struct Certificate {
    double a_tail_norms[3];  // |a_{N+1,2,3}| / max|a_0..a_N|
    double a_n_norm;         // |a_N| / max|a_0..a_N|
    double max_residual;     // finite-sum Heun residual over the sample points, relative
};

// Reruns the recurrence at q_root, checks a_{N+1,2,3} all below 1e-9 * scale
// with a_N nonzero, assembles the (N+1)-term finite sum with its C0 and checks
// the Heun-equation residual at 7 interior points. Throws CertificationFailed.
Certificate certify(int N, MuChoice mu_choice, int center, Complex gamma, Complex delta,
                    Complex epsilon, Complex q_root);

struct TerminationResult {
    int N;
    Complex mu;
    Complex alpha;
    std::vector<Complex> roots;
    std::vector<Certificate> certificates;
    std::vector<Complex> excluded_roots;
};

// q_polynomial + solve + certify for every reduced root.
TerminationResult four_term_termination(int N, MuChoice mu_choice, int center, Complex gamma,
                                        Complex delta, Complex epsilon);

struct TerminationPair {
    Complex q, epsilon;
    Certificate cert;
};

struct FiveTermResult {
    int N;
    Complex mu;
    std::vector<TerminationPair> pairs;
    int count_expected;
    bool count_mismatch;
    // mu = 0, N = 1: the a_{N+1} equation is identically satisfied (the free
    // resonance coefficient is the tail head); the solution set is then a
    // curve sampled per seed instead of isolated points.
    bool degenerate_first_equation;
    std::string note;
};

// Solves a_{N+1}(q,eps) = a_{N+2}(q,eps) = 0 at the apparent-singularity
// center z0 = q/alpha (alpha tied by termination_alpha) by damped Newton from
// a 40x40 seed grid; deduplicates, certifies, compares the count with
// N^2 (mu=0) / (N+1)(N+2) (mu=2).
FiveTermResult five_term_termination(int N, int mu, Complex gamma, Complex delta);

// Serializable closed-form object for a certified finite sum.
struct FiniteSum {
    ExpansionKind kind;
    HeunParams params;
    Complex center, mu, c0;
    std::vector<Complex> coeffs;

    Complex eval(Complex z) const;
    std::string serialize() const;            // JSON, bit-exact doubles
    static FiniteSum parse(const std::string& json);
};

FiniteSum finite_sum_solution(int N, MuChoice mu_choice, int center, Complex gamma, Complex delta,
                              Complex epsilon, Complex q_root);

}  // namespace heun

#endif
