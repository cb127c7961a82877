#ifndef HEUN_EXPANSIONS_HPP
#define HEUN_EXPANSIONS_HPP

#include <optional>
#include <vector>

#include "heun/frobenius.hpp"
#include "heun/heun_core.hpp"
#include "heun/special_functions.hpp"
#include "heun/types.hpp"

namespace heun {

// Six expansion families for u. Type1 kinds expand the series of the
// derivative-transform equation; Type2 kinds do the same after the
// exponential rescaling u = e^{-eps z/2} w and carry that prefactor.
// Beta0: center 0, incomplete-Beta terms B(1+n-gamma+mu, 1-delta; z).
// Beta1: center 1, terms (-1)^n B(1-gamma, 1+n-delta+mu; z).
// Appell: free center z1, terms (-z1)^{mu+n} z^{1-gamma}/(1-gamma)
//         F1(1-gamma; delta, -mu-n; 2-gamma; z, z/z1).
enum class ExpansionKind { Type1Beta0, Type1Beta1, Type1Appell, Type2Beta0, Type2Beta1, Type2Appell };

const char* expansion_kind_name(ExpansionKind k);
std::optional<ExpansionKind> expansion_kind_from_name(const std::string& name);

struct ExpansionSpec {
    ExpansionKind kind;
    HeunParams params;
    Complex center;  // 0 or 1 for Beta kinds, the free z1 for Appell kinds
    Complex mu;
    // cached auxiliary equation
    PolyOde aux;
    Complex z0;        // Type1: apparent singularity q/alpha
    Complex w1, w2;    // Type2: the two apparent singularities
    Complex p0;        // Type2: leading coefficient of the quadratic prefactor

    bool is_type2() const {
        return kind == ExpansionKind::Type2Beta0 || kind == ExpansionKind::Type2Beta1 ||
               kind == ExpansionKind::Type2Appell;
    }
    bool is_appell() const {
        return kind == ExpansionKind::Type1Appell || kind == ExpansionKind::Type2Appell;
    }
};

// Validates kind/center/mu and caches the auxiliary equation.
// Beta kinds pin the center (0 or 1) and accept mu in {0, gamma} / {0, delta};
// Appell kinds accept any center off {0, 1} with mu an indicial exponent there.
ExpansionSpec make_spec(ExpansionKind kind, const HeunParams& params, Complex center, Complex mu);

// Closed-form C0 where one exists and its Re-condition holds:
//   Type1Beta0 -> -mu/q          if Re(1-gamma+mu) > 0
//   Type1Beta1 -> 0              if Re(1-gamma) > 0
//   Type2Beta0 -> -mu/(q - gamma eps/2)  if Re(1-gamma+mu) > 0
//   Type2Beta1 -> 0              if Re(1-gamma) > 0
// Appell kinds have no closed form (use c0_numeric).
std::optional<Complex> c0_closed_form(const ExpansionSpec& spec);

// Solves the Heun-equation residual, linear in C0, at probe_z (analytic
// derivatives of the partial sum); cross-checked at a second probe. For the
// Beta1 kinds this reports the constant of the unreflected center-1 basis
// (see eval_expansion below), obtained from the working constant by an
// accelerated summation of the absorbed complete-Beta parts.
Complex c0_numeric(const ExpansionSpec& spec, Complex probe_z, int n_terms);

// Beta1 kinds are evaluated through the reflected integrals
// -(-1)^n B(1+n-delta+mu, 1-gamma; 1-z): term-by-term these differ from
// (-1)^n B(1-gamma, 1+n-delta+mu; z) only by complete-Beta constants, which
// converge slowly (their sum is absorbed into the reported c0); the reflected
// terms converge geometrically in 1-z.
struct EvaluatedExpansion {
    Complex c0;  // constant of the working basis
    std::vector<Complex> partial_sums;  // prefactor- and C0-inclusive
    Complex value;
    SeriesDiagnostics diagnostics;
};

// Appell basis evaluation route: the automatic pick uses the incomplete-Beta
// reduction when gamma or delta is exactly 0 and the double series otherwise.
enum class AppellRoute { Auto, Full, DeltaZero, GammaZero };

struct EvalOptions {
    SumOptions sum;
    bool allow_divergence = false;  // report converged=false instead of throwing
    AppellRoute appell_route = AppellRoute::Auto;
};

EvaluatedExpansion eval_expansion(const ExpansionSpec& spec, Complex z, int n_terms,
                                  const EvalOptions& opt = {});

// Local series of the auxiliary equation backing this expansion (a_0 = 1).
LocalSeries expansion_series(const ExpansionSpec& spec, int n_terms);

// Residual of the assembled u = prefactor * (C0 + sum a_n term_n) in the Heun
// equation at z, using analytic derivatives of the basis terms; also returns
// the magnitude scale of the three residual pieces.
struct ResidualValue {
    Complex residual;
    double scale;
};
ResidualValue assembled_residual(const ExpansionSpec& spec, const std::vector<Complex>& coeffs,
                                 Complex c0, Complex z);

// u = prefactor(z) * (c0 + sum_n coeffs[n] term_n(z)) for an explicit
// coefficient list (finite sums and truncations).
Complex eval_partial(const ExpansionSpec& spec, const std::vector<Complex>& coeffs, Complex c0,
                     Complex z);

// Largest radius along the ray so that the partial-sum tails still decay
// geometrically (ratio < 0.98 over the last 20 terms, 3 successive windows).
// Returns +infinity when the series terminates, 0 when no radius works.
double empirical_domain(const ExpansionSpec& spec, double ray_angle, int n_terms = 120);

}  // namespace heun

#endif
