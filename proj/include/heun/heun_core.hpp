#ifndef HEUN_HEUN_CORE_HPP
#define HEUN_HEUN_CORE_HPP

#include <utility>
#include <vector>

#include "heun/polynomial.hpp"
#include "heun/types.hpp"

namespace heun {

// Parameters of u'' + (gamma/z + delta/(z-1) + epsilon) u'
//                 + (alpha z - q)/(z(z-1)) u = 0.
// epsilon and alpha are independent; no constraint links them.
struct HeunParams {
    Complex gamma, delta, epsilon, alpha, q;
};

// Second-order ODE with polynomial coefficients A v'' + B v' + C v = 0,
// stored denominator-free. Singular points are the roots of A plus infinity.
struct PolyOde {
    Polynomial A, B, C;
};

// Local power-series solution of the Heun equation at z = 0:
// u = z^exponent * sum c_k z^k, c_0 = 1, radius 1.
struct OracleSolution {
    HeunParams params;
    Complex exponent;  // 0 or 1 - gamma
    std::vector<Complex> coeffs;
};

enum class ExponentChoice { zero, one_minus_gamma };

// Frobenius construction at z = 0 from the explicit three-term recurrence
//   (k+1+rho)(k+rho+gamma) c_{k+1} = [(k+rho)(k+rho-1+gamma+delta-eps) - q] c_k
//                                    + [alpha + eps (k-1+rho)] c_{k-1}.
OracleSolution frobenius_heun(const HeunParams& p, ExponentChoice choice, int n_terms);

struct OracleValue {
    Complex u, du;
    SeriesDiagnostics diag;
};
OracleValue eval_oracle(const OracleSolution& sol, Complex z);

struct PathPoint {
    Complex z, u, du;
};
// Second, independent oracle: adaptive Runge-Kutta integration of the Heun
// equation as a first-order system along straight segments between waypoints.
// The path must keep distance >= 1e-3 from z = 0 and z = 1.
std::vector<PathPoint> integrate_heun(const HeunParams& p, const std::vector<Complex>& path,
                                      std::pair<Complex, Complex> init);

// d2u + (gamma/z + delta/(z-1) + eps) du + (alpha z - q)/(z(z-1)) u
Complex heun_residual(const HeunParams& p, Complex z, Complex u, Complex du, Complex d2u);

// Equation for v = z^gamma (z-1)^delta u', cleared of denominators:
//   A = z(z-1)(z-z0), z0 = q/alpha (apparent singularity, exponents {0,2});
//   C is the quadratic prefactor polynomial of the v-term.
struct DerivativeOde {
    PolyOde ode;
    Complex z0;
};
DerivativeOde build_eq3(const HeunParams& p);

// Same equation multiplied through by alpha, so the coefficients are
// polynomial in q and alpha: valid for alpha = 0 (z0 at infinity) and q = 0
// (z0 merged into 0), where the recurrences degenerate to three-term shape.
PolyOde build_eq3_cleared(const HeunParams& p);

// Same construction after u = e^{-eps z/2} w: equation for z^gamma (z-1)^delta w',
// cleared; the two extra apparent singularities z1, z2 are the roots of the
// quadratic 1/4(-eps^2 z^2 + (4 alpha - 2(gamma+delta) eps + eps^2) z + 2 gamma eps - 4 q),
// leading coefficient p0 = -eps^2/4.
struct ScaledDerivativeOde {
    PolyOde ode;
    Complex z1, z2;
    Complex p0;
};
ScaledDerivativeOde build_eq25(const HeunParams& p);

struct BranchedValue {
    Complex value;
    bool on_cut;  // base of a principal power sits on the negative real axis
};
// v = z^gamma (z-1)^delta du, principal branches.
BranchedValue v_from_u(const HeunParams& p, Complex z, Complex du);

}  // namespace heun

#endif
