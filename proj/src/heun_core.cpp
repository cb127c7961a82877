#include "heun/heun_core.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <cmath>

#include "heun/numeric.hpp"

namespace heun {

namespace {

void check_params(const HeunParams& p) {
    for (Complex v : {p.gamma, p.delta, p.epsilon, p.alpha, p.q})
        if (!is_finite(v)) throw Error(ErrorCode::InternalError, "non-finite Heun parameter");
}

}  // namespace

OracleSolution frobenius_heun(const HeunParams& p, ExponentChoice choice, int n_terms) {
    check_params(p);
    if (n_terms < 1) throw Error(ErrorCode::InternalError, "n_terms must be >= 1");
    Complex rho;
    if (choice == ExponentChoice::zero) {
        if (is_nonpositive_integer(p.gamma))
            throw Error(ErrorCode::IndicialDegeneracy, "exponent 0 needs gamma not in {0,-1,-2,...}");
        rho = Complex(0.0);
    } else {
        if (is_nonpositive_integer(2.0 - p.gamma))
            throw Error(ErrorCode::IndicialDegeneracy, "exponent 1-gamma needs 2-gamma not in {0,-1,-2,...}");
        rho = 1.0 - p.gamma;
    }

    std::vector<Complex> c(static_cast<size_t>(n_terms), Complex(0.0));
    c[0] = Complex(1.0);
    Complex cm1(0.0);
    for (int k = 0; k + 1 < n_terms; ++k) {
        Complex kk{double(k), 0.0};
        Complex lead = (kk + 1.0 + rho) * (kk + rho + p.gamma);
        Complex rhs = ((kk + rho) * (kk + rho - 1.0 + p.gamma + p.delta - p.epsilon) - p.q) * c[size_t(k)] +
                      (p.alpha + p.epsilon * (kk - 1.0 + rho)) * cm1;
        cm1 = c[size_t(k)];
        c[size_t(k + 1)] = rhs / lead;
    }
    return OracleSolution{p, rho, std::move(c)};
}

OracleValue eval_oracle(const OracleSolution& sol, Complex z) {
    if (std::abs(z) >= 1.0) throw Error(ErrorCode::OutsideRadius, "oracle series radius is 1");
    const auto& c = sol.coeffs;
    if (z == Complex(0.0)) {
        Complex rho = sol.exponent;
        SeriesDiagnostics diag{int(c.size()), 0.0, true};
        if (rho == Complex(0.0)) return {c[0], c.size() > 1 ? c[1] : Complex(0.0), diag};
        if (rho.real() > 1.0) return {Complex(0.0), Complex(0.0), diag};
        if (rho == Complex(1.0)) return {Complex(0.0), c[0], diag};
        if (rho.real() > 0.0) {
            // u -> 0 but du blows up; surface that as an infinity, not a value
            double inf = std::numeric_limits<double>::infinity();
            return {Complex(0.0), Complex(inf, inf), diag};
        }
        throw Error(ErrorCode::OutsideRadius, "series value is singular at z = 0 for this exponent");
    }
    // Horner for P and P'; u = z^rho P, u' = z^{rho-1} (rho P + z P')
    Complex P(0.0), dP(0.0);
    for (size_t i = c.size(); i-- > 0;) {
        dP = dP * z + P;
        P = P * z + c[i];
    }
    Complex zr = cpow(z, sol.exponent);
    Complex u = zr * P;
    Complex du = zr / z * (sol.exponent * P + z * dP);
    SeriesDiagnostics diag;
    diag.terms_used = static_cast<int>(c.size());
    double tail = std::abs(c.back()) * std::pow(std::abs(z), double(c.size() - 1));
    diag.last_term_magnitude = tail;
    diag.converged = tail <= 1e-12 * (1.0 + std::abs(P));
    if (!diag.converged) throw Error(ErrorCode::NoConvergence, "oracle series truncation too short at this z");
    return {u, du, diag};
}

Complex heun_residual(const HeunParams& p, Complex z, Complex u, Complex du, Complex d2u) {
    if (z == Complex(0.0) || z == Complex(1.0))
        throw Error(ErrorCode::AtSingularity, "residual undefined at z = 0, 1");
    return d2u + (p.gamma / z + p.delta / (z - 1.0) + p.epsilon) * du +
           (p.alpha * z - p.q) / (z * (z - 1.0)) * u;
}

namespace {

struct RkState {
    Complex u, du;
};

RkState rhs(const HeunParams& p, Complex z, const RkState& y) {
    Complex d2u = -(p.gamma / z + p.delta / (z - 1.0) + p.epsilon) * y.du -
                  (p.alpha * z - p.q) / (z * (z - 1.0)) * y.u;
    return {y.du, d2u};
}

double seg_distance(Complex a, Complex b, Complex pt) {
    Complex d = b - a;
    double len2 = std::norm(d);
    if (len2 == 0.0) return std::abs(pt - a);
    double t = std::clamp(((pt - a) * std::conj(d)).real() / len2, 0.0, 1.0);
    return std::abs(pt - (a + t * d));
}

}  // namespace

std::vector<PathPoint> integrate_heun(const HeunParams& p, const std::vector<Complex>& path,
                                      std::pair<Complex, Complex> init) {
    check_params(p);
    if (path.size() < 2) throw Error(ErrorCode::InternalError, "path needs at least two waypoints");
    for (size_t i = 0; i + 1 < path.size(); ++i) {
        if (seg_distance(path[i], path[i + 1], Complex(0.0)) < 1e-3 ||
            seg_distance(path[i], path[i + 1], Complex(1.0)) < 1e-3)
            throw Error(ErrorCode::PathTooCloseToSingularity, "path within 1e-3 of z = 0 or z = 1");
    }

    // Dormand-Prince 5(4)
    static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                        e6 = 22.0 / 525, e7 = -1.0 / 40;

    const double tol = 1e-12;
    std::vector<PathPoint> out;
    RkState y{init.first, init.second};
    out.push_back({path[0], y.u, y.du});

    for (size_t seg = 0; seg + 1 < path.size(); ++seg) {
        Complex za = path[seg], zb = path[seg + 1];
        Complex dz = zb - za;
        if (dz == Complex(0.0)) {
            out.push_back({zb, y.u, y.du});
            continue;
        }
        auto f = [&](double t, const RkState& s) {
            RkState d = rhs(p, za + t * dz, s);
            return RkState{d.u * dz, d.du * dz};
        };
        double t = 0.0, h = 0.05;
        while (t < 1.0) {
            h = std::min(h, 1.0 - t);
            if (h < 1e-14) throw Error(ErrorCode::StepUnderflow, "step size underflow");
            RkState k1 = f(t, y);
            RkState k2 = f(t + c2 * h, {y.u + h * a21 * k1.u, y.du + h * a21 * k1.du});
            RkState k3 = f(t + c3 * h, {y.u + h * (a31 * k1.u + a32 * k2.u), y.du + h * (a31 * k1.du + a32 * k2.du)});
            RkState k4 = f(t + c4 * h, {y.u + h * (a41 * k1.u + a42 * k2.u + a43 * k3.u),
                                        y.du + h * (a41 * k1.du + a42 * k2.du + a43 * k3.du)});
            RkState k5 = f(t + c5 * h, {y.u + h * (a51 * k1.u + a52 * k2.u + a53 * k3.u + a54 * k4.u),
                                        y.du + h * (a51 * k1.du + a52 * k2.du + a53 * k3.du + a54 * k4.du)});
            RkState k6 = f(t + h, {y.u + h * (a61 * k1.u + a62 * k2.u + a63 * k3.u + a64 * k4.u + a65 * k5.u),
                                   y.du + h * (a61 * k1.du + a62 * k2.du + a63 * k3.du + a64 * k4.du + a65 * k5.du)});
            Complex u5 = y.u + h * (b1 * k1.u + b3 * k3.u + b4 * k4.u + b5 * k5.u + b6 * k6.u);
            Complex du5 = y.du + h * (b1 * k1.du + b3 * k3.du + b4 * k4.du + b5 * k5.du + b6 * k6.du);
            RkState k7 = f(t + h, {u5, du5});
            Complex erru = h * (e1 * k1.u + e3 * k3.u + e4 * k4.u + e5 * k5.u + e6 * k6.u + e7 * k7.u);
            Complex errdu = h * (e1 * k1.du + e3 * k3.du + e4 * k4.du + e5 * k5.du + e6 * k6.du + e7 * k7.du);
            double err = std::max(std::abs(erru), std::abs(errdu));
            double lim = tol * (1.0 + std::max(std::abs(y.u), std::abs(y.du)));
            if (err <= lim) {
                t += h;
                y = {u5, du5};
            }
            double fac = (err > 0.0) ? 0.9 * std::pow(lim / err, 0.2) : 5.0;
            h *= std::clamp(fac, 0.2, 5.0);
        }
        out.push_back({zb, y.u, y.du});
    }
    return out;
}

DerivativeOde build_eq3(const HeunParams& p) {
    check_params(p);
    if (p.alpha == Complex(0.0))
        throw Error(ErrorCode::AlphaZero, "z0 = q/alpha undefined for alpha = 0");
    Complex z0 = p.q / p.alpha;

    Polynomial lz = Polynomial::linear_root(Complex(0.0));
    Polynomial l1 = Polynomial::linear_root(Complex(1.0));
    Polynomial l0 = Polynomial::linear_root(z0);

    PolyOde ode;
    ode.A = lz * l1 * l0;
    ode.B = (l1 * l0) * (1.0 - p.gamma) + (lz * l0) * (1.0 - p.delta) +
            (lz * l1 * l0) * p.epsilon + (lz * l1) * Complex(-1.0);
    ode.C = Polynomial({z0 * (z0 * p.alpha + p.epsilon - p.gamma * p.epsilon),
                        p.gamma * p.epsilon - z0 * (2.0 * p.alpha + p.epsilon * (2.0 - p.delta - p.gamma)),
                        p.alpha - (p.delta + p.gamma - 1.0) * p.epsilon});
    return {std::move(ode), z0};
}

PolyOde build_eq3_cleared(const HeunParams& p) {
    check_params(p);
    if (p.alpha == Complex(0.0) && p.q == Complex(0.0))
        throw Error(ErrorCode::AlphaZero, "alpha = q = 0 degenerates the transform entirely");
    Polynomial lz = Polynomial::linear_root(Complex(0.0));
    Polynomial l1 = Polynomial::linear_root(Complex(1.0));
    Polynomial laq({-p.q, p.alpha});  // alpha z - q

    PolyOde ode;
    ode.A = lz * l1 * laq;
    ode.B = (l1 * laq) * (1.0 - p.gamma) + (lz * laq) * (1.0 - p.delta) + (lz * l1 * laq) * p.epsilon +
            (lz * l1) * (-p.alpha);
    ode.C = Polynomial({p.q * (p.q + p.epsilon * (1.0 - p.gamma)),
                        p.alpha * p.gamma * p.epsilon -
                            p.q * (2.0 * p.alpha + p.epsilon * (2.0 - p.delta - p.gamma)),
                        p.alpha * (p.alpha - (p.delta + p.gamma - 1.0) * p.epsilon)});
    return ode;
}

ScaledDerivativeOde build_eq25(const HeunParams& p) {
    check_params(p);
    if (p.epsilon == Complex(0.0))
        throw Error(ErrorCode::EpsilonZero, "the exponential rescaling needs epsilon != 0");
    Complex p0 = -p.epsilon * p.epsilon / 4.0;
    Complex pb = (4.0 * p.alpha - 2.0 * (p.gamma + p.delta) * p.epsilon + p.epsilon * p.epsilon) / 4.0;
    Complex pc = (2.0 * p.gamma * p.epsilon - 4.0 * p.q) / 4.0;
    auto [z1, z2] = quadratic_roots(p0, pb, pc);

    Polynomial lz = Polynomial::linear_root(Complex(0.0));
    Polynomial l1 = Polynomial::linear_root(Complex(1.0));
    Polynomial f1 = Polynomial::linear_root(z1);
    Polynomial f2 = Polynomial::linear_root(z2);

    PolyOde ode;
    ode.A = lz * l1 * f1 * f2;
    ode.B = (l1 * f1 * f2) * (1.0 - p.gamma) + (lz * f1 * f2) * (1.0 - p.delta) +
            (lz * l1 * f2) * Complex(-1.0) + (lz * l1 * f1) * Complex(-1.0);
    ode.C = (f1 * f1 * f2 * f2) * p0;
    return {std::move(ode), z1, z2, p0};
}

BranchedValue v_from_u(const HeunParams& p, Complex z, Complex du) {
    bool cut = (z.imag() == 0.0 && z.real() < 0.0) || ((z - 1.0).imag() == 0.0 && (z - 1.0).real() < 0.0);
    if (du == Complex(0.0)) return {Complex(0.0), cut};
    Complex v = cpow(z, p.gamma) * cpow(z - 1.0, p.delta) * du;
    return {v, cut};
}

}  // namespace heun
