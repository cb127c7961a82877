#include "heun/numeric.hpp"

#include <cmath>

namespace heun {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::PoleAtC: return "PoleAtC";
        case ErrorCode::OutsideDomain: return "OutsideDomain";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::NonPositiveIntegerA: return "NonPositiveIntegerA";
        case ErrorCode::GammaPole: return "GammaPole";
        case ErrorCode::IndicialDegeneracy: return "IndicialDegeneracy";
        case ErrorCode::OutsideRadius: return "OutsideRadius";
        case ErrorCode::PathTooCloseToSingularity: return "PathTooCloseToSingularity";
        case ErrorCode::StepUnderflow: return "StepUnderflow";
        case ErrorCode::AtSingularity: return "AtSingularity";
        case ErrorCode::AlphaZero: return "AlphaZero";
        case ErrorCode::EpsilonZero: return "EpsilonZero";
        case ErrorCode::IrregularPoint: return "IrregularPoint";
        case ErrorCode::NotAnExponent: return "NotAnExponent";
        case ErrorCode::Resonance: return "Resonance";
        case ErrorCode::InvalidMu: return "InvalidMu";
        case ErrorCode::ConditionViolated: return "ConditionViolated";
        case ErrorCode::ProbeDegenerate: return "ProbeDegenerate";
        case ErrorCode::ProbesDisagree: return "ProbesDisagree";
        case ErrorCode::DegenerateGammaDelta: return "DegenerateGammaDelta";
        case ErrorCode::DegreeMismatch: return "DegreeMismatch";
        case ErrorCode::CertificationFailed: return "CertificationFailed";
        case ErrorCode::ConfigError: return "ConfigError";
        case ErrorCode::InternalError: return "InternalError";
    }
    return "UnknownError";
}

SpanFit fit_two_column_span(const std::vector<Complex>& b1, const std::vector<Complex>& b2,
                            const std::vector<Complex>& y) {
    // normal equations for the 2-column complex least-squares problem
    Complex g11(0.0), g12(0.0), g22(0.0), r1(0.0), r2(0.0);
    for (size_t i = 0; i < y.size(); ++i) {
        g11 += std::conj(b1[i]) * b1[i];
        g12 += std::conj(b1[i]) * b2[i];
        g22 += std::conj(b2[i]) * b2[i];
        r1 += std::conj(b1[i]) * y[i];
        r2 += std::conj(b2[i]) * y[i];
    }
    Complex det = g11 * g22 - g12 * std::conj(g12);
    if (std::abs(det) < 1e-300) throw Error(ErrorCode::InternalError, "span fit is singular");
    SpanFit fit;
    fit.k1 = (g22 * r1 - g12 * r2) / det;
    fit.k2 = (g11 * r2 - std::conj(g12) * r1) / det;
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < y.size(); ++i) {
        num += std::norm(y[i] - fit.k1 * b1[i] - fit.k2 * b2[i]);
        den += std::norm(y[i]);
    }
    fit.rel_residual = den > 0 ? std::sqrt(num / den) : std::sqrt(num);
    return fit;
}

std::pair<Complex, Complex> quadratic_roots(Complex a, Complex b, Complex c) {
    Complex s = std::sqrt(b * b - 4.0 * a * c);
    // pick the sign that avoids cancellation in -b -/+ s
    if ((std::conj(b) * s).real() < 0.0) s = -s;
    Complex r1 = (-b - s) / (2.0 * a);
    Complex r2 = (std::abs(r1) > 0.0) ? c / (a * r1) : -b / a - r1;
    return {r1, r2};
}

}  // namespace heun
