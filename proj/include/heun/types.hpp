#ifndef HEUN_TYPES_HPP
#define HEUN_TYPES_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace heun {

using Complex = std::complex<double>;

// Convergence bookkeeping attached to every series evaluation.
struct SeriesDiagnostics {
    int terms_used = 0;
    double last_term_magnitude = 0.0;
    bool converged = false;
};

enum class ErrorCode {
    PoleAtC,
    OutsideDomain,
    NoConvergence,
    NonPositiveIntegerA,
    GammaPole,
    IndicialDegeneracy,
    OutsideRadius,
    PathTooCloseToSingularity,
    StepUnderflow,
    AtSingularity,
    AlphaZero,
    EpsilonZero,
    IrregularPoint,
    NotAnExponent,
    Resonance,
    InvalidMu,
    ConditionViolated,
    ProbeDegenerate,
    ProbesDisagree,
    DegenerateGammaDelta,
    DegreeMismatch,
    CertificationFailed,
    ConfigError,
    InternalError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
  public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code) {}
    ErrorCode code() const { return code_; }

  private:
    ErrorCode code_;
};

}  // namespace heun

#endif
