#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace pucci {

// Machine-readable failure codes. The CLI serializes these as
// {"error": "<name>", "message": ...} on stderr with exit status 1;
// tests match on the code, never on message text.
enum class ErrorCode {
    InvalidEllipticity,
    MuAboveEigenvalue,
    DegenerateTau,
    SublinearExponent,
    KUndefined,
    GridTooSmall,
    NonPositiveSample,
    RegimeMismatch,
    ConstraintViolation,
    OutOfValidity,
    CertificationFailure,
    NegativeX,
    InsufficientTail,
    StepFailure,
    NewtonDivergence,
    NonMonotoneOperator,
    MonotonicityViolation,
    BracketViolation,
    TailTooShort,
    AmbiguousClass,
    BoundViolation,
    HypothesisViolation,
    GrowthHypothesisViolation,
    BadInput,
};

std::string_view to_string(ErrorCode c);

class DomainError : public std::runtime_error {
public:
    DomainError(ErrorCode code, const std::string& what)
        : std::runtime_error(what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }
    std::string_view code_name() const noexcept { return to_string(code_); }

private:
    ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& msg) {
    throw DomainError(code, msg);
}

} // namespace pucci
