#pragma once

#include <stdexcept>
#include <string>

namespace holomorse {

enum class ErrorCode {
    InvalidInput,
    DegenerateCritical,
    CoincidentValues,
    NotConverged,
    StepFailure,
    NonGenericConfig,
    OnStokesRay,
    NonDecaying,
    QuadratureFail,
    AmbiguousRounding,
    NonGeneric,
    NotAdjacent,
    SupportViolation,
    NonSimpleRoot,
    BranchAmbiguity,
    ContourThroughRoot,
    UnresolvedConnection,
    ChargeIdentificationFail,
    ZeroCentralCharge,
    ZeroCharge,
    BoundaryRay,
    TieBreak,
    EmptyGeometry,
};

const char* error_name(ErrorCode c);

// Domain error. The CLI maps these to exit code 2 and reports name().
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);
    ErrorCode code() const noexcept { return code_; }
    const char* name() const noexcept { return error_name(code_); }

private:
    ErrorCode code_;
};

[[noreturn]] void raise(ErrorCode code, const std::string& what);

}  // namespace holomorse
