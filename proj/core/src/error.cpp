#include "holomorse/error.hpp"

namespace holomorse {

const char* error_name(ErrorCode c) {
    switch (c) {
        case ErrorCode::InvalidInput: return "InvalidInput";
        case ErrorCode::DegenerateCritical: return "DegenerateCritical";
        case ErrorCode::CoincidentValues: return "CoincidentValues";
        case ErrorCode::NotConverged: return "NotConverged";
        case ErrorCode::StepFailure: return "StepFailure";
        case ErrorCode::NonGenericConfig: return "NonGenericConfig";
        case ErrorCode::OnStokesRay: return "OnStokesRay";
        case ErrorCode::NonDecaying: return "NonDecaying";
        case ErrorCode::QuadratureFail: return "QuadratureFail";
        case ErrorCode::AmbiguousRounding: return "AmbiguousRounding";
        case ErrorCode::NonGeneric: return "NonGeneric";
        case ErrorCode::NotAdjacent: return "NotAdjacent";
        case ErrorCode::SupportViolation: return "SupportViolation";
        case ErrorCode::NonSimpleRoot: return "NonSimpleRoot";
        case ErrorCode::BranchAmbiguity: return "BranchAmbiguity";
        case ErrorCode::ContourThroughRoot: return "ContourThroughRoot";
        case ErrorCode::UnresolvedConnection: return "UnresolvedConnection";
        case ErrorCode::ChargeIdentificationFail: return "ChargeIdentificationFail";
        case ErrorCode::ZeroCentralCharge: return "ZeroCentralCharge";
        case ErrorCode::ZeroCharge: return "ZeroCharge";
        case ErrorCode::BoundaryRay: return "BoundaryRay";
        case ErrorCode::TieBreak: return "TieBreak";
        case ErrorCode::EmptyGeometry: return "EmptyGeometry";
    }
    return "Unknown";
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(what), code_(code) {}

void raise(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace holomorse
