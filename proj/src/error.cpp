#include "shapeopt/error.hpp"

namespace shapeopt {

std::string_view errc_name(Errc code) noexcept
{
    switch (code) {
    case Errc::NonConvexInput: return "NonConvexInput";
    case Errc::DegenerateInput: return "DegenerateInput";
    case Errc::NegativeEpsilon: return "NegativeEpsilon";
    case Errc::NonPositiveScale: return "NonPositiveScale";
    case Errc::InfeasibleVolume: return "InfeasibleVolume";
    case Errc::NonConvergence: return "NonConvergence";
    case Errc::SyntaxError: return "SyntaxError";
    case Errc::UnknownIdentifier: return "UnknownIdentifier";
    case Errc::MissingBinding: return "MissingBinding";
    case Errc::NonFiniteResult: return "NonFiniteResult";
    case Errc::EllipticityViolation: return "EllipticityViolation";
    case Errc::MeshQualityFailure: return "MeshQualityFailure";
    case Errc::SolverNonConvergence: return "SolverNonConvergence";
    case Errc::SingularSystem: return "SingularSystem";
    case Errc::InvalidProfile: return "InvalidProfile";
    case Errc::UnsupportedDirection: return "UnsupportedDirection";
    case Errc::ObjectiveFailure: return "ObjectiveFailure";
    case Errc::EmptySelection: return "EmptySelection";
    case Errc::InvalidArgument: return "InvalidArgument";
    }
    return "Unknown";
}

bool is_numeric_failure(Errc code) noexcept
{
    switch (code) {
    case Errc::NonConvergence:
    case Errc::NonFiniteResult:
    case Errc::MeshQualityFailure:
    case Errc::SolverNonConvergence:
    case Errc::SingularSystem:
    case Errc::ObjectiveFailure:
        return true;
    default:
        return false;
    }
}

} // namespace shapeopt
