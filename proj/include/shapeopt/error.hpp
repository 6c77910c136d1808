#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace shapeopt {

enum class Errc {
    // geometry
    NonConvexInput,
    DegenerateInput,
    NegativeEpsilon,
    NonPositiveScale,
    InfeasibleVolume,
    NonConvergence,
    // expressions
    SyntaxError,
    UnknownIdentifier,
    MissingBinding,
    NonFiniteResult,
    EllipticityViolation,
    // finite elements
    MeshQualityFailure,
    SolverNonConvergence,
    SingularSystem,
    // functionals / optimizer
    InvalidProfile,
    UnsupportedDirection,
    ObjectiveFailure,
    EmptySelection,
    // generic precondition failure
    InvalidArgument,
};

std::string_view errc_name(Errc code) noexcept;

/// Every failure raised by the library. `code()` identifies the contract
/// violation; `what()` carries a human readable message.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

/// True for failures caused by numerics rather than bad user input.
bool is_numeric_failure(Errc code) noexcept;

} // namespace shapeopt
