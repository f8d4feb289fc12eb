#pragma once

#include <stdexcept>
#include <string>

namespace spectun {

/// Base class for every failure this library raises on purpose.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A precondition on arguments or domain membership was violated.
struct DomainError : Error {
    using Error::Error;
};

/// Evaluation requested at (or across) a metric singularity without limit handling.
struct SingularityError : Error {
    using Error::Error;
};

/// A constructed object failed its own consistency checks (quadrature did not
/// converge, interface mismatch above tolerance, ...).
struct ConstructionError : Error {
    using Error::Error;
};

/// Too few samples to run the requested diagnostic.
struct InsufficientData : Error {
    using Error::Error;
};

/// The linear problem admits no positive solution for the requested shift.
struct NoPositiveSolution : Error {
    using Error::Error;
};

/// Shooting/matching failed to converge; carries bracket diagnostics in what().
struct SolverDiverged : Error {
    using Error::Error;
};

/// No positive decreasing model profile exists out to the requested radius.
struct RadiusTooLarge : Error {
    using Error::Error;
};

/// Assembled pieces disagree at an interface beyond tolerance.
struct AssemblyError : Error {
    using Error::Error;
};

/// No admissible neck scale was found down to the search floor.
struct NotAdmissible : Error {
    using Error::Error;
};

/// Configuration file is malformed, has unknown keys, or out-of-range values.
struct ConfigError : Error {
    using Error::Error;
};

}  // namespace spectun
