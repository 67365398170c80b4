#pragma once

#include <stdexcept>
#include <string>

namespace fracfv {

/// Gamma evaluated at a non-positive integer.
struct PoleError : std::domain_error {
    using std::domain_error::domain_error;
};

/// Riesz normalisation constant hits a gamma pole (e.g. d=1, g=-1).
struct ConstantUndefined : std::domain_error {
    using std::domain_error::domain_error;
};

/// Requested quadrature accuracy could not be reached; carries the estimate achieved.
struct QuadratureFailure : std::runtime_error {
    QuadratureFailure(const std::string& what, double achieved_rel_error)
        : std::runtime_error(what), achieved(achieved_rel_error) {}
    double achieved;
};

struct SingularSystem : std::runtime_error {
    SingularSystem(const std::string& what, double rcond_estimate)
        : std::runtime_error(what), rcond(rcond_estimate) {}
    double rcond;
};

struct SolverFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OutOfDomain : std::domain_error {
    using std::domain_error::domain_error;
};

/// Negative densities where nonnegativity is required (entropies, tail fits).
struct InvalidState : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Field/table/grid combination refers to different grids.
struct GridMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Initial datum evaluated to a non-finite value.
struct InvalidDatum : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Configuration rejected; `code` is a stable machine-readable name
/// such as "alpha-out-of-range-1d" or "unknown-key".
struct ConfigError : std::runtime_error {
    ConfigError(std::string code_, const std::string& what)
        : std::runtime_error(what), code(std::move(code_)) {}
    std::string code;
};

} // namespace fracfv
