#pragma once

#include <stdexcept>
#include <string>

namespace crocco {

/// Bad run configuration (file syntax, invariant violations, unknown keys).
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& m) : std::runtime_error(m) {}
};

/// Scenario data fails a structural requirement (non-finite fields,
/// Burgers residual, sign conditions, data bounds).
struct DataError : std::runtime_error {
    explicit DataError(const std::string& m) : std::runtime_error(m) {}
};

/// Geometric failure (degenerate domain, foot outside the domain).
struct GeometryError : std::runtime_error {
    explicit GeometryError(const std::string& m) : std::runtime_error(m) {}
};

/// Numerical solver failure (Newton stagnation, positivity loss).
struct SolverError : std::runtime_error {
    explicit SolverError(const std::string& m) : std::runtime_error(m) {}
};

/// Output / filesystem failure.
struct IoError : std::runtime_error {
    explicit IoError(const std::string& m) : std::runtime_error(m) {}
};

}  // namespace crocco
