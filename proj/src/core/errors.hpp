#pragma once

#include <stdexcept>
#include <string>

namespace prodplan {

/// Parameter file could not be parsed or does not match the schema.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// An iterative solver hit its iteration budget.
class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& what, int iterations, double last_residual)
        : std::runtime_error(what), iterations_(iterations), last_residual_(last_residual) {}

    int iterations() const { return iterations_; }
    double last_residual() const { return last_residual_; }

private:
    int iterations_;
    double last_residual_;
};

/// The elimination solver could not bracket a sign change. Existence of a
/// nonnegative root is guaranteed, so this indicates a defect.
class BracketFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace prodplan
