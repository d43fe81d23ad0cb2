#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>

namespace replicator {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Points closer than this to a face of the simplex are treated as boundary points.
inline constexpr double kInteriorEps = 1e-9;

/// Central finite-difference step used wherever an analytic derivative is unavailable.
inline constexpr double kFdStep = 1e-5;

/// A point outside the domain of an operation (usually: not in the simplex interior).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Malformed arguments: bad dimensions, empty inputs, violated preconditions.
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A time integration left the admissible state space or its inner solver failed.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, std::size_t step)
        : std::runtime_error(what + " (step " + std::to_string(step) + ")"), step_(step) {}

    std::size_t step() const noexcept { return step_; }

private:
    std::size_t step_;
};

/// A precondition of a structural check does not hold for the given inputs.
class HypothesisError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace replicator
