#pragma once

#include <stdexcept>
#include <string>

namespace tomo {

/// Violated precondition or malformed input (bad alpha, shape mismatch, ...).
class PreconditionError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Iterative kernel failed to converge; carries the residual it got stuck at.
class SolverFailure : public std::runtime_error {
public:
    SolverFailure(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}

    double residual() const noexcept { return residual_; }

private:
    double residual_;
};

} // namespace tomo
