#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dissensus {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad sizes, out-of-range values, invalid configuration.
class InvalidArgument : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

/// Base for numerical failures of the equilibrium solvers.
class SolverError : public Error {
public:
    using Error::Error;
};

class IsolatedNodeError : public SolverError {
public:
    explicit IsolatedNodeError(std::size_t node)
        : SolverError("node " + std::to_string(node) + " has no neighbors; extended model needs d_i >= 1"),
          node_(node) {}
    std::size_t node() const noexcept { return node_; }

private:
    std::size_t node_;
};

class SingularSystemError : public SolverError {
public:
    SingularSystemError(const std::string& what, double rcond)
        : SolverError(what), rcond_(rcond) {}
    /// Reciprocal 1-norm condition estimate at the time of failure (0 if the factorization broke down).
    double rcond() const noexcept { return rcond_; }

private:
    double rcond_;
};

class NotConvergedError : public SolverError {
public:
    NotConvergedError(const std::string& what, std::size_t iterations, double lastChange)
        : SolverError(what), iterations_(iterations), lastChange_(lastChange) {}
    std::size_t iterations() const noexcept { return iterations_; }
    double lastChange() const noexcept { return lastChange_; }

private:
    std::size_t iterations_;
    double lastChange_;
};

/// Pearson correlation requested on a constant series.
class ConstantInputError : public Error {
public:
    using Error::Error;
};

} // namespace dissensus
