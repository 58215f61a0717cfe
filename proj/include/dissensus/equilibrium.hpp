#pragma once

#include <cstddef>
#include <memory>

#include <Eigen/SparseLU>

#include "dissensus/graph.hpp"

namespace dissensus {

enum class Model { Basic, Extended };

const char* toString(Model model);

struct EquilibriumResult {
    Vector z;
    Model model = Model::Basic;
    /// Max-norm residual of the defining linear system.
    double residual = 0.0;
    /// 0 for direct solves.
    std::size_t iterations = 0;
    /// Reciprocal 1-norm condition estimate of the system matrix (1 for the basic model bound).
    double rcond = 1.0;
    /// Entries of z outside [-1, 1]; equilibria are never clamped.
    std::size_t outOfRange = 0;
};

/// Residual bound every direct solve must meet.
inline constexpr double kResidualTolerance = 1e-10;
/// Systems with a smaller reciprocal condition estimate are reported as singular.
inline constexpr double kSingularRcond = 1e-12;

/// Equilibrium of the basic model, z* = (I + L)^{-1} s. I + L is SPD with eigenvalues >= 1.
EquilibriumResult solveBasic(const Graph& g, const OpinionVector& s);

/**
 * Reusable factorization of I - Lambda D^{-1} W.
 *
 * Immutable after construction; apply() is const and may be called from
 * several threads at once. Copies share the factorization.
 */
class ExtendedOperator {
public:
    /// Throws IsolatedNodeError, SingularSystemError, or InvalidArgument for a malformed W.
    ExtendedOperator(const Graph& g, const InfluenceMatrix& w, const SusceptibilityProfile& lambda);

    /// z* = (I - Lambda D^{-1} W)^{-1} (I - Lambda) s.
    EquilibriumResult apply(const OpinionVector& s) const;

    std::size_t dimension() const noexcept { return static_cast<std::size_t>(system_.rows()); }
    double rcond() const noexcept { return rcond_; }
    /// I - Lambda D^{-1} W.
    const SparseMatrix& systemMatrix() const noexcept { return system_; }
    /// Lambda D^{-1} W, the fixed-point iteration matrix.
    const SparseMatrix& influenceOperator() const noexcept { return influence_; }
    /// Diagonal of I - Lambda.
    const Vector& stubbornness() const noexcept { return stubbornness_; }

private:
    SparseMatrix influence_;
    SparseMatrix system_;
    Vector stubbornness_;
    std::shared_ptr<const Eigen::SparseLU<SparseMatrix>> lu_;
    double rcond_ = 0.0;
};

/// One-shot extended solve; same contract as ExtendedOperator(g, w, lambda).apply(s).
EquilibriumResult solveExtended(const Graph& g, const InfluenceMatrix& w,
                                const SusceptibilityProfile& lambda, const OpinionVector& s);

/**
 * Synchronous fixed-point iteration z <- (I - Lambda) s + Lambda D^{-1} W z,
 * started from z = s. Stops once the max-norm change is <= tol.
 *
 * Cross-check only: with lambda_i = 1 and negative weights the iteration
 * matrix may have spectral radius >= 1. Throws NotConvergedError after maxIter
 * sweeps.
 */
EquilibriumResult iterateExtended(const Graph& g, const InfluenceMatrix& w,
                                  const SusceptibilityProfile& lambda, const OpinionVector& s,
                                  double tol, std::size_t maxIter);

} // namespace dissensus
