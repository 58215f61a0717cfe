#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "dissensus/graph.hpp"

namespace dissensus {

enum class StateTag { Innate, BasicEq, ExtendedEq, Manipulated };

const char* toString(StateTag tag);

/// Polarization, disagreement and their sum for one opinion state.
struct DisruptionReport {
    double polarization = 0.0;
    double disagreement = 0.0;
    double disruption = 0.0;
    StateTag tag = StateTag::Innate;
};

/// Squared norm of the mean-centred vector. Throws InvalidArgument on an empty vector.
double polarization(const Vector& x);

/// Sum over edges of (x_u - x_v)^2.
double disagreement(const Graph& g, const Vector& x);

/// x^T (I + L - (1/n) 1 1^T) x, evaluated with one sparse product.
double disruptionQuadraticForm(const Graph& g, const Vector& x);

/**
 * Polarization + disagreement, cross-checked against the quadratic form.
 *
 * The reported disruption is the quadratic-form value. Throws SolverError when
 * the two routes disagree by more than 1e-9 * max(1, I).
 */
DisruptionReport disruption(const Graph& g, const Vector& x, StateTag tag = StateTag::Innate);

/// Dense X = I + L - (1/n) 1 1^T.
Eigen::MatrixXd disruptionMatrix(const Graph& g);

/// Dense eigendecompositions are used up to this many nodes, power iteration above.
inline constexpr std::size_t kDenseEigenLimit = 2000;

/**
 * Evidence that the basic model never increases disruption.
 *
 * Y = (I+L)^{-1} X (I+L)^{-1} - X; its largest eigenvalue should be 0 (up to
 * rounding) with eigenvector 1, and every eigenvalue of I + L is >= 1.
 */
struct TheoremOneCertificate {
    double innateDisruption = 0.0;
    double equilibriumDisruption = 0.0;
    /// equilibriumDisruption - innateDisruption.
    double gap = 0.0;
    double maxYEigenvalue = 0.0;
    /// Ascending eigenvalues of I + L; empty when the graph is above the dense limit.
    std::vector<double> sigmaSpectrum;
    bool dense = true;
    /// Non-empty when an eigen-solver failed.
    std::string diagnostic;

    /// Checks gap, max_Y_eigenvalue and sigma invariants at the 1e-9 level.
    bool holds() const;
};

TheoremOneCertificate verifyTheoremOne(const Graph& g, const OpinionVector& s,
                                       std::size_t denseLimit = kDenseEigenLimit);

struct XMatrixCheck {
    double minEigenvalue = 0.0;
    /// ||X 1||_inf.
    double nullResidual = 0.0;
    bool dense = true;
};

/// Smallest eigenvalue of X (should be 0) and the residual of X 1 = 0.
XMatrixCheck checkXMatrix(const Graph& g, std::size_t denseLimit = kDenseEigenLimit);

} // namespace dissensus
