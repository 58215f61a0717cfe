#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dissensus/graph.hpp"
#include "dissensus/perturbation.hpp"

namespace dissensus {

enum class CentralityMeasure { Degree, Betweenness, Eigenvector };

const char* toString(CentralityMeasure measure);
/// Parses "degree", "betweenness" or "eigenvector".
CentralityMeasure parseCentralityMeasure(const std::string& name);

struct CentralityVector {
    CentralityMeasure measure = CentralityMeasure::Degree;
    std::vector<double> values;
    /// Dominant adjacency eigenvalue (eigenvector centrality only).
    double eigenvalue = 0.0;
    std::size_t iterations = 0;
};

CentralityVector degreeCentrality(const Graph& g);

/**
 * Exact shortest-path betweenness, each unordered pair counted once, no
 * normalization. Sources are processed in fixed chunks that are summed in
 * order, so the result does not depend on the thread count.
 */
CentralityVector betweennessCentrality(const Graph& g, unsigned threads = 0);

/**
 * Dominant eigenvector of A, scaled to max entry 1.
 *
 * Power iteration runs on A + I from the all-ones vector: same eigenvectors,
 * but bipartite graphs no longer oscillate between +rho and -rho. On a
 * disconnected graph the mass ends up on the component with the largest
 * spectral radius.
 *
 * Throws InvalidArgument on a graph without edges and NotConvergedError when
 * the max-norm change stays above tol after maxIter steps.
 */
CentralityVector eigenvectorCentrality(const Graph& g, double tol = 1e-10, std::size_t maxIter = 10000);

CentralityVector centrality(const Graph& g, CentralityMeasure measure);

/// Pearson correlation. Throws InvalidArgument on size mismatch or fewer than 2 points,
/// ConstantInputError when either series has zero variance.
double pearson(std::span<const double> x, std::span<const double> y);

struct CorrelationReport {
    double rho = 0.0;
    CentralityMeasure measure = CentralityMeasure::Degree;
    std::size_t nPoints = 0;
};

/// Pearson rho between a centrality and the normalized induced disruption of a sweep.
CorrelationReport correlateDisruption(const Graph& g, const SweepResult& sweep, CentralityMeasure measure);
CorrelationReport correlateDisruption(const CentralityVector& centrality, const SweepResult& sweep);

} // namespace dissensus
