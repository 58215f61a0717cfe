#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "dissensus/equilibrium.hpp"
#include "dissensus/graph.hpp"

namespace dissensus {

/// Which end of [s_u - 1, s_u + 1] the plan picked for alpha.
enum class EndpointChoice {
    LowBound,  ///< alpha = s_u - 1, so s'_u = +1
    HighBound, ///< alpha = s_u + 1, so s'_u = -1
    Tie        ///< equal objectives; resolved as LowBound
};

const char* toString(EndpointChoice choice);

/// Single-node shift s' = s - alpha e_u that maximizes the extended-model equilibrium disruption.
struct PerturbationPlan {
    node u = 0;
    double alpha = 0.0;
    OpinionVector sPrime;
    /// Equilibrium disruption at alpha = s_u - 1.
    double objectiveLow = 0.0;
    /// Equilibrium disruption at alpha = s_u + 1.
    double objectiveHigh = 0.0;
    EndpointChoice chosen = EndpointChoice::Tie;

    double objective() const noexcept;
    double targetOpinion() const { return sPrime[u]; }
};

/// Relative gap under which the two endpoint objectives count as a tie.
inline constexpr double kTieTolerance = 1e-12;

/// Equilibrium disruption reached from innate opinions s.
double equilibriumDisruption(const ExtendedOperator& op, const Graph& g, const OpinionVector& s);

/// Copy of s with s_u replaced by value.
OpinionVector withOpinion(const OpinionVector& s, node u, double value);

PerturbationPlan bestAlpha(const ExtendedOperator& op, const Graph& g, const OpinionVector& s, node u);
PerturbationPlan bestAlpha(const Graph& g, const InfluenceMatrix& w, const SusceptibilityProfile& lambda,
                           const OpinionVector& s, node u);

struct GridCheckResult {
    double maxObjective = 0.0;
    double argmaxAlpha = 0.0;
    std::vector<double> alphas;
    std::vector<double> objectives;
};

/// Objective on a uniform alpha grid over [s_u - 1, s_u + 1] (endpoints included). Needs gridPoints >= 3.
GridCheckResult gridCheck(const ExtendedOperator& op, const Graph& g, const OpinionVector& s, node u,
                          std::size_t gridPoints);
GridCheckResult gridCheck(const Graph& g, const InfluenceMatrix& w, const SusceptibilityProfile& lambda,
                          const OpinionVector& s, node u, std::size_t gridPoints);

struct SweepResult {
    std::vector<PerturbationPlan> plans;
    /// Best objective per node.
    std::vector<double> induced;
    /// Min-max scaled induced disruption.
    std::vector<double> normalized;
    /// Equilibrium disruption without manipulation.
    double baseline = 0.0;

    /// Node with the largest induced disruption (lowest index on ties).
    node argmax() const;
    double maxInduced() const;
};

/**
 * best_alpha for every node on one shared factorization.
 *
 * threads == 0 picks the hardware concurrency; results are stored by node
 * index so the output does not depend on scheduling.
 */
SweepResult sweepNodes(const ExtendedOperator& op, const Graph& g, const OpinionVector& s, unsigned threads = 0);
SweepResult sweepNodes(const Graph& g, const InfluenceMatrix& w, const SusceptibilityProfile& lambda,
                       const OpinionVector& s, unsigned threads = 0);

/// Ranges below this fraction of the largest magnitude are treated as zero.
inline constexpr double kFlatRangeTolerance = 1e-12;

/// Min-max scaling to [0, 1]; a constant input maps to all zeros.
std::vector<double> minMaxNormalize(std::span<const double> values);

} // namespace dissensus
