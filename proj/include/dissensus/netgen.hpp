#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "dissensus/graph.hpp"
#include "dissensus/network.hpp"

namespace dissensus {

using Rng = std::mt19937_64;

struct BetaParams {
    double alpha = 1.0;
    double beta = 1.0;

    friend bool operator==(const BetaParams&, const BetaParams&) = default;
};

/// Two-block (or k-block) stochastic block model with Beta-distributed opinions and susceptibilities.
struct SbmConfig {
    std::vector<std::size_t> community_sizes{50, 50};
    double p_intra = 0.4;
    double p_inter = 0.01;
    /// One Beta per community; opinions are 2b - 1 for b ~ Beta.
    std::vector<BetaParams> opinion_beta{{1.0, 15.0}, {15.0, 1.0}};
    BetaParams susceptibility_beta{1.0, 1.0};
    double epsilon = 0.0;
    std::uint64_t seed = 0;

    /// Throws InvalidArgument on probabilities outside [0,1], non-positive Beta parameters,
    /// empty communities or a community/opinion_beta count mismatch.
    void validate() const;
    std::size_t numberOfNodes() const;
    /// Community index of every node; communities occupy consecutive index ranges.
    std::vector<std::size_t> communityOf() const;

    friend bool operator==(const SbmConfig&, const SbmConfig&) = default;
};

enum class SusceptibilityMode { Beta, Degree };

struct SyntheticInstance {
    SbmConfig config;
    std::vector<std::size_t> community;
    Network network;
};

/// Draws b ~ Beta(alpha, beta) as X / (X + Y) with X ~ Gamma(alpha), Y ~ Gamma(beta).
double sampleBeta(Rng& rng, const BetaParams& params);

/// One uniform draw per node pair, pairs visited as (0,1), (0,2), ..., (n-2,n-1).
Graph genSbm(const SbmConfig& cfg, Rng& rng);
/// One Beta draw per node, in index order.
OpinionVector sampleOpinions(const SbmConfig& cfg, Rng& rng);
SusceptibilityProfile sampleSusceptibility(const SbmConfig& cfg, Rng& rng);

/**
 * Full seeded instance. A single stream seeded with cfg.seed is consumed in
 * the order edges, opinions, susceptibilities; the influence matrix uses no
 * randomness.
 */
SyntheticInstance generateInstance(const SbmConfig& cfg, SusceptibilityMode mode = SusceptibilityMode::Beta);

// The cfg-only overloads return the corresponding piece of generateInstance(cfg).
Graph genSbm(const SbmConfig& cfg);
OpinionVector sampleOpinions(const SbmConfig& cfg);
SusceptibilityProfile sampleSusceptibility(const SbmConfig& cfg);

/**
 * W_ij = -1 on an edge whose endpoints have strictly opposite signs
 * (s_i * s_j < 0) and |s_i - s_j| >= epsilon; +1 on every other edge.
 */
InfluenceMatrix deriveInfluence(const Graph& g, const OpinionVector& s, double epsilon);

/// lambda_i = d_i / max_j d_j; all zeros for an edgeless graph.
SusceptibilityProfile degreeSusceptibility(const Graph& g);

/**
 * Small polarized two-community network with degree-proportional
 * susceptibility, standing in for the real retweet datasets in tests.
 */
SyntheticInstance realNetworkStandIn(std::vector<std::size_t> sizes, std::uint64_t seed);

} // namespace dissensus
