#pragma once

#include <string>
#include <vector>

#include "dissensus/graph.hpp"

namespace dissensus {

/// Everything the extended model needs for one social network.
struct Network {
    Graph graph;
    OpinionVector opinions;
    SusceptibilityProfile susceptibility;
    InfluenceMatrix influence;
    /// External node IDs; labels[i] names node i. Defaults to "0".."n-1".
    std::vector<std::string> labels;

    std::size_t size() const noexcept { return graph.numberOfNodes(); }
};

/// "0", "1", ..., "n-1".
std::vector<std::string> defaultLabels(std::size_t n);

/**
 * Six-node network with two homophilic groups joined by a pair of conflicting
 * hubs (edge 2-3 is repulsive). Its extended equilibrium is
 * [0.85, 0.9, 0.9, -0.9, -0.9, -0.9].
 */
Network conflictingHubsExample();

} // namespace dissensus
