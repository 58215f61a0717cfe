#include "dissensus/network.hpp"

namespace dissensus {

std::vector<std::string> defaultLabels(std::size_t n) {
    std::vector<std::string> labels;
    labels.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        labels.push_back(std::to_string(i));
    }
    return labels;
}

Network conflictingHubsExample() {
    const std::vector<Edge> edges{{0, 1}, {1, 2}, {2, 3}, {3, 4}, {3, 5}, {4, 5}};
    Network net;
    net.graph = Graph::build(6, edges);
    // Signs follow net.graph.edges(), which is sorted the same way as `edges`.
    const std::vector<int> signs{1, 1, -1, 1, 1, 1};
    net.influence = InfluenceMatrix::fromEdgeSigns(net.graph, signs);
    const std::vector<double> lambda{0.9, 0.0, 1.0, 1.0, 0.9, 0.0};
    const std::vector<double> s{0.4, 0.9, 0.0, 0.0, -0.9, -0.9};
    net.susceptibility = SusceptibilityProfile(std::span<const double>(lambda));
    net.opinions = OpinionVector(std::span<const double>(s));
    net.labels = defaultLabels(6);
    return net;
}

} // namespace dissensus
