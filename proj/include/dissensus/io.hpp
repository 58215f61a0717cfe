#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "dissensus/campaign.hpp"
#include "dissensus/centrality.hpp"
#include "dissensus/disruption.hpp"
#include "dissensus/equilibrium.hpp"
#include "dissensus/netgen.hpp"
#include "dissensus/network.hpp"
#include "dissensus/perturbation.hpp"

namespace dissensus::io {

using nlohmann::json;

/// 17 significant digits; strtod reads it back bit-exactly.
std::string formatReal(double value);

/// Maps external node IDs to dense indices in first-seen order.
class NodeIndex {
public:
    node intern(const std::string& label);
    std::optional<node> find(const std::string& label) const;
    const std::vector<std::string>& labels() const noexcept { return labels_; }
    std::size_t size() const noexcept { return labels_.size(); }

private:
    std::unordered_map<std::string, node> index_;
    std::vector<std::string> labels_;
};

struct RawEdge {
    std::string u;
    std::string v;
    std::size_t line = 0;
};

/**
 * Whitespace-separated edge list; '#' starts a comment line. A third column
 * is read as a weight: weights other than 1 and repeated pairs are then
 * rejected, since the graph is simple and unweighted.
 */
std::vector<RawEdge> readEdgeList(std::istream& in);
void writeEdgeList(std::ostream& out, const Graph& g, const std::vector<std::string>& labels);

/// Rows of a two-column CSV whose header must equal `header` (e.g. "node,opinion").
std::vector<std::pair<std::string, double>> readNodeValues(std::istream& in, const std::string& header);
void writeNodeValues(std::ostream& out, const std::string& header, const std::vector<std::string>& labels,
                     const Vector& values);

struct RawSign {
    std::string src;
    std::string dst;
    int sign = 0;
    std::size_t line = 0;
};

/// CSV with header src,dst,sign and sign in {-1, 1}.
std::vector<RawSign> readInfluence(std::istream& in);
/// One row per edge (u < v in index order).
void writeInfluence(std::ostream& out, const Graph& g, const InfluenceMatrix& w,
                    const std::vector<std::string>& labels);

struct NetworkFiles {
    std::filesystem::path edges;
    std::filesystem::path opinions;
    std::optional<std::filesystem::path> susceptibility;
    std::optional<std::filesystem::path> influence;
};

/**
 * Loads a network. Node order follows the opinions file, which must list
 * every node. Without a susceptibility file lambda is degree-proportional;
 * edges missing from the influence file get the sign rule with `epsilon`.
 */
Network loadNetwork(const NetworkFiles& files, double epsilon = 0.0);

/// Standard file names inside a directory.
NetworkFiles networkFilesIn(const std::filesystem::path& dir);

/// Writes edges.txt, opinions.csv, lambda.csv and influence.csv into dir.
void saveNetwork(const Network& net, const std::filesystem::path& dir);

std::string readFile(const std::filesystem::path& path);
void writeFile(const std::filesystem::path& path, const std::string& contents);

// Report CSVs.
void writeDisruptionCsv(std::ostream& out, const std::vector<DisruptionReport>& reports);
void writeSweepCsv(std::ostream& out, const SweepResult& sweep, const std::vector<std::string>& labels);
void writeTraceCsv(std::ostream& out, const CampaignTrace& trace);
void writeCorrelationCsv(std::ostream& out, const std::vector<CorrelationReport>& reports);
/// node,degree,betweenness,eigenvector,normalized_disruption
void writeCentralityCsv(std::ostream& out, const std::vector<CentralityVector>& measures,
                        const SweepResult& sweep, const std::vector<std::string>& labels);
void writeEquilibriumCsv(std::ostream& out, const EquilibriumResult& result, const std::vector<std::string>& labels);

// JSON documents. Field names mirror the struct members.
json toJson(const SbmConfig& cfg);
SbmConfig sbmConfigFromJson(const json& doc);
json toJson(const CampaignConfig& cfg);
CampaignConfig campaignConfigFromJson(const json& doc);
json toJson(const DisruptionReport& report);
json toJson(const EquilibriumResult& result, bool includeVector = false);
json toJson(const PerturbationPlan& plan, const std::vector<std::string>& labels);
json toJson(const CampaignTrace& trace, const CampaignConfig& cfg);
json toJson(const CorrelationReport& report);

} // namespace dissensus::io
