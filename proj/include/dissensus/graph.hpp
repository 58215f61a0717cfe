#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace dissensus {

using node = std::size_t;
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

/// Unordered node pair; always stored with u < v.
struct Edge {
    node u;
    node v;

    friend bool operator==(const Edge&, const Edge&) = default;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

/**
 * Undirected simple graph on nodes 0..n-1.
 *
 * Edges are deduplicated and kept sorted; adjacency lists are sorted too, so
 * every traversal is deterministic. Immutable once built.
 */
class Graph {
public:
    Graph() = default;

    /**
     * Builds a graph from an edge list. Mirrored and repeated pairs collapse to
     * one edge.
     *
     * Throws InvalidArgument on a self-loop or an endpoint outside [0, n).
     */
    static Graph build(std::size_t n, std::span<const Edge> edges);

    std::size_t numberOfNodes() const noexcept { return adjacency_.size(); }
    std::size_t numberOfEdges() const noexcept { return edges_.size(); }

    const std::vector<Edge>& edges() const noexcept { return edges_; }
    std::span<const node> neighbors(node u) const { return adjacency_.at(u); }
    std::size_t degree(node u) const { return adjacency_.at(u).size(); }
    std::vector<std::size_t> degrees() const;
    std::size_t maxDegree() const noexcept;

    bool hasEdge(node u, node v) const;
    /// Position of {u, v} in edges(), or numberOfEdges() when absent.
    std::size_t edgeIndex(node u, node v) const;

private:
    std::vector<Edge> edges_;
    std::vector<std::vector<node>> adjacency_;
};

/// Combinatorial Laplacian D - A.
SparseMatrix laplacian(const Graph& g);

/// 0/1 adjacency matrix A.
SparseMatrix adjacency(const Graph& g);

/// Innate (or perturbed) opinions, every entry in [-1, 1].
class OpinionVector {
public:
    OpinionVector() = default;
    /// Throws InvalidArgument when an entry is outside [-1, 1] or not finite.
    explicit OpinionVector(Vector values);
    explicit OpinionVector(std::span<const double> values);

    const Vector& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(values_.size()); }
    double operator[](node i) const { return values_(static_cast<Eigen::Index>(i)); }

private:
    Vector values_;
};

/// Per-node susceptibility lambda_i in [0, 1]; 0 is fully stubborn.
class SusceptibilityProfile {
public:
    SusceptibilityProfile() = default;
    explicit SusceptibilityProfile(Vector values);
    explicit SusceptibilityProfile(std::span<const double> values);

    const Vector& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(values_.size()); }
    double operator[](node i) const { return values_(static_cast<Eigen::Index>(i)); }

private:
    Vector values_;
};

/// Number of entries of x outside [-1, 1]; equilibria are not clamped, this is a diagnostic only.
std::size_t countOutOfRange(const Vector& x);

struct InfluenceEntry {
    node row;
    node col;
    int value;
};

/**
 * Signed influence weights W. Stored as a sorted list of explicit entries so
 * that malformed matrices can still be represented and reported on.
 */
class InfluenceMatrix {
public:
    InfluenceMatrix() = default;
    InfluenceMatrix(std::size_t n, std::vector<InfluenceEntry> entries);

    /// Symmetric W with W_uv = W_vu = signs[k] for the k-th edge of g.
    static InfluenceMatrix fromEdgeSigns(const Graph& g, std::span<const int> signs);

    std::size_t dimension() const noexcept { return n_; }
    const std::vector<InfluenceEntry>& entries() const noexcept { return entries_; }
    /// 0 when no entry is stored.
    int at(node i, node j) const;
    /// Sign per edge of g, in g.edges() order (reads W_uv with u < v).
    std::vector<int> edgeSigns(const Graph& g) const;
    std::size_t countNegative() const;

private:
    std::size_t n_ = 0;
    std::vector<InfluenceEntry> entries_;
};

struct InfluenceViolation {
    enum class Kind { BadValue, OffSupport, MissingOnEdge, Asymmetric, Diagonal, Duplicate, OutOfRange };
    Kind kind;
    node row;
    node col;
    int value;
};

struct InfluenceReport {
    std::vector<InfluenceViolation> violations;
    bool ok() const noexcept { return violations.empty(); }
    std::string describe() const;
};

/// Checks that W is symmetric, valued in {-1, 0, 1} and nonzero exactly on the edges of g.
InfluenceReport validateInfluence(const Graph& g, const InfluenceMatrix& w);

const char* toString(InfluenceViolation::Kind kind);

} // namespace dissensus
