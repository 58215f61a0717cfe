#include "dissensus/graph.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <tuple>

#include "dissensus/errors.hpp"

namespace dissensus {

Graph Graph::build(std::size_t n, std::span<const Edge> edges) {
    Graph g;
    g.edges_.reserve(edges.size());
    for (const auto& e : edges) {
        if (e.u >= n || e.v >= n) {
            throw InvalidArgument("edge (" + std::to_string(e.u) + ", " + std::to_string(e.v)
                                  + ") has an endpoint outside [0, " + std::to_string(n) + ")");
        }
        if (e.u == e.v) {
            throw InvalidArgument("self-loop on node " + std::to_string(e.u));
        }
        g.edges_.push_back({std::min(e.u, e.v), std::max(e.u, e.v)});
    }
    std::sort(g.edges_.begin(), g.edges_.end());
    g.edges_.erase(std::unique(g.edges_.begin(), g.edges_.end()), g.edges_.end());

    g.adjacency_.assign(n, {});
    for (const auto& e : g.edges_) {
        g.adjacency_[e.u].push_back(e.v);
        g.adjacency_[e.v].push_back(e.u);
    }
    for (auto& nbrs : g.adjacency_) {
        std::sort(nbrs.begin(), nbrs.end());
    }
    return g;
}

std::vector<std::size_t> Graph::degrees() const {
    std::vector<std::size_t> d(adjacency_.size());
    for (std::size_t i = 0; i < adjacency_.size(); ++i) {
        d[i] = adjacency_[i].size();
    }
    return d;
}

std::size_t Graph::maxDegree() const noexcept {
    std::size_t best = 0;
    for (const auto& nbrs : adjacency_) {
        best = std::max(best, nbrs.size());
    }
    return best;
}

bool Graph::hasEdge(node u, node v) const {
    if (u >= adjacency_.size() || v >= adjacency_.size()) {
        return false;
    }
    const auto& nbrs = adjacency_[u];
    return std::binary_search(nbrs.begin(), nbrs.end(), v);
}

std::size_t Graph::edgeIndex(node u, node v) const {
    const Edge key{std::min(u, v), std::max(u, v)};
    auto it = std::lower_bound(edges_.begin(), edges_.end(), key);
    if (it == edges_.end() || *it != key) {
        return edges_.size();
    }
    return static_cast<std::size_t>(it - edges_.begin());
}

SparseMatrix laplacian(const Graph& g) {
    const auto n = static_cast<Eigen::Index>(g.numberOfNodes());
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(g.numberOfNodes() + 2 * g.numberOfEdges());
    for (node i = 0; i < g.numberOfNodes(); ++i) {
        if (g.degree(i) > 0) {
            triplets.emplace_back(i, i, static_cast<double>(g.degree(i)));
        }
    }
    for (const auto& e : g.edges()) {
        triplets.emplace_back(e.u, e.v, -1.0);
        triplets.emplace_back(e.v, e.u, -1.0);
    }
    SparseMatrix L(n, n);
    L.setFromTriplets(triplets.begin(), triplets.end());
    return L;
}

SparseMatrix adjacency(const Graph& g) {
    const auto n = static_cast<Eigen::Index>(g.numberOfNodes());
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(2 * g.numberOfEdges());
    for (const auto& e : g.edges()) {
        triplets.emplace_back(e.u, e.v, 1.0);
        triplets.emplace_back(e.v, e.u, 1.0);
    }
    SparseMatrix A(n, n);
    A.setFromTriplets(triplets.begin(), triplets.end());
    return A;
}

namespace {

Vector toVector(std::span<const double> values) {
    Vector v(static_cast<Eigen::Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) {
        v(static_cast<Eigen::Index>(i)) = values[i];
    }
    return v;
}

void checkRange(const Vector& v, double lo, double hi, const char* what) {
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v(i)) || v(i) < lo || v(i) > hi) {
            std::ostringstream msg;
            msg << what << " entry " << i << " = " << v(i) << " outside [" << lo << ", " << hi << "]";
            throw InvalidArgument(msg.str());
        }
    }
}

} // namespace

OpinionVector::OpinionVector(Vector values) : values_(std::move(values)) {
    checkRange(values_, -1.0, 1.0, "opinion");
}

OpinionVector::OpinionVector(std::span<const double> values) : OpinionVector(toVector(values)) {}

SusceptibilityProfile::SusceptibilityProfile(Vector values) : values_(std::move(values)) {
    checkRange(values_, 0.0, 1.0, "susceptibility");
}

SusceptibilityProfile::SusceptibilityProfile(std::span<const double> values)
    : SusceptibilityProfile(toVector(values)) {}

std::size_t countOutOfRange(const Vector& x) {
    std::size_t count = 0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        if (!(x(i) >= -1.0 && x(i) <= 1.0)) {
            ++count;
        }
    }
    return count;
}

InfluenceMatrix::InfluenceMatrix(std::size_t n, std::vector<InfluenceEntry> entries)
    : n_(n), entries_(std::move(entries)) {
    std::stable_sort(entries_.begin(), entries_.end(), [](const auto& a, const auto& b) {
        return std::tie(a.row, a.col) < std::tie(b.row, b.col);
    });
}

InfluenceMatrix InfluenceMatrix::fromEdgeSigns(const Graph& g, std::span<const int> signs) {
    if (signs.size() != g.numberOfEdges()) {
        throw InvalidArgument("expected one sign per edge");
    }
    std::vector<InfluenceEntry> entries;
    entries.reserve(2 * signs.size());
    for (std::size_t k = 0; k < signs.size(); ++k) {
        const auto& e = g.edges()[k];
        entries.push_back({e.u, e.v, signs[k]});
        entries.push_back({e.v, e.u, signs[k]});
    }
    return InfluenceMatrix(g.numberOfNodes(), std::move(entries));
}

int InfluenceMatrix::at(node i, node j) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), std::pair{i, j},
                               [](const InfluenceEntry& e, const std::pair<node, node>& key) {
                                   return std::tie(e.row, e.col) < std::tie(key.first, key.second);
                               });
    if (it == entries_.end() || it->row != i || it->col != j) {
        return 0;
    }
    return it->value;
}

std::vector<int> InfluenceMatrix::edgeSigns(const Graph& g) const {
    std::vector<int> signs;
    signs.reserve(g.numberOfEdges());
    for (const auto& e : g.edges()) {
        signs.push_back(at(e.u, e.v));
    }
    return signs;
}

std::size_t InfluenceMatrix::countNegative() const {
    return static_cast<std::size_t>(
        std::count_if(entries_.begin(), entries_.end(), [](const auto& e) { return e.value < 0; }));
}

const char* toString(InfluenceViolation::Kind kind) {
    switch (kind) {
    case InfluenceViolation::Kind::BadValue: return "bad-value";
    case InfluenceViolation::Kind::OffSupport: return "off-support";
    case InfluenceViolation::Kind::MissingOnEdge: return "missing-on-edge";
    case InfluenceViolation::Kind::Asymmetric: return "asymmetric";
    case InfluenceViolation::Kind::Diagonal: return "diagonal";
    case InfluenceViolation::Kind::Duplicate: return "duplicate";
    case InfluenceViolation::Kind::OutOfRange: return "out-of-range";
    }
    return "unknown";
}

std::string InfluenceReport::describe() const {
    if (ok()) {
        return "ok";
    }
    std::ostringstream out;
    for (std::size_t i = 0; i < violations.size(); ++i) {
        const auto& v = violations[i];
        if (i > 0) {
            out << "; ";
        }
        out << toString(v.kind) << " at (" << v.row << ", " << v.col << ") value " << v.value;
    }
    return out.str();
}

InfluenceReport validateInfluence(const Graph& g, const InfluenceMatrix& w) {
    using Kind = InfluenceViolation::Kind;
    InfluenceReport report;
    const auto& entries = w.entries();
    const std::size_t n = g.numberOfNodes();

    if (w.dimension() != n) {
        report.violations.push_back({Kind::OutOfRange, w.dimension(), n, 0});
    }
    for (std::size_t k = 0; k < entries.size(); ++k) {
        const auto& e = entries[k];
        if (k > 0 && entries[k - 1].row == e.row && entries[k - 1].col == e.col) {
            report.violations.push_back({Kind::Duplicate, e.row, e.col, e.value});
            continue;
        }
        if (e.row >= n || e.col >= n) {
            report.violations.push_back({Kind::OutOfRange, e.row, e.col, e.value});
            continue;
        }
        if (e.value < -1 || e.value > 1) {
            report.violations.push_back({Kind::BadValue, e.row, e.col, e.value});
        }
        if (e.value == 0) {
            continue;
        }
        if (e.row == e.col) {
            report.violations.push_back({Kind::Diagonal, e.row, e.col, e.value});
        } else if (!g.hasEdge(e.row, e.col)) {
            report.violations.push_back({Kind::OffSupport, e.row, e.col, e.value});
        }
        if (w.at(e.col, e.row) != e.value) {
            report.violations.push_back({Kind::Asymmetric, e.row, e.col, e.value});
        }
    }
    for (const auto& edge : g.edges()) {
        if (w.at(edge.u, edge.v) == 0) {
            report.violations.push_back({Kind::MissingOnEdge, edge.u, edge.v, 0});
        }
        if (w.at(edge.v, edge.u) == 0) {
            report.violations.push_back({Kind::MissingOnEdge, edge.v, edge.u, 0});
        }
    }
    return report;
}

} // namespace dissensus
