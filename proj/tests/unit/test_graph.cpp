#include <random>

#include <gtest/gtest.h>

#include "dissensus/errors.hpp"
#include "dissensus/graph.hpp"
#include "dissensus/network.hpp"
#include "oracles.hpp"

using namespace dissensus;

namespace {

Eigen::MatrixXd dense(const SparseMatrix& m) {
    return Eigen::MatrixXd(m);
}

} // namespace

TEST(Graph, SingleEdge) {
    const std::vector<Edge> edges{{0, 1}};
    const Graph g = Graph::build(2, edges);
    EXPECT_EQ(g.numberOfEdges(), 1u);
    EXPECT_EQ(g.degrees(), (std::vector<std::size_t>{1, 1}));
}

TEST(Graph, ConflictingHubsDegrees) {
    const Network net = conflictingHubsExample();
    EXPECT_EQ(net.graph.degrees(), (std::vector<std::size_t>{1, 2, 2, 3, 2, 2}));
    EXPECT_EQ(net.graph.maxDegree(), 3u);
}

TEST(Graph, MirroredPairCollapses) {
    const std::vector<Edge> edges{{0, 1}, {1, 0}};
    const Graph g = Graph::build(3, edges);
    EXPECT_EQ(g.numberOfEdges(), 1u);
    EXPECT_EQ(g.degrees(), (std::vector<std::size_t>{1, 1, 0}));
    EXPECT_EQ(g.edges().front(), (Edge{0, 1}));
}

TEST(Graph, RejectsSelfLoopAndOutOfRange) {
    const std::vector<Edge> loop{{1, 1}};
    EXPECT_THROW(Graph::build(2, loop), InvalidArgument);
    const std::vector<Edge> far{{0, 2}};
    EXPECT_THROW(Graph::build(2, far), InvalidArgument);
}

TEST(Graph, EdgeLookup) {
    const Network net = conflictingHubsExample();
    EXPECT_TRUE(net.graph.hasEdge(3, 2));
    EXPECT_FALSE(net.graph.hasEdge(0, 5));
    EXPECT_EQ(net.graph.edgeIndex(5, 4), 5u);
    EXPECT_EQ(net.graph.edgeIndex(0, 5), net.graph.numberOfEdges());
}

TEST(Laplacian, PathOnTwoNodes) {
    const std::vector<Edge> edges{{0, 1}};
    Eigen::MatrixXd expected(2, 2);
    expected << 1, -1, -1, 1;
    EXPECT_EQ(dense(laplacian(Graph::build(2, edges))), expected);
}

TEST(Laplacian, EmptyGraphIsZero) {
    const Graph g = Graph::build(3, {});
    EXPECT_EQ(dense(laplacian(g)), Eigen::MatrixXd::Zero(3, 3));
}

TEST(Laplacian, Triangle) {
    const std::vector<Edge> edges{{0, 1}, {1, 2}, {0, 2}};
    const Eigen::MatrixXd l = dense(laplacian(Graph::build(3, edges)));
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            EXPECT_EQ(l(i, j), i == j ? 2.0 : -1.0);
        }
    }
}

TEST(Laplacian, RowSumsZeroAndQuadraticForm) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + trial % 40;
        const auto edges = oracle::randomGraph(n, 0.2, rng);
        const Graph g = Graph::build(n, edges);
        const SparseMatrix l = laplacian(g);
        const Vector ones = Vector::Ones(static_cast<Eigen::Index>(n));
        EXPECT_EQ((l * ones).cwiseAbs().maxCoeff(), 0.0);

        // (I + L) 1 = 1
        EXPECT_EQ(Vector(l * ones + ones), ones);

        const auto xs = oracle::uniformOpinions(n, rng);
        const Vector x = Eigen::Map<const Vector>(xs.data(), static_cast<Eigen::Index>(n));
        const double quad = x.dot(l * x);
        const double sum = oracle::disagreement(edges, x);
        EXPECT_NEAR(quad, sum, 1e-9 * std::max(1.0, sum));
        EXPECT_EQ(dense(laplacian(g)), oracle::denseLaplacian(n, g.edges()));
    }
}

TEST(Adjacency, SymmetricZeroOne) {
    const Network net = conflictingHubsExample();
    const Eigen::MatrixXd a = dense(adjacency(net.graph));
    EXPECT_EQ(a, a.transpose());
    EXPECT_EQ(a.sum(), 12.0);
    EXPECT_EQ(a, oracle::denseAdjacency(6, net.graph.edges()));
}

TEST(OpinionVector, RangeChecked) {
    EXPECT_NO_THROW(OpinionVector(std::vector<double>{-1.0, 1.0, 0.0}));
    EXPECT_THROW(OpinionVector(std::vector<double>{1.0000001}), InvalidArgument);
    EXPECT_THROW(OpinionVector(std::vector<double>{std::nan("")}), InvalidArgument);
    EXPECT_THROW(SusceptibilityProfile(std::vector<double>{-0.1}), InvalidArgument);
    EXPECT_NO_THROW(SusceptibilityProfile(std::vector<double>{0.0, 1.0}));
}

TEST(OpinionVector, OutOfRangeCount) {
    Vector z(3);
    z << 0.5, 1.2, -1.5;
    EXPECT_EQ(countOutOfRange(z), 2u);
}

TEST(ValidateInfluence, ConflictingHubsOk) {
    const Network net = conflictingHubsExample();
    const auto report = validateInfluence(net.graph, net.influence);
    EXPECT_TRUE(report.ok()) << report.describe();
    EXPECT_EQ(net.influence.at(2, 3), -1);
    EXPECT_EQ(net.influence.at(3, 2), -1);
    EXPECT_EQ(net.influence.at(0, 5), 0);
}

namespace {

bool hasKind(const InfluenceReport& r, InfluenceViolation::Kind kind) {
    for (const auto& v : r.violations) {
        if (v.kind == kind) {
            return true;
        }
    }
    return false;
}

} // namespace

TEST(ValidateInfluence, BadValue) {
    const std::vector<Edge> edges{{0, 1}};
    const Graph g = Graph::build(2, edges);
    const InfluenceMatrix w(2, {{0, 1, 2}, {1, 0, 2}});
    const auto report = validateInfluence(g, w);
    EXPECT_FALSE(report.ok());
    EXPECT_TRUE(hasKind(report, InfluenceViolation::Kind::BadValue));
}

TEST(ValidateInfluence, OffSupport) {
    const std::vector<Edge> edges{{0, 1}};
    const Graph g = Graph::build(3, edges);
    const InfluenceMatrix w(3, {{0, 1, 1}, {1, 0, 1}, {0, 2, 1}, {2, 0, 1}});
    EXPECT_TRUE(hasKind(validateInfluence(g, w), InfluenceViolation::Kind::OffSupport));
}

TEST(ValidateInfluence, AsymmetryAndMissing) {
    const std::vector<Edge> edges{{0, 1}, {1, 2}};
    const Graph g = Graph::build(3, edges);
    const InfluenceMatrix w(3, {{0, 1, 1}, {1, 0, -1}, {1, 2, 1}});
    const auto report = validateInfluence(g, w);
    EXPECT_TRUE(hasKind(report, InfluenceViolation::Kind::Asymmetric));
    EXPECT_TRUE(hasKind(report, InfluenceViolation::Kind::MissingOnEdge));
    EXPECT_FALSE(report.describe().empty());
}

TEST(ValidateInfluence, DiagonalFlagged) {
    const std::vector<Edge> edges{{0, 1}};
    const Graph g = Graph::build(2, edges);
    const InfluenceMatrix w(2, {{0, 0, 1}, {0, 1, 1}, {1, 0, 1}});
    EXPECT_TRUE(hasKind(validateInfluence(g, w), InfluenceViolation::Kind::Diagonal));
}

TEST(InfluenceMatrix, EdgeSignsRoundTrip) {
    const Network net = conflictingHubsExample();
    const auto signs = net.influence.edgeSigns(net.graph);
    EXPECT_EQ(signs, (std::vector<int>{1, 1, -1, 1, 1, 1}));
    const auto rebuilt = InfluenceMatrix::fromEdgeSigns(net.graph, signs);
    EXPECT_EQ(rebuilt.edgeSigns(net.graph), signs);
}
