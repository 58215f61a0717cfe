#include <random>

#include <gtest/gtest.h>

#include "dissensus/disruption.hpp"
#include "dissensus/equilibrium.hpp"
#include "dissensus/errors.hpp"
#include "dissensus/netgen.hpp"
#include "dissensus/network.hpp"
#include "oracles.hpp"

using namespace dissensus;

namespace {

Vector vec(std::initializer_list<double> values) {
    Vector v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) {
        v(i++) = x;
    }
    return v;
}

Graph pathTwo() {
    const std::vector<Edge> edges{{0, 1}};
    return Graph::build(2, edges);
}

Graph triangle() {
    const std::vector<Edge> edges{{0, 1}, {1, 2}, {0, 2}};
    return Graph::build(3, edges);
}

} // namespace

TEST(Polarization, Examples) {
    EXPECT_DOUBLE_EQ(polarization(vec({1, -1})), 2.0);
    EXPECT_EQ(polarization(vec({0.3, 0.3, 0.3, 0.3})), 0.0);
    EXPECT_DOUBLE_EQ(polarization(vec({1, 0, -1})), 2.0);
    EXPECT_THROW(polarization(Vector()), InvalidArgument);
}

TEST(Disagreement, Examples) {
    EXPECT_DOUBLE_EQ(disagreement(pathTwo(), vec({1, -1})), 4.0);
    EXPECT_EQ(disagreement(triangle(), vec({1, 1, 1})), 0.0);
    EXPECT_THROW(disagreement(pathTwo(), vec({1, 0, 0})), InvalidArgument);
}

TEST(Disruption, ConflictingHubs) {
    const Network net = conflictingHubsExample();
    const auto innate = disruption(net.graph, net.opinions.values(), StateTag::Innate);
    EXPECT_NEAR(innate.disruption, 5.23, 0.01);
    EXPECT_NEAR(innate.polarization + innate.disagreement, innate.disruption, 1e-12);

    const auto z = solveExtended(net.graph, net.influence, net.susceptibility, net.opinions).z;
    const auto eq = disruption(net.graph, z, StateTag::ExtendedEq);
    EXPECT_NEAR(eq.disruption, 8.02, 0.01);
    EXPECT_EQ(eq.tag, StateTag::ExtendedEq);

    const auto ref = oracle::conflictingHubs();
    EXPECT_NEAR(innate.disruption, oracle::disruption(ref.edges, net.opinions.values()), 1e-12);
}

TEST(Disruption, PathTwoBasicEquilibrium) {
    const auto r = disruption(pathTwo(), vec({1.0 / 3.0, -1.0 / 3.0}));
    EXPECT_NEAR(r.polarization, 2.0 / 9.0, 1e-15);
    EXPECT_NEAR(r.disagreement, 4.0 / 9.0, 1e-15);
    EXPECT_NEAR(r.disruption, 2.0 / 3.0, 1e-15);
}

TEST(Disruption, SingleNodeIsZero) {
    const Graph g = Graph::build(1, {});
    const auto r = disruption(g, vec({0.4}));
    EXPECT_EQ(r.disruption, 0.0);
    EXPECT_EQ(disruptionMatrix(g)(0, 0), 0.0);
}

TEST(Disruption, StateTagNames) {
    EXPECT_STREQ(toString(StateTag::Innate), "innate");
    EXPECT_STREQ(toString(StateTag::BasicEq), "basic");
    EXPECT_STREQ(toString(StateTag::ExtendedEq), "extended");
    EXPECT_STREQ(toString(StateTag::Manipulated), "manipulated");
}

TEST(Disruption, FormsAgreeShiftAndScale) {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> shift(-3.0, 3.0);
    std::uniform_real_distribution<double> scale(-4.0, 4.0);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 1 + trial % 50;
        const auto edges = oracle::randomGraph(n, 0.2, rng);
        const Graph g = Graph::build(n, edges);
        const auto xs = oracle::uniformOpinions(n, rng);
        const Vector x = Eigen::Map<const Vector>(xs.data(), static_cast<Eigen::Index>(n));
        const double sum = oracle::disruption(g.edges(), x);
        const double quad = disruptionQuadraticForm(g, x);
        const double tol = 1e-9 * std::max(1.0, sum);
        EXPECT_NEAR(quad, sum, tol);
        EXPECT_NEAR(x.dot(disruptionMatrix(g) * x), sum, tol);

        const Vector shifted = (x.array() + shift(rng)).matrix();
        EXPECT_NEAR(disruption(g, shifted).disruption, sum, tol);
        const double c = scale(rng);
        EXPECT_NEAR(disruption(g, c * x).disruption, c * c * sum, 1e-9 * std::max(1.0, c * c * sum));
    }
}

TEST(BasicEquilibriumCertificate, PathTwo) {
    const std::vector<double> s{1, -1};
    const auto cert = verifyTheoremOne(pathTwo(), OpinionVector(std::span<const double>(s)));
    EXPECT_NEAR(cert.innateDisruption, 6.0, 1e-14);
    EXPECT_NEAR(cert.equilibriumDisruption, 2.0 / 3.0, 1e-14);
    EXPECT_NEAR(cert.gap, -16.0 / 3.0, 1e-13);
    EXPECT_LE(cert.maxYEigenvalue, 1e-9);
    ASSERT_EQ(cert.sigmaSpectrum.size(), 2u);
    EXPECT_NEAR(cert.sigmaSpectrum[0], 1.0, 1e-14);
    EXPECT_NEAR(cert.sigmaSpectrum[1], 3.0, 1e-14);
    EXPECT_TRUE(cert.holds());
}

TEST(BasicEquilibriumCertificate, ConstantOpinionsGapZero) {
    std::mt19937_64 rng(43);
    const auto edges = oracle::randomGraph(15, 0.3, rng);
    const auto cert = verifyTheoremOne(Graph::build(15, edges), OpinionVector(Vector::Constant(15, 0.6)));
    EXPECT_NEAR(cert.gap, 0.0, 1e-12);
    EXPECT_TRUE(cert.holds());
}

TEST(BasicEquilibriumCertificate, RandomSbm) {
    SbmConfig cfg;
    cfg.community_sizes = {10, 10};
    cfg.seed = 9;
    const auto inst = generateInstance(cfg);
    const auto cert = verifyTheoremOne(inst.network.graph, inst.network.opinions);
    EXPECT_LE(cert.gap, 0.0);
    EXPECT_LE(cert.maxYEigenvalue, 1e-9);
    for (double sigma : cert.sigmaSpectrum) {
        EXPECT_GE(sigma, 1.0 - 1e-9);
    }
    EXPECT_TRUE(cert.holds());
    EXPECT_TRUE(cert.dense);

    // Y computed from scratch with dense inverses.
    const std::size_t n = inst.network.size();
    const Eigen::MatrixXd lt = Eigen::MatrixXd::Identity(n, n) + oracle::denseLaplacian(n, inst.network.graph.edges());
    const Eigen::MatrixXd x = lt - Eigen::MatrixXd::Constant(n, n, 1.0 / n);
    const Eigen::MatrixXd inv = lt.inverse();
    const Eigen::MatrixXd y = inv * x * inv - x;
    const double maxEig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(y).eigenvalues().maxCoeff();
    EXPECT_NEAR(cert.maxYEigenvalue, maxEig, 1e-9);
}

TEST(BasicEquilibriumCertificate, PowerIterationPathAgreesWithDense) {
    std::mt19937_64 rng(47);
    const auto edges = oracle::randomGraph(40, 0.15, rng);
    const Graph g = Graph::build(40, edges);
    const auto s = oracle::uniformOpinions(40, rng);
    const OpinionVector sv{std::span<const double>(s)};
    const auto dense = verifyTheoremOne(g, sv);
    const auto sparse = verifyTheoremOne(g, sv, 10);
    EXPECT_FALSE(sparse.dense);
    EXPECT_TRUE(sparse.sigmaSpectrum.empty());
    EXPECT_NEAR(sparse.gap, dense.gap, 1e-12);
    EXPECT_LE(sparse.maxYEigenvalue, 1e-6);
    EXPECT_TRUE(sparse.holds());
}

TEST(XMatrix, PathTwo) {
    const Eigen::MatrixXd x = disruptionMatrix(pathTwo());
    Eigen::MatrixXd expected(2, 2);
    expected << 1.5, -1.5, -1.5, 1.5;
    EXPECT_LE((x - expected).cwiseAbs().maxCoeff(), 1e-15);
    const auto check = checkXMatrix(pathTwo());
    EXPECT_NEAR(check.minEigenvalue, 0.0, 1e-12);
    const auto eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(x).eigenvalues();
    EXPECT_NEAR(eig(1), 3.0, 1e-12);
}

TEST(XMatrix, EmptyGraphIsProjection) {
    const Graph g = Graph::build(5, {});
    const auto eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(disruptionMatrix(g)).eigenvalues();
    EXPECT_NEAR(eig(0), 0.0, 1e-12);
    for (int i = 1; i < 5; ++i) {
        EXPECT_NEAR(eig(i), 1.0, 1e-12);
    }
    EXPECT_LE(checkXMatrix(g).nullResidual, 1e-10);
}

TEST(XMatrix, ConflictingHubsPsd) {
    const auto check = checkXMatrix(conflictingHubsExample().graph);
    EXPECT_GE(check.minEigenvalue, -1e-9);
    EXPECT_LE(check.nullResidual, 1e-10);
    EXPECT_TRUE(check.dense);
}

TEST(XMatrix, SparsePathMatchesDense) {
    std::mt19937_64 rng(53);
    const auto edges = oracle::randomGraph(30, 0.2, rng);
    const Graph g = Graph::build(30, edges);
    const auto sparse = checkXMatrix(g, 5);
    EXPECT_FALSE(sparse.dense);
    EXPECT_GE(sparse.minEigenvalue, -1e-6);
    EXPECT_LE(sparse.nullResidual, 1e-10);
}
