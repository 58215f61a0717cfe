#include <chrono>
#include <cstdio>
#include <random>
#include <thread>

#include <gtest/gtest.h>

#include "dissensus/equilibrium.hpp"
#include "dissensus/errors.hpp"
#include "dissensus/netgen.hpp"
#include "dissensus/network.hpp"
#include "oracles.hpp"

using namespace dissensus;

namespace {

Graph pathTwo() {
    const std::vector<Edge> edges{{0, 1}};
    return Graph::build(2, edges);
}

OpinionVector opinions(std::vector<double> v) {
    return OpinionVector(std::span<const double>(v));
}

SusceptibilityProfile lambdas(std::vector<double> v) {
    return SusceptibilityProfile(std::span<const double>(v));
}

double basicResidual(const Graph& g, const OpinionVector& s, const Vector& z) {
    return (z + laplacian(g) * z - s.values()).cwiseAbs().maxCoeff();
}

} // namespace

TEST(SolveBasic, PathTwo) {
    const auto r = solveBasic(pathTwo(), opinions({1, -1}));
    EXPECT_NEAR(r.z(0), 1.0 / 3.0, 1e-14);
    EXPECT_NEAR(r.z(1), -1.0 / 3.0, 1e-14);
    EXPECT_EQ(r.model, Model::Basic);
    EXPECT_EQ(r.iterations, 0u);
    EXPECT_LE(r.residual, kResidualTolerance);
}

TEST(SolveBasic, ConstantOpinionsAreFixed) {
    std::mt19937_64 rng(3);
    const auto edges = oracle::randomGraph(30, 0.2, rng);
    const Graph g = Graph::build(30, edges);
    const auto r = solveBasic(g, OpinionVector(Vector::Constant(30, -0.35)));
    EXPECT_LE((r.z.array() + 0.35).abs().maxCoeff(), 1e-12);
}

TEST(SolveBasic, SingleNode) {
    const auto r = solveBasic(Graph::build(1, {}), opinions({0.7}));
    EXPECT_EQ(r.z(0), 0.7);
}

TEST(SolveBasic, IsolatedNodeKeepsOpinion) {
    const std::vector<Edge> edges{{0, 1}};
    const auto r = solveBasic(Graph::build(3, edges), opinions({1, -1, 0.25}));
    EXPECT_NEAR(r.z(2), 0.25, 1e-15);
}

TEST(SolveBasic, MatchesDenseOracle) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + trial * 3;
        const auto edges = oracle::randomGraph(n, 0.15, rng);
        const Graph g = Graph::build(n, edges);
        const auto s = oracle::uniformOpinions(n, rng);
        const OpinionVector sv{std::span<const double>(s)};
        const auto r = solveBasic(g, sv);
        const Vector expected = oracle::basicEquilibrium(n, g.edges(), sv.values());
        EXPECT_LE((r.z - expected).cwiseAbs().maxCoeff(), 1e-10);
        EXPECT_LE(basicResidual(g, sv, r.z), kResidualTolerance);
    }
}

TEST(SolveExtended, ConflictingHubsEquilibrium) {
    const Network net = conflictingHubsExample();
    const auto r = solveExtended(net.graph, net.influence, net.susceptibility, net.opinions);
    const std::vector<double> expected{0.85, 0.9, 0.9, -0.9, -0.9, -0.9};
    for (int i = 0; i < 6; ++i) {
        EXPECT_NEAR(r.z(i), expected[i], 1e-6) << "node " << i;
    }
    EXPECT_LE(r.residual, kResidualTolerance);
    EXPECT_EQ(r.outOfRange, 0u);
    EXPECT_GT(r.rcond, kSingularRcond);
}

TEST(SolveExtended, AllStubbornGivesInnate) {
    std::mt19937_64 rng(5);
    auto inst = oracle::randomInstance(25, 0.2, 0.0, rng);
    const auto r = solveExtended(inst.graph(), inst.influence(), inst.susceptibility(), inst.opinions());
    for (std::size_t i = 0; i < inst.n; ++i) {
        EXPECT_NEAR(r.z(static_cast<Eigen::Index>(i)), inst.s[i], 1e-15);
    }
}

TEST(SolveExtended, PathTwoPositiveInfluence) {
    // z0 = 0.5 + 0.5 z1, z1 = -0.5 + 0.5 z0  =>  z = [1/3, -1/3].
    const std::vector<Edge> edges{{0, 1}};
    const Graph g = Graph::build(2, edges);
    const auto w = InfluenceMatrix::fromEdgeSigns(g, std::vector<int>{1});
    const auto r = solveExtended(g, w, lambdas({0.5, 0.5}), opinions({1, -1}));
    EXPECT_NEAR(r.z(0), 1.0 / 3.0, 1e-14);
    EXPECT_NEAR(r.z(1), -1.0 / 3.0, 1e-14);
}

TEST(SolveExtended, PathTwoNegativeInfluence) {
    // z0 = 0.5 - 0.5 z1, z1 = -0.5 - 0.5 z0  =>  z = [1, -1].
    const std::vector<Edge> edges{{0, 1}};
    const Graph g = Graph::build(2, edges);
    const auto w = InfluenceMatrix::fromEdgeSigns(g, std::vector<int>{-1});
    const auto r = solveExtended(g, w, lambdas({0.5, 0.5}), opinions({1, -1}));
    EXPECT_NEAR(r.z(0), 1.0, 1e-14);
    EXPECT_NEAR(r.z(1), -1.0, 1e-14);
}

TEST(SolveExtended, MatchesDenseOracleAndStubbornNodes) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 40; ++trial) {
        auto inst = oracle::randomInstance(2 + trial, 0.2, 1.0, rng);
        if (trial % 3 == 0) {
            inst.lambda[0] = 0.0;
        }
        const auto r = solveExtended(inst.graph(), inst.influence(), inst.susceptibility(), inst.opinions());
        const Vector expected = oracle::extendedEquilibrium(inst);
        EXPECT_LE((r.z - expected).cwiseAbs().maxCoeff(), 1e-8 * std::max(1.0, expected.cwiseAbs().maxCoeff()));
        EXPECT_LE(r.residual, kResidualTolerance);
        for (std::size_t i = 0; i < inst.n; ++i) {
            if (inst.lambda[i] == 0.0) {
                EXPECT_NEAR(r.z(static_cast<Eigen::Index>(i)), inst.s[i], 1e-10);
            }
        }
    }
}

TEST(SolveExtended, IsolatedNodeRejected) {
    const std::vector<Edge> edges{{0, 1}};
    const Graph g = Graph::build(3, edges);
    const auto w = InfluenceMatrix::fromEdgeSigns(g, std::vector<int>{1});
    try {
        solveExtended(g, w, lambdas({0.5, 0.5, 0.5}), opinions({0, 0, 0}));
        FAIL() << "expected IsolatedNodeError";
    } catch (const IsolatedNodeError& e) {
        EXPECT_EQ(e.node(), 2u);
    }
}

TEST(SolveExtended, SingularSystemRejected) {
    // lambda = 1 on a positive edge gives I - D^{-1}W = [[1,-1],[-1,1]].
    const std::vector<Edge> edges{{0, 1}};
    const Graph g = Graph::build(2, edges);
    const auto w = InfluenceMatrix::fromEdgeSigns(g, std::vector<int>{1});
    EXPECT_THROW(solveExtended(g, w, lambdas({1, 1}), opinions({0.5, -0.5})), SingularSystemError);
}

TEST(SolveExtended, MalformedInfluenceRejected) {
    const std::vector<Edge> edges{{0, 1}};
    const Graph g = Graph::build(2, edges);
    const InfluenceMatrix w(2, {{0, 1, 1}, {1, 0, -1}});
    EXPECT_THROW(solveExtended(g, w, lambdas({0.5, 0.5}), opinions({0.5, -0.5})), InvalidArgument);
}

TEST(IterateExtended, AllStubbornOneIteration) {
    std::mt19937_64 rng(2);
    const auto inst = oracle::randomInstance(10, 0.3, 0.0, rng);
    const auto r = iterateExtended(inst.graph(), inst.influence(), inst.susceptibility(), inst.opinions(), 1e-12, 10);
    EXPECT_EQ(r.iterations, 1u);
    for (std::size_t i = 0; i < inst.n; ++i) {
        EXPECT_EQ(r.z(static_cast<Eigen::Index>(i)), inst.s[i]);
    }
}

TEST(IterateExtended, PathTwo) {
    const std::vector<Edge> edges{{0, 1}};
    const Graph g = Graph::build(2, edges);
    const auto w = InfluenceMatrix::fromEdgeSigns(g, std::vector<int>{1});
    const auto r = iterateExtended(g, w, lambdas({0.5, 0.5}), opinions({1, -1}), 1e-12, 1000);
    EXPECT_NEAR(r.z(0), 1.0 / 3.0, 1e-11);
    EXPECT_NEAR(r.z(1), -1.0 / 3.0, 1e-11);
    EXPECT_GT(r.iterations, 1u);
}

TEST(IterateExtended, ConflictingHubsMatchesDirectSolve) {
    const Network net = conflictingHubsExample();
    const auto direct = solveExtended(net.graph, net.influence, net.susceptibility, net.opinions);
    try {
        const auto it = iterateExtended(net.graph, net.influence, net.susceptibility, net.opinions, 1e-12, 100000);
        EXPECT_LE((it.z - direct.z).cwiseAbs().maxCoeff(), 1e-6);
    } catch (const NotConvergedError& e) {
        EXPECT_EQ(e.iterations(), 100000u);
    }
}

TEST(IterateExtended, ReportsNonConvergence) {
    // Repulsive edge with lambda = 1 on both ends: the update oscillates.
    const std::vector<Edge> edges{{0, 1}};
    const Graph g = Graph::build(2, edges);
    const auto w = InfluenceMatrix::fromEdgeSigns(g, std::vector<int>{-1});
    try {
        iterateExtended(g, w, lambdas({1, 1}), opinions({0.5, 0.2}), 1e-12, 50);
        FAIL() << "expected NotConvergedError";
    } catch (const NotConvergedError& e) {
        EXPECT_EQ(e.iterations(), 50u);
        EXPECT_GT(e.lastChange(), 0.0);
    }
}

TEST(ExtendedOperator, ApplyMatchesSolveAndIsBitwiseStable) {
    std::mt19937_64 rng(23);
    const auto inst = oracle::randomInstance(40, 0.1, 0.9, rng);
    const ExtendedOperator op(inst.graph(), inst.influence(), inst.susceptibility());
    const auto a = op.apply(inst.opinions());
    const auto b = op.apply(inst.opinions());
    const auto c = solveExtended(inst.graph(), inst.influence(), inst.susceptibility(), inst.opinions());
    EXPECT_EQ(a.z, b.z);
    EXPECT_LE((a.z - c.z).cwiseAbs().maxCoeff(), 1e-14);

    auto shifted = inst.s;
    shifted[7] = -shifted[7];
    const auto d = op.apply(OpinionVector(std::span<const double>(shifted)));
    EXPECT_LE(a.residual, kResidualTolerance);
    EXPECT_LE(d.residual, kResidualTolerance);
}

TEST(ExtendedOperator, ConcurrentAppliesAreDeterministic) {
    std::mt19937_64 rng(29);
    const auto inst = oracle::randomInstance(60, 0.1, 0.9, rng);
    const ExtendedOperator op(inst.graph(), inst.influence(), inst.susceptibility());
    const Vector reference = op.apply(inst.opinions()).z;
    std::vector<Vector> results(8);
    {
        std::vector<std::jthread> workers;
        for (std::size_t t = 0; t < results.size(); ++t) {
            workers.emplace_back([&, t] {
                for (int rep = 0; rep < 20; ++rep) {
                    results[t] = op.apply(inst.opinions()).z;
                }
            });
        }
    }
    for (const auto& r : results) {
        EXPECT_EQ(r, reference);
    }
}

TEST(ExtendedOperator, ReuseIsAtLeastTwiceAsFast) {
    SbmConfig cfg;
    cfg.seed = 1;
    const auto inst = generateInstance(cfg);
    const Network& net = inst.network;
    std::mt19937_64 rng(31);
    std::vector<OpinionVector> inputs;
    for (int k = 0; k < 100; ++k) {
        auto s = oracle::uniformOpinions(net.size(), rng);
        inputs.emplace_back(std::span<const double>(s));
    }
    using clock = std::chrono::steady_clock;
    double checksum = 0.0;

    auto timeIt = [&](auto&& body) {
        double best = std::numeric_limits<double>::infinity();
        for (int rep = 0; rep < 3; ++rep) {
            const auto start = clock::now();
            body();
            best = std::min(best, std::chrono::duration<double>(clock::now() - start).count());
        }
        return best;
    };
    const double reuse = timeIt([&] {
        const ExtendedOperator op(net.graph, net.influence, net.susceptibility);
        for (const auto& s : inputs) {
            checksum += op.apply(s).z(0);
        }
    });
    const double independent = timeIt([&] {
        for (const auto& s : inputs) {
            checksum += solveExtended(net.graph, net.influence, net.susceptibility, s).z(0);
        }
    });
    EXPECT_TRUE(std::isfinite(checksum));
    std::printf("speedup %.1fx\n", independent / reuse);
    EXPECT_GE(independent / reuse, 2.0) << "reuse " << reuse << " s, independent " << independent << " s";
}
