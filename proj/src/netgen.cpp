#include "dissensus/netgen.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "dissensus/errors.hpp"

namespace dissensus {

namespace {

void checkProbability(double p, const char* name) {
    if (!(p >= 0.0 && p <= 1.0)) {
        std::ostringstream msg;
        msg << name << " = " << p << " is not a probability";
        throw InvalidArgument(msg.str());
    }
}

void checkBeta(const BetaParams& params, const char* name) {
    if (!(params.alpha > 0.0 && params.beta > 0.0) || !std::isfinite(params.alpha) || !std::isfinite(params.beta)) {
        std::ostringstream msg;
        msg << name << " parameters must be positive, got (" << params.alpha << ", " << params.beta << ")";
        throw InvalidArgument(msg.str());
    }
}

} // namespace

void SbmConfig::validate() const {
    if (community_sizes.empty()) {
        throw InvalidArgument("community_sizes is empty");
    }
    for (auto size : community_sizes) {
        if (size == 0) {
            throw InvalidArgument("community sizes must be >= 1");
        }
    }
    checkProbability(p_intra, "p_intra");
    checkProbability(p_inter, "p_inter");
    if (opinion_beta.size() != community_sizes.size()) {
        throw InvalidArgument("opinion_beta needs one (alpha, beta) pair per community");
    }
    for (const auto& params : opinion_beta) {
        checkBeta(params, "opinion_beta");
    }
    checkBeta(susceptibility_beta, "susceptibility_beta");
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
        throw InvalidArgument("epsilon must be a finite value >= 0");
    }
}

std::size_t SbmConfig::numberOfNodes() const {
    std::size_t n = 0;
    for (auto size : community_sizes) {
        n += size;
    }
    return n;
}

std::vector<std::size_t> SbmConfig::communityOf() const {
    std::vector<std::size_t> community;
    community.reserve(numberOfNodes());
    for (std::size_t k = 0; k < community_sizes.size(); ++k) {
        community.insert(community.end(), community_sizes[k], k);
    }
    return community;
}

double sampleBeta(Rng& rng, const BetaParams& params) {
    std::gamma_distribution<double> x(params.alpha, 1.0);
    std::gamma_distribution<double> y(params.beta, 1.0);
    const double a = x(rng);
    const double b = y(rng);
    const double total = a + b;
    // Both gammas can underflow to 0 for tiny shape parameters.
    if (!(total > 0.0)) {
        return params.alpha >= params.beta ? 1.0 : 0.0;
    }
    return a / total;
}

Graph genSbm(const SbmConfig& cfg, Rng& rng) {
    cfg.validate();
    const auto community = cfg.communityOf();
    const std::size_t n = community.size();
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::vector<Edge> edges;
    for (node i = 0; i < n; ++i) {
        for (node j = i + 1; j < n; ++j) {
            const double p = community[i] == community[j] ? cfg.p_intra : cfg.p_inter;
            if (uniform(rng) < p) {
                edges.push_back({i, j});
            }
        }
    }
    return Graph::build(n, edges);
}

OpinionVector sampleOpinions(const SbmConfig& cfg, Rng& rng) {
    cfg.validate();
    const auto community = cfg.communityOf();
    Vector s(static_cast<Eigen::Index>(community.size()));
    for (std::size_t i = 0; i < community.size(); ++i) {
        const double b = sampleBeta(rng, cfg.opinion_beta[community[i]]);
        s(static_cast<Eigen::Index>(i)) = std::clamp(2.0 * b - 1.0, -1.0, 1.0);
    }
    return OpinionVector(std::move(s));
}

SusceptibilityProfile sampleSusceptibility(const SbmConfig& cfg, Rng& rng) {
    cfg.validate();
    const auto n = static_cast<Eigen::Index>(cfg.numberOfNodes());
    Vector lambda(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        lambda(i) = sampleBeta(rng, cfg.susceptibility_beta);
    }
    return SusceptibilityProfile(std::move(lambda));
}

SyntheticInstance generateInstance(const SbmConfig& cfg, SusceptibilityMode mode) {
    cfg.validate();
    SyntheticInstance instance;
    instance.config = cfg;
    instance.community = cfg.communityOf();
    Rng rng(cfg.seed);
    auto& net = instance.network;
    net.graph = genSbm(cfg, rng);
    net.opinions = sampleOpinions(cfg, rng);
    net.susceptibility = mode == SusceptibilityMode::Beta ? sampleSusceptibility(cfg, rng)
                                                          : degreeSusceptibility(net.graph);
    net.influence = deriveInfluence(net.graph, net.opinions, cfg.epsilon);
    net.labels = defaultLabels(net.graph.numberOfNodes());
    return instance;
}

Graph genSbm(const SbmConfig& cfg) {
    Rng rng(cfg.seed);
    return genSbm(cfg, rng);
}

OpinionVector sampleOpinions(const SbmConfig& cfg) {
    return generateInstance(cfg).network.opinions;
}

SusceptibilityProfile sampleSusceptibility(const SbmConfig& cfg) {
    return generateInstance(cfg).network.susceptibility;
}

InfluenceMatrix deriveInfluence(const Graph& g, const OpinionVector& s, double epsilon) {
    if (s.size() != g.numberOfNodes()) {
        throw InvalidArgument("opinion vector size does not match the graph");
    }
    if (!(epsilon >= 0.0)) {
        throw InvalidArgument("epsilon must be >= 0");
    }
    std::vector<int> signs;
    signs.reserve(g.numberOfEdges());
    for (const auto& e : g.edges()) {
        const double si = s[e.u];
        const double sj = s[e.v];
        const bool opposite = si * sj < 0.0;
        signs.push_back(opposite && std::abs(si - sj) >= epsilon ? -1 : 1);
    }
    return InfluenceMatrix::fromEdgeSigns(g, signs);
}

SusceptibilityProfile degreeSusceptibility(const Graph& g) {
    const auto n = static_cast<Eigen::Index>(g.numberOfNodes());
    Vector lambda = Vector::Zero(n);
    const std::size_t maxDegree = g.maxDegree();
    if (maxDegree > 0) {
        for (node i = 0; i < g.numberOfNodes(); ++i) {
            lambda(static_cast<Eigen::Index>(i)) = static_cast<double>(g.degree(i)) / static_cast<double>(maxDegree);
        }
    }
    return SusceptibilityProfile(std::move(lambda));
}

SyntheticInstance realNetworkStandIn(std::vector<std::size_t> sizes, std::uint64_t seed) {
    SbmConfig cfg;
    cfg.community_sizes = std::move(sizes);
    cfg.p_intra = 0.3;
    cfg.p_inter = 0.02;
    cfg.opinion_beta.assign(cfg.community_sizes.size(), BetaParams{});
    for (std::size_t k = 0; k < cfg.opinion_beta.size(); ++k) {
        cfg.opinion_beta[k] = (k % 2 == 0) ? BetaParams{1.0, 8.0} : BetaParams{8.0, 1.0};
    }
    cfg.seed = seed;
    cfg.validate();

    Rng rng(cfg.seed);
    SyntheticInstance instance;
    instance.config = cfg;
    instance.community = cfg.communityOf();
    Graph sbm = genSbm(cfg, rng);

    // Retweet graphs have no isolated users: attach any isolated node to the
    // first other member of its community (or node 0/1 for singletons).
    std::vector<Edge> edges = sbm.edges();
    const std::size_t n = sbm.numberOfNodes();
    for (node i = 0; i < n && n > 1; ++i) {
        if (sbm.degree(i) > 0) {
            continue;
        }
        node partner = (i == 0) ? 1 : 0;
        for (node j = 0; j < n; ++j) {
            if (j != i && instance.community[j] == instance.community[i]) {
                partner = j;
                break;
            }
        }
        edges.push_back({i, partner});
    }
    auto& net = instance.network;
    net.graph = Graph::build(n, edges);
    net.opinions = sampleOpinions(cfg, rng);
    net.susceptibility = degreeSusceptibility(net.graph);
    net.influence = deriveInfluence(net.graph, net.opinions, cfg.epsilon);
    net.labels.reserve(n);
    for (node i = 0; i < n; ++i) {
        net.labels.push_back("user" + std::to_string(1000 + i));
    }
    return instance;
}

} // namespace dissensus
