#include "dissensus/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <sstream>
#include <thread>

#include "dissensus/errors.hpp"

namespace dissensus {

const char* toString(CentralityMeasure measure) {
    switch (measure) {
    case CentralityMeasure::Degree: return "degree";
    case CentralityMeasure::Betweenness: return "betweenness";
    case CentralityMeasure::Eigenvector: return "eigenvector";
    }
    return "unknown";
}

CentralityMeasure parseCentralityMeasure(const std::string& name) {
    if (name == "degree") {
        return CentralityMeasure::Degree;
    }
    if (name == "betweenness") {
        return CentralityMeasure::Betweenness;
    }
    if (name == "eigenvector") {
        return CentralityMeasure::Eigenvector;
    }
    throw InvalidArgument("unknown centrality measure '" + name + "'");
}

CentralityVector degreeCentrality(const Graph& g) {
    CentralityVector result;
    result.measure = CentralityMeasure::Degree;
    result.values.reserve(g.numberOfNodes());
    for (node i = 0; i < g.numberOfNodes(); ++i) {
        result.values.push_back(static_cast<double>(g.degree(i)));
    }
    return result;
}

namespace {

constexpr std::size_t kBetweennessChunks = 64;

// Single-source dependency accumulation (BFS + reverse sweep), added into bc.
struct BrandesWorkspace {
    explicit BrandesWorkspace(std::size_t n) : sigma(n), dist(n), delta(n), order(), preds(n) {
        order.reserve(n);
    }

    void accumulate(const Graph& g, node source, std::vector<double>& bc) {
        const std::size_t n = g.numberOfNodes();
        std::fill(sigma.begin(), sigma.end(), 0.0);
        std::fill(dist.begin(), dist.end(), std::numeric_limits<std::size_t>::max());
        std::fill(delta.begin(), delta.end(), 0.0);
        for (auto& p : preds) {
            p.clear();
        }
        order.clear();

        sigma[source] = 1.0;
        dist[source] = 0;
        std::queue<node> queue;
        queue.push(source);
        while (!queue.empty()) {
            const node v = queue.front();
            queue.pop();
            order.push_back(v);
            for (node w : g.neighbors(v)) {
                if (dist[w] == std::numeric_limits<std::size_t>::max()) {
                    dist[w] = dist[v] + 1;
                    queue.push(w);
                }
                if (dist[w] == dist[v] + 1) {
                    sigma[w] += sigma[v];
                    preds[w].push_back(v);
                }
            }
        }
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const node w = *it;
            for (node v : preds[w]) {
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
            }
            if (w != source) {
                bc[w] += delta[w];
            }
        }
        (void)n;
    }

    std::vector<double> sigma;
    std::vector<std::size_t> dist;
    std::vector<double> delta;
    std::vector<node> order;
    std::vector<std::vector<node>> preds;
};

} // namespace

CentralityVector betweennessCentrality(const Graph& g, unsigned threads) {
    const std::size_t n = g.numberOfNodes();
    CentralityVector result;
    result.measure = CentralityMeasure::Betweenness;
    result.values.assign(n, 0.0);
    if (n == 0) {
        return result;
    }

    const std::size_t chunks = std::min(kBetweennessChunks, n);
    std::vector<std::vector<double>> partial(chunks, std::vector<double>(n, 0.0));
    if (threads == 0) {
        threads = std::max(1U, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, chunks));

    auto worker = [&](unsigned id) {
        BrandesWorkspace workspace(n);
        for (std::size_t c = id; c < chunks; c += threads) {
            const std::size_t begin = c * n / chunks;
            const std::size_t end = (c + 1) * n / chunks;
            for (node s = begin; s < end; ++s) {
                workspace.accumulate(g, s, partial[c]);
            }
        }
    };
    if (threads <= 1) {
        worker(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned id = 0; id < threads; ++id) {
            pool.emplace_back(worker, id);
        }
    }

    for (const auto& chunk : partial) {
        for (std::size_t i = 0; i < n; ++i) {
            result.values[i] += chunk[i];
        }
    }
    // Every unordered pair was visited from both ends.
    for (auto& v : result.values) {
        v *= 0.5;
    }
    return result;
}

CentralityVector eigenvectorCentrality(const Graph& g, double tol, std::size_t maxIter) {
    if (g.numberOfEdges() == 0) {
        throw InvalidArgument("eigenvector centrality needs at least one edge");
    }
    const std::size_t n = g.numberOfNodes();
    std::vector<double> v(n, 1.0);
    std::vector<double> next(n);
    CentralityVector result;
    result.measure = CentralityMeasure::Eigenvector;

    double change = std::numeric_limits<double>::infinity();
    std::size_t iter = 0;
    while (iter < maxIter) {
        ++iter;
        double peak = 0.0;
        for (node i = 0; i < n; ++i) {
            double acc = v[i];
            for (node j : g.neighbors(i)) {
                acc += v[j];
            }
            next[i] = acc;
            peak = std::max(peak, acc);
        }
        change = 0.0;
        for (node i = 0; i < n; ++i) {
            next[i] /= peak;
            change = std::max(change, std::abs(next[i] - v[i]));
        }
        v.swap(next);
        if (change <= tol) {
            break;
        }
    }
    if (change > tol) {
        std::ostringstream msg;
        msg << "eigenvector centrality did not converge in " << maxIter << " iterations (last change " << change << ")";
        throw NotConvergedError(msg.str(), maxIter, change);
    }

    double numerator = 0.0;
    double denominator = 0.0;
    for (node i = 0; i < n; ++i) {
        double av = 0.0;
        for (node j : g.neighbors(i)) {
            av += v[j];
        }
        numerator += v[i] * av;
        denominator += v[i] * v[i];
    }
    result.eigenvalue = numerator / denominator;
    result.iterations = iter;
    result.values = std::move(v);
    return result;
}

CentralityVector centrality(const Graph& g, CentralityMeasure measure) {
    switch (measure) {
    case CentralityMeasure::Degree: return degreeCentrality(g);
    case CentralityMeasure::Betweenness: return betweennessCentrality(g);
    case CentralityMeasure::Eigenvector: return eigenvectorCentrality(g);
    }
    throw InvalidArgument("unknown centrality measure");
}

double pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) {
        throw InvalidArgument("pearson: series have different lengths");
    }
    if (x.size() < 2) {
        throw InvalidArgument("pearson: need at least two points");
    }
    auto constant = [](std::span<const double> v) {
        return std::all_of(v.begin(), v.end(), [&](double value) { return value == v.front(); });
    };
    if (constant(x) || constant(y)) {
        throw ConstantInputError("no correlation computable: constant input");
    }
    const double count = static_cast<double>(x.size());
    double meanX = 0.0;
    double meanY = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        meanX += x[i];
        meanY += y[i];
    }
    meanX /= count;
    meanY /= count;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - meanX;
        const double dy = y[i] - meanY;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (!(sxx > 0.0) || !(syy > 0.0)) {
        throw ConstantInputError("no correlation computable: constant input");
    }
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

CorrelationReport correlateDisruption(const CentralityVector& c, const SweepResult& sweep) {
    if (c.values.size() != sweep.normalized.size()) {
        throw InvalidArgument("sweep does not cover every node");
    }
    CorrelationReport report;
    report.measure = c.measure;
    report.nPoints = c.values.size();
    report.rho = pearson(c.values, sweep.normalized);
    return report;
}

CorrelationReport correlateDisruption(const Graph& g, const SweepResult& sweep, CentralityMeasure measure) {
    return correlateDisruption(centrality(g, measure), sweep);
}

} // namespace dissensus
