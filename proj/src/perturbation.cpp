#include "dissensus/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "dissensus/disruption.hpp"
#include "dissensus/errors.hpp"

namespace dissensus {

const char* toString(EndpointChoice choice) {
    switch (choice) {
    case EndpointChoice::LowBound: return "low";
    case EndpointChoice::HighBound: return "high";
    case EndpointChoice::Tie: return "tie";
    }
    return "unknown";
}

double PerturbationPlan::objective() const noexcept {
    return std::max(objectiveLow, objectiveHigh);
}

double equilibriumDisruption(const ExtendedOperator& op, const Graph& g, const OpinionVector& s) {
    return disruption(g, op.apply(s).z, StateTag::ExtendedEq).disruption;
}

OpinionVector withOpinion(const OpinionVector& s, node u, double value) {
    if (u >= s.size()) {
        throw InvalidArgument("node " + std::to_string(u) + " out of range");
    }
    Vector values = s.values();
    values(static_cast<Eigen::Index>(u)) = value;
    return OpinionVector(std::move(values));
}

PerturbationPlan bestAlpha(const ExtendedOperator& op, const Graph& g, const OpinionVector& s, node u) {
    if (u >= g.numberOfNodes()) {
        throw InvalidArgument("node " + std::to_string(u) + " out of range");
    }
    const double su = s[u];
    PerturbationPlan plan;
    plan.u = u;

    // s'_u is set directly to +-1 so the endpoints are exact.
    OpinionVector low = withOpinion(s, u, 1.0);
    OpinionVector high = withOpinion(s, u, -1.0);
    plan.objectiveLow = equilibriumDisruption(op, g, low);
    plan.objectiveHigh = equilibriumDisruption(op, g, high);

    const double scale = std::max({1.0, std::abs(plan.objectiveLow), std::abs(plan.objectiveHigh)});
    if (std::abs(plan.objectiveLow - plan.objectiveHigh) <= kTieTolerance * scale) {
        plan.chosen = EndpointChoice::Tie;
    } else if (plan.objectiveLow > plan.objectiveHigh) {
        plan.chosen = EndpointChoice::LowBound;
    } else {
        plan.chosen = EndpointChoice::HighBound;
    }

    if (plan.chosen == EndpointChoice::HighBound) {
        plan.alpha = su + 1.0;
        plan.sPrime = std::move(high);
    } else {
        plan.alpha = su - 1.0;
        plan.sPrime = std::move(low);
    }
    return plan;
}

PerturbationPlan bestAlpha(const Graph& g, const InfluenceMatrix& w, const SusceptibilityProfile& lambda,
                           const OpinionVector& s, node u) {
    return bestAlpha(ExtendedOperator(g, w, lambda), g, s, u);
}

GridCheckResult gridCheck(const ExtendedOperator& op, const Graph& g, const OpinionVector& s, node u,
                          std::size_t gridPoints) {
    if (gridPoints < 3) {
        throw InvalidArgument("grid needs at least 3 points");
    }
    if (u >= g.numberOfNodes()) {
        throw InvalidArgument("node " + std::to_string(u) + " out of range");
    }
    GridCheckResult result;
    result.alphas.reserve(gridPoints);
    result.objectives.reserve(gridPoints);
    const double su = s[u];
    const double last = static_cast<double>(gridPoints - 1);
    for (std::size_t k = 0; k < gridPoints; ++k) {
        // Walk s'_u from +1 down to -1, i.e. alpha from s_u - 1 up to s_u + 1.
        const double target = (k + 1 == gridPoints) ? -1.0 : 1.0 - 2.0 * static_cast<double>(k) / last;
        const double value = equilibriumDisruption(op, g, withOpinion(s, u, target));
        result.alphas.push_back(su - target);
        result.objectives.push_back(value);
        if (k == 0 || value > result.maxObjective) {
            result.maxObjective = value;
            result.argmaxAlpha = su - target;
        }
    }
    return result;
}

GridCheckResult gridCheck(const Graph& g, const InfluenceMatrix& w, const SusceptibilityProfile& lambda,
                          const OpinionVector& s, node u, std::size_t gridPoints) {
    return gridCheck(ExtendedOperator(g, w, lambda), g, s, u, gridPoints);
}

node SweepResult::argmax() const {
    if (induced.empty()) {
        throw InvalidArgument("empty sweep");
    }
    return static_cast<node>(std::max_element(induced.begin(), induced.end()) - induced.begin());
}

double SweepResult::maxInduced() const {
    return induced.empty() ? 0.0 : *std::max_element(induced.begin(), induced.end());
}

SweepResult sweepNodes(const ExtendedOperator& op, const Graph& g, const OpinionVector& s, unsigned threads) {
    const std::size_t n = g.numberOfNodes();
    SweepResult result;
    result.baseline = equilibriumDisruption(op, g, s);
    result.plans.resize(n);

    if (threads == 0) {
        threads = std::max(1U, std::thread::hardware_concurrency());
    }
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));

    std::vector<std::exception_ptr> failures(threads);
    auto worker = [&](unsigned id) {
        try {
            for (std::size_t u = id; u < n; u += threads) {
                result.plans[u] = bestAlpha(op, g, s, u);
            }
        } catch (...) {
            failures[id] = std::current_exception();
        }
    };
    if (threads <= 1) {
        worker(0);
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned id = 0; id < threads; ++id) {
            pool.emplace_back(worker, id);
        }
    }
    for (const auto& failure : failures) {
        if (failure) {
            std::rethrow_exception(failure);
        }
    }

    result.induced.reserve(n);
    for (const auto& plan : result.plans) {
        result.induced.push_back(plan.objective());
    }
    result.normalized = minMaxNormalize(result.induced);
    return result;
}

SweepResult sweepNodes(const Graph& g, const InfluenceMatrix& w, const SusceptibilityProfile& lambda,
                       const OpinionVector& s, unsigned threads) {
    return sweepNodes(ExtendedOperator(g, w, lambda), g, s, threads);
}

std::vector<double> minMaxNormalize(std::span<const double> values) {
    std::vector<double> out(values.size(), 0.0);
    if (values.empty()) {
        return out;
    }
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double range = *hi - *lo;
    // Spreads at rounding level (e.g. symmetric nodes solved through different pivots) count as constant.
    const double scale = std::max(std::abs(*lo), std::abs(*hi));
    if (!(range > kFlatRangeTolerance * scale)) {
        return out;
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        out[i] = (values[i] - *lo) / range;
    }
    return out;
}

} // namespace dissensus
