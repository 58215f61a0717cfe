#include "dissensus/campaign.hpp"

#include <algorithm>
#include <cmath>

#include "dissensus/disruption.hpp"
#include "dissensus/errors.hpp"

namespace dissensus {

void CampaignConfig::validate() const {
    if (!(target >= -1.0 && target <= 1.0)) {
        throw InvalidArgument("target must lie in [-1, 1]");
    }
    if (!(sigma > 0.0)) {
        throw InvalidArgument("sigma must be > 0");
    }
    if (!(eps_stop > 0.0)) {
        throw InvalidArgument("eps_stop must be > 0");
    }
    if (max_steps == 0) {
        throw InvalidArgument("max_steps must be >= 1");
    }
    if (!(drift_budget > 0.0)) {
        throw InvalidArgument("drift_budget must be > 0");
    }
}

ReferenceGenerator::ReferenceGenerator(std::uint64_t seed, double stepScale, double learningRate)
    : rng_(seed), noise_(0.0, stepScale > 0.0 ? stepScale : 1.0), learningRate_(learningRate) {
    if (!(stepScale > 0.0)) {
        throw InvalidArgument("step_scale must be > 0");
    }
    if (!(learningRate > 0.0 && learningRate <= 1.0)) {
        throw InvalidArgument("learning rate must lie in (0, 1]");
    }
}

GeneratedContent ReferenceGenerator::propose() {
    lastStance_ = std::clamp(mean_ + noise_(rng_), -1.0, 1.0);
    return {nextId_++, lastStance_};
}

void ReferenceGenerator::feedback(double reward) {
    if (reward > bestReward_) {
        bestReward_ = reward;
        bestStance_ = lastStance_;
    }
    const double step = learningRate_ * (bestStance_ - mean_);
    mean_ += step;
    drift_ += std::abs(step);
}

FixedStanceGenerator::FixedStanceGenerator(double stance, double driftPerStep)
    : stance_(stance), driftPerStep_(driftPerStep) {
    if (!(stance >= -1.0 && stance <= 1.0)) {
        throw InvalidArgument("stance must lie in [-1, 1]");
    }
    if (!(driftPerStep >= 0.0)) {
        throw InvalidArgument("drift increment must be >= 0");
    }
}

GeneratedContent FixedStanceGenerator::propose() {
    drift_ += driftPerStep_;
    return {nextId_++, stance_};
}

void FixedStanceGenerator::feedback(double) {
    ++feedbackCount_;
}

double reward(double x, double target, double sigma) {
    if (!(sigma > 0.0)) {
        throw InvalidArgument("sigma must be > 0");
    }
    const double diff = x - target;
    return std::exp(-diff * diff / (2.0 * sigma * sigma));
}

const char* toString(CampaignOutcome outcome) {
    switch (outcome) {
    case CampaignOutcome::Converged: return "converged";
    case CampaignOutcome::DriftExceeded: return "drift-exceeded";
    case CampaignOutcome::MaxSteps: return "max-steps";
    }
    return "unknown";
}

double CampaignTrace::finalStance() const {
    if (steps.empty()) {
        throw InvalidArgument("empty campaign trace");
    }
    return steps.back().stance;
}

double CampaignTrace::finalReward() const {
    if (steps.empty()) {
        throw InvalidArgument("empty campaign trace");
    }
    return steps.back().reward;
}

CampaignTrace runCampaign(const CampaignConfig& cfg, StanceGenerator& generator) {
    cfg.validate();
    CampaignTrace trace;
    trace.steps.reserve(std::min<std::size_t>(cfg.max_steps, 4096));
    for (std::size_t step = 1;; ++step) {
        const GeneratedContent content = generator.propose();
        const double drift = generator.drift();
        const double r = reward(content.stance, cfg.target, cfg.sigma);
        trace.steps.push_back({step, content.stance, r, drift});

        if (std::abs(content.stance - cfg.target) <= cfg.eps_stop) {
            trace.outcome = CampaignOutcome::Converged;
            trace.finalContent = content;
            return trace;
        }
        if (drift >= cfg.drift_budget) {
            trace.outcome = CampaignOutcome::DriftExceeded;
            return trace;
        }
        if (step >= cfg.max_steps) {
            trace.outcome = CampaignOutcome::MaxSteps;
            return trace;
        }
        generator.feedback(r);
    }
}

double endToEndDisruption(const ExtendedOperator& op, const Graph& g, const PerturbationPlan& plan,
                          const CampaignTrace& trace) {
    if (!trace.converged() || !trace.finalContent) {
        throw InvalidArgument("campaign trace did not converge");
    }
    const OpinionVector realized = withOpinion(plan.sPrime, plan.u, trace.finalContent->stance);
    return disruption(g, op.apply(realized).z, StateTag::Manipulated).disruption;
}

double endToEndDisruption(const Graph& g, const InfluenceMatrix& w, const SusceptibilityProfile& lambda,
                          const PerturbationPlan& plan, const CampaignTrace& trace) {
    return endToEndDisruption(ExtendedOperator(g, w, lambda), g, plan, trace);
}

} // namespace dissensus
