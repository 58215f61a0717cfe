#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <vector>

#include "dissensus/equilibrium.hpp"
#include "dissensus/graph.hpp"
#include "dissensus/perturbation.hpp"

namespace dissensus {

/// Control parameters of the content-generation loop.
struct CampaignConfig {
    /// Desired stance s'_u.
    double target = 1.0;
    /// Reward width.
    double sigma = 0.15;
    /// Convergence band: stop once |x - target| <= eps_stop.
    double eps_stop = 0.05;
    std::size_t max_steps = 10000;
    /// Divergence cap; the loop aborts once drift >= drift_budget.
    double drift_budget = 50.0;
    std::uint64_t seed = 0;

    void validate() const;
};

/// One generated piece of content, identified opaquely, with its scored stance.
struct GeneratedContent {
    std::uint64_t id = 0;
    double stance = 0.0;
};

/**
 * Seam where a content generator plugs into the loop.
 *
 * propose() must be deterministic given the seed and the feedback history,
 * stances lie in [-1, 1], and drift() never decreases.
 */
class StanceGenerator {
public:
    virtual ~StanceGenerator() = default;
    virtual GeneratedContent propose() = 0;
    virtual void feedback(double reward) = 0;
    /// Cumulative divergence from the initial generator, >= 0 and nondecreasing.
    virtual double drift() const = 0;
};

/**
 * Hill climber: keeps a mean stance mu (starting at 0), proposes
 * clamp(mu + N(0, stepScale^2), -1, 1) and pulls mu halfway toward the
 * best-rewarded proposal seen so far. drift() is the total distance mu has
 * travelled.
 */
class ReferenceGenerator final : public StanceGenerator {
public:
    ReferenceGenerator(std::uint64_t seed, double stepScale, double learningRate = 0.5);

    GeneratedContent propose() override;
    void feedback(double reward) override;
    double drift() const override { return drift_; }
    double mean() const noexcept { return mean_; }

private:
    std::mt19937_64 rng_;
    std::normal_distribution<double> noise_;
    double learningRate_;
    double mean_ = 0.0;
    double drift_ = 0.0;
    double lastStance_ = 0.0;
    double bestStance_ = 0.0;
    double bestReward_ = -1.0;
    std::uint64_t nextId_ = 0;
};

/// Always proposes the same stance; drift grows by a fixed amount per proposal.
class FixedStanceGenerator final : public StanceGenerator {
public:
    explicit FixedStanceGenerator(double stance, double driftPerStep = 0.0);

    GeneratedContent propose() override;
    void feedback(double reward) override;
    double drift() const override { return drift_; }
    std::size_t feedbackCount() const noexcept { return feedbackCount_; }

private:
    double stance_;
    double driftPerStep_;
    double drift_ = 0.0;
    std::uint64_t nextId_ = 0;
    std::size_t feedbackCount_ = 0;
};

/// exp(-(x - target)^2 / (2 sigma^2)). Throws InvalidArgument when sigma <= 0.
double reward(double x, double target, double sigma);

enum class CampaignOutcome { Converged, DriftExceeded, MaxSteps };

const char* toString(CampaignOutcome outcome);

struct CampaignStep {
    std::size_t step = 0;
    double stance = 0.0;
    double reward = 0.0;
    double drift = 0.0;
};

struct CampaignTrace {
    std::vector<CampaignStep> steps;
    CampaignOutcome outcome = CampaignOutcome::MaxSteps;
    /// Content that reached the band; set only when converged.
    std::optional<GeneratedContent> finalContent;

    bool converged() const noexcept { return outcome == CampaignOutcome::Converged; }
    double finalStance() const;
    double finalReward() const;
};

/**
 * Runs the loop: propose, read drift, score, reward; stop on convergence,
 * then on drift >= budget, then on the step cap; otherwise feed the reward
 * back and repeat. Every step is recorded.
 */
CampaignTrace runCampaign(const CampaignConfig& cfg, StanceGenerator& generator);

/**
 * Equilibrium disruption after the campaign's final stance replaces s'_u.
 * Throws InvalidArgument when the trace did not converge.
 */
double endToEndDisruption(const ExtendedOperator& op, const Graph& g, const PerturbationPlan& plan,
                          const CampaignTrace& trace);
double endToEndDisruption(const Graph& g, const InfluenceMatrix& w, const SusceptibilityProfile& lambda,
                          const PerturbationPlan& plan, const CampaignTrace& trace);

} // namespace dissensus
