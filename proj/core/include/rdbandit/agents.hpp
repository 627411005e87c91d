#pragma once

// Action-selection rules. Each agent maps a posterior plus an RNG stream to
// an arm. The *_policy functions expose the action distribution an agent
// samples from for a fixed set of posterior draws.

#include "rdbandit/bandit.hpp"
#include "rdbandit/rd_solver.hpp"
#include "rdbandit/rng.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace rdbandit {

using SampleSet = std::span<const EnvironmentRealization>;

struct ActionDistribution {
    std::vector<double> probs;

    std::size_t sample(Rng& rng) const;
};

// Either a fixed Lagrange multiplier or the per-period adaptive rule.
struct BetaChoice {
    bool adaptive = false;
    double value = 1.0;

    static BetaChoice fixed(double beta) { return {false, beta}; }
    static BetaChoice adaptive_rule() { return {true, 0.0}; }
};

struct AgentConfig {
    std::size_t z = 16;
    BetaChoice beta;
    BAConfig ba;
    double epsilon = 0.0;
    double beta_max = 1e6;

    void validate() const;
};

// v below this (squared reward units) is treated as no information.
inline constexpr double kNegligibleInformation = 1e-18;

std::size_t thompson_action(const PosteriorState& state, Rng& rng);

// First arm whose mean is within epsilon of the best; lowest index on ties.
std::size_t satisficing_arm(const EnvironmentRealization& env, double epsilon);
std::size_t sts_action(const PosteriorState& state, double epsilon, Rng& rng);

// Uniform empirical source over the samples and its squared-regret solve.
BASolution solve_target(SampleSet samples, double beta, const BAConfig& cfg);

// The beta -> infinity target: each sample's channel row is the indicator of
// its optimal arm (lowest index on ties).
BASolution optimal_action_target(SampleSet samples);

// max(0, E[mean(target)] - E[mean(a)]) under the uniform empirical source.
std::vector<double> expected_regret_vector(SampleSet samples, const BASolution& target);

// Variance over the target of the conditional mean reward of each arm.
std::vector<double> variance_info_gain(SampleSet samples, const BASolution& target);

struct RatioMinimum {
    ActionDistribution policy;
    double ratio = 0.0;
    // Every v is negligible: `policy` is the point mass on argmin delta and
    // the ratio carries no information.
    bool degenerate = false;
};

// Minimizes (sum pi_a delta_a)^2 / (sum pi_a v_a) over distributions with
// support on at most two arms. A zero numerator counts as ratio 0.
RatioMinimum minimize_information_ratio(std::span<const double> delta, std::span<const double> v);

// Arm with the highest mean averaged over the samples; lowest index on ties.
std::size_t greedy_arm(SampleSet samples);

ActionDistribution blasts_policy(SampleSet samples, double beta, const BAConfig& cfg);
ActionDistribution vids_policy(SampleSet samples);
ActionDistribution vblaids_policy(SampleSet samples, double beta, const BAConfig& cfg);

// Minimized information ratio with the optimal action as target.
double optimal_action_ratio(SampleSet samples);
double beta_from_ratio(double psi, double beta_max);
double adaptive_beta(SampleSet samples, double beta_max);

// One BLASTS draw from a solved target: a uniformly chosen sample's channel
// row, then an arm from that row. Marginally distributed as the target's q.
std::size_t sample_target_action(const BASolution& target, Rng& rng);

std::size_t blasts_action(const PosteriorState& state, const AgentConfig& cfg, Rng& rng);
std::size_t vids_action(const PosteriorState& state, const AgentConfig& cfg, Rng& rng);
std::size_t vblaids_action(const PosteriorState& state, const AgentConfig& cfg, Rng& rng);

enum class AgentKind { Thompson, Satisficing, Blasts, VarianceIds, VarianceBlaids };

// A named agent as it appears in configs: `ts`, `sts:eps`, `blasts:beta`,
// `vids`, `vblaids:beta`, `vblaids:adaptive` (blasts accepts `adaptive` too).
struct Agent {
    AgentKind kind = AgentKind::Thompson;
    AgentConfig cfg;

    std::string name() const;
    // Parameter tag written to the records: beta, epsilon, "adaptive" or "".
    std::string param() const;

    std::size_t act(const PosteriorState& state, Rng& rng) const;
};

Agent parse_agent(std::string_view token, const AgentConfig& defaults = {});

// Formats doubles the way agent tags and CSV fields do: shortest string
// that round-trips.
std::string format_double(double x);

} // namespace rdbandit
