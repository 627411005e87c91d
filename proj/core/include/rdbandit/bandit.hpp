#pragma once

// Independent Bernoulli and Gaussian bandits with exact conjugate beliefs.

#include "rdbandit/rd_solver.hpp"
#include "rdbandit/rng.hpp"

#include <cstddef>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

namespace rdbandit {

enum class ArmKind { Bernoulli, Gaussian };

std::string_view to_string(ArmKind kind);

struct BetaPrior {
    double a = 1.0;
    double b = 1.0;
};

struct NormalPrior {
    double mean = 0.0;
    double var = 1.0;
};

struct BanditSpec {
    ArmKind kind = ArmKind::Bernoulli;
    std::size_t n_arms = 10;
    // Either one entry (shared by every arm) or n_arms entries. Only the
    // vector matching `kind` is consulted.
    std::vector<BetaPrior> beta_priors{BetaPrior{}};
    std::vector<NormalPrior> normal_priors{NormalPrior{}};
    double noise_var = 1.0; // Gaussian rewards only

    BetaPrior beta_prior(std::size_t arm) const;
    NormalPrior normal_prior(std::size_t arm) const;

    void validate() const;
};

struct EnvironmentRealization {
    std::vector<double> means;

    std::size_t n_arms() const noexcept { return means.size(); }
    // Lowest index among the arms with the largest mean.
    std::size_t best_arm() const;
    double best_mean() const;
};

EnvironmentRealization sample_environment(const BanditSpec& spec, Rng& rng);

double sample_reward(const EnvironmentRealization& env, std::size_t arm, const BanditSpec& spec,
                     Rng& rng);

struct BetaBelief {
    double a = 1.0;
    double b = 1.0;

    double mean() const noexcept { return a / (a + b); }
};

// Normal belief in natural parameters so repeated updates stay exact:
// precision = 1/var, weighted = mean * precision.
struct NormalBelief {
    double precision = 1.0;
    double weighted = 0.0;

    double mean() const noexcept { return weighted / precision; }
    double var() const noexcept { return 1.0 / precision; }
};

class PosteriorState {
public:
    static PosteriorState prior(const BanditSpec& spec);

    ArmKind kind() const noexcept {
        return std::holds_alternative<std::vector<BetaBelief>>(arms_) ? ArmKind::Bernoulli
                                                                     : ArmKind::Gaussian;
    }
    std::size_t n_arms() const noexcept;
    double noise_var() const noexcept { return noise_var_; }
    double mean(std::size_t arm) const;

    std::span<const BetaBelief> beta() const;
    std::span<const NormalBelief> normal() const;

    friend bool operator==(const PosteriorState&, const PosteriorState&);

private:
    friend PosteriorState update_posterior(const PosteriorState&, std::size_t, double);
    friend EnvironmentRealization sample_posterior_mean(const PosteriorState&, Rng&);

    std::variant<std::vector<BetaBelief>, std::vector<NormalBelief>> arms_;
    double noise_var_ = 1.0;
};

PosteriorState update_posterior(const PosteriorState& state, std::size_t arm, double reward);

// One joint draw of every arm's mean.
EnvironmentRealization sample_posterior_mean(const PosteriorState& state, Rng& rng);
std::vector<EnvironmentRealization> sample_posterior_means(const PosteriorState& state,
                                                           std::size_t z, Rng& rng);

// d(e, a) = (max_b mean_e(b) - mean_e(a))^2 with both a and b ranging over
// `actions`. Rows follow `samples`, columns follow `actions`.
DistortionMatrix squared_regret_distortion(std::span<const EnvironmentRealization> samples,
                                           std::span<const std::size_t> actions);
DistortionMatrix squared_regret_distortion(std::span<const EnvironmentRealization> samples);

} // namespace rdbandit
