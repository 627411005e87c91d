#include "rdbandit/bandit.hpp"

#include "rdbandit/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

namespace rdbandit {

namespace {

template <class Prior>
Prior broadcast(const std::vector<Prior>& priors, std::size_t arm) {
    return priors.size() == 1 ? priors.front() : priors.at(arm);
}

double sample_beta(double a, double b, Rng& rng) {
    std::gamma_distribution<double> ga(a, 1.0);
    std::gamma_distribution<double> gb(b, 1.0);
    const double x = ga(rng);
    const double y = gb(rng);
    // Both draws underflow only for vanishing shapes; fall back to the mean.
    if (x + y <= 0.0) return a / (a + b);
    return x / (x + y);
}

double standard_normal(Rng& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    return n(rng);
}

void check_arm(std::size_t arm, std::size_t n_arms) {
    if (arm >= n_arms)
        throw ValidationError("arm " + std::to_string(arm) + " out of range for " +
                              std::to_string(n_arms) + " arms");
}

} // namespace

std::string_view to_string(ArmKind kind) {
    return kind == ArmKind::Bernoulli ? "bernoulli" : "gaussian";
}

BetaPrior BanditSpec::beta_prior(std::size_t arm) const { return broadcast(beta_priors, arm); }
NormalPrior BanditSpec::normal_prior(std::size_t arm) const { return broadcast(normal_priors, arm); }

void BanditSpec::validate() const {
    if (n_arms < 1) throw ValidationError("bandit spec: need at least one arm");
    if (kind == ArmKind::Bernoulli) {
        if (beta_priors.size() != 1 && beta_priors.size() != n_arms)
            throw ValidationError("bandit spec: Beta priors must be a single value or one per arm");
        for (const auto& p : beta_priors)
            if (!(p.a > 0.0 && p.b > 0.0) || !std::isfinite(p.a) || !std::isfinite(p.b))
                throw ValidationError("bandit spec: Beta prior parameters must be positive");
    } else {
        if (normal_priors.size() != 1 && normal_priors.size() != n_arms)
            throw ValidationError("bandit spec: Normal priors must be a single value or one per arm");
        for (const auto& p : normal_priors)
            if (!(p.var > 0.0) || !std::isfinite(p.var) || !std::isfinite(p.mean))
                throw ValidationError("bandit spec: Normal prior variance must be positive");
        if (!(noise_var > 0.0) || !std::isfinite(noise_var))
            throw ValidationError("bandit spec: noise variance must be positive");
    }
}

std::size_t EnvironmentRealization::best_arm() const {
    if (means.empty()) throw ValidationError("environment has no arms");
    return static_cast<std::size_t>(std::max_element(means.begin(), means.end()) - means.begin());
}

double EnvironmentRealization::best_mean() const { return means[best_arm()]; }

EnvironmentRealization sample_environment(const BanditSpec& spec, Rng& rng) {
    spec.validate();
    EnvironmentRealization env;
    env.means.reserve(spec.n_arms);
    for (std::size_t a = 0; a < spec.n_arms; ++a) {
        if (spec.kind == ArmKind::Bernoulli) {
            const auto p = spec.beta_prior(a);
            env.means.push_back(sample_beta(p.a, p.b, rng));
        } else {
            const auto p = spec.normal_prior(a);
            env.means.push_back(p.mean + std::sqrt(p.var) * standard_normal(rng));
        }
    }
    return env;
}

double sample_reward(const EnvironmentRealization& env, std::size_t arm, const BanditSpec& spec,
                     Rng& rng) {
    check_arm(arm, env.n_arms());
    const double mean = env.means[arm];
    if (spec.kind == ArmKind::Bernoulli) return rng.uniform() < mean ? 1.0 : 0.0;
    if (!(spec.noise_var > 0.0)) throw ValidationError("sample_reward: noise variance must be positive");
    return mean + std::sqrt(spec.noise_var) * standard_normal(rng);
}

PosteriorState PosteriorState::prior(const BanditSpec& spec) {
    spec.validate();
    PosteriorState s;
    if (spec.kind == ArmKind::Bernoulli) {
        std::vector<BetaBelief> arms;
        for (std::size_t a = 0; a < spec.n_arms; ++a) arms.push_back({spec.beta_prior(a).a, spec.beta_prior(a).b});
        s.arms_ = std::move(arms);
    } else {
        std::vector<NormalBelief> arms;
        for (std::size_t a = 0; a < spec.n_arms; ++a) {
            const auto p = spec.normal_prior(a);
            arms.push_back({1.0 / p.var, p.mean / p.var});
        }
        s.arms_ = std::move(arms);
        s.noise_var_ = spec.noise_var;
    }
    return s;
}

std::size_t PosteriorState::n_arms() const noexcept {
    return std::visit([](const auto& v) { return v.size(); }, arms_);
}

double PosteriorState::mean(std::size_t arm) const {
    check_arm(arm, n_arms());
    return std::visit([arm](const auto& v) { return v[arm].mean(); }, arms_);
}

std::span<const BetaBelief> PosteriorState::beta() const {
    if (const auto* v = std::get_if<std::vector<BetaBelief>>(&arms_)) return *v;
    return {};
}

std::span<const NormalBelief> PosteriorState::normal() const {
    if (const auto* v = std::get_if<std::vector<NormalBelief>>(&arms_)) return *v;
    return {};
}

bool operator==(const PosteriorState& a, const PosteriorState& b) {
    if (a.kind() != b.kind() || a.n_arms() != b.n_arms()) return false;
    if (a.kind() == ArmKind::Bernoulli) {
        return std::equal(a.beta().begin(), a.beta().end(), b.beta().begin(),
                          [](const auto& x, const auto& y) { return x.a == y.a && x.b == y.b; });
    }
    return a.noise_var_ == b.noise_var_ &&
           std::equal(a.normal().begin(), a.normal().end(), b.normal().begin(), [](const auto& x, const auto& y) {
               return x.precision == y.precision && x.weighted == y.weighted;
           });
}

PosteriorState update_posterior(const PosteriorState& state, std::size_t arm, double reward) {
    check_arm(arm, state.n_arms());
    PosteriorState next = state;
    if (auto* beta = std::get_if<std::vector<BetaBelief>>(&next.arms_)) {
        if (reward != 0.0 && reward != 1.0)
            throw ValidationError("update_posterior: Bernoulli reward must be 0 or 1");
        (*beta)[arm].a += reward;
        (*beta)[arm].b += 1.0 - reward;
    } else {
        if (!std::isfinite(reward)) throw ValidationError("update_posterior: reward must be finite");
        auto& belief = std::get<std::vector<NormalBelief>>(next.arms_)[arm];
        const double noise_precision = 1.0 / next.noise_var_;
        belief.precision += noise_precision;
        belief.weighted += noise_precision * reward;
    }
    return next;
}

EnvironmentRealization sample_posterior_mean(const PosteriorState& state, Rng& rng) {
    EnvironmentRealization env;
    env.means.reserve(state.n_arms());
    if (const auto* beta = std::get_if<std::vector<BetaBelief>>(&state.arms_)) {
        for (const auto& b : *beta) env.means.push_back(sample_beta(b.a, b.b, rng));
    } else {
        for (const auto& n : std::get<std::vector<NormalBelief>>(state.arms_))
            env.means.push_back(n.mean() + std::sqrt(n.var()) * standard_normal(rng));
    }
    return env;
}

std::vector<EnvironmentRealization> sample_posterior_means(const PosteriorState& state,
                                                           std::size_t z, Rng& rng) {
    if (z < 1) throw ValidationError("sample_posterior_means: z must be at least 1");
    std::vector<EnvironmentRealization> out;
    out.reserve(z);
    for (std::size_t i = 0; i < z; ++i) out.push_back(sample_posterior_mean(state, rng));
    return out;
}

DistortionMatrix squared_regret_distortion(std::span<const EnvironmentRealization> samples,
                                           std::span<const std::size_t> actions) {
    if (samples.empty()) throw ValidationError("squared_regret_distortion: no samples");
    if (actions.empty()) throw ValidationError("squared_regret_distortion: no actions");
    Matrix d(samples.size(), actions.size());
    std::vector<std::string> cols;
    cols.reserve(actions.size());
    for (std::size_t a : actions) cols.push_back(std::to_string(a));
    for (std::size_t e = 0; e < samples.size(); ++e) {
        const auto& means = samples[e].means;
        double best = -std::numeric_limits<double>::infinity();
        for (std::size_t a : actions) {
            check_arm(a, means.size());
            best = std::max(best, means[a]);
        }
        for (std::size_t j = 0; j < actions.size(); ++j) {
            const double gap = best - means[actions[j]];
            d(e, j) = gap * gap;
        }
    }
    return DistortionMatrix(index_labels(samples.size()), std::move(cols), std::move(d));
}

DistortionMatrix squared_regret_distortion(std::span<const EnvironmentRealization> samples) {
    if (samples.empty()) throw ValidationError("squared_regret_distortion: no samples");
    std::vector<std::size_t> all(samples.front().n_arms());
    for (std::size_t a = 0; a < all.size(); ++a) all[a] = a;
    return squared_regret_distortion(samples, all);
}

} // namespace rdbandit
