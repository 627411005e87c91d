#include "rdbandit/agents.hpp"

#include "rdbandit/error.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <limits>

namespace rdbandit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_samples(SampleSet samples) {
    if (samples.empty()) throw ValidationError("agents: no posterior samples");
    const std::size_t arms = samples.front().n_arms();
    if (arms == 0) throw ValidationError("agents: samples have no arms");
    for (const auto& s : samples)
        if (s.n_arms() != arms) throw ValidationError("agents: samples disagree on arm count");
}

void check_target(SampleSet samples, const BASolution& target) {
    check_samples(samples);
    if (target.channel.rows() != samples.size() || target.channel.cols() != samples.front().n_arms())
        throw ValidationError("agents: target channel does not match the samples");
}

std::vector<double> sample_average_means(SampleSet samples) {
    const std::size_t arms = samples.front().n_arms();
    std::vector<double> avg(arms, 0.0);
    for (const auto& s : samples)
        for (std::size_t a = 0; a < arms; ++a) avg[a] += s.means[a];
    for (double& x : avg) x /= static_cast<double>(samples.size());
    return avg;
}

double ratio_value(double regret, double info) {
    if (regret == 0.0) return 0.0;
    if (info <= 0.0) return kInf;
    return regret * regret / info;
}

ActionDistribution point_mass(std::size_t n, std::size_t at) {
    ActionDistribution d;
    d.probs.assign(n, 0.0);
    d.probs[at] = 1.0;
    return d;
}

std::vector<EnvironmentRealization> draw(const PosteriorState& state, std::size_t z, Rng& rng) {
    return sample_posterior_means(state, z, rng);
}

double resolve_beta(const AgentConfig& cfg, SampleSet samples) {
    return cfg.beta.adaptive ? adaptive_beta(samples, cfg.beta_max) : cfg.beta.value;
}

ActionDistribution ids_policy(SampleSet samples, const BASolution& target) {
    const auto delta = expected_regret_vector(samples, target);
    const auto v = variance_info_gain(samples, target);
    auto best = minimize_information_ratio(delta, v);
    if (best.degenerate) return point_mass(delta.size(), greedy_arm(samples));
    return std::move(best.policy);
}

void require_variance_z(const AgentConfig& cfg) {
    cfg.validate();
    if (cfg.z < 2) throw ValidationError("variance agents need at least two posterior samples");
}

} // namespace

std::size_t ActionDistribution::sample(Rng& rng) const {
    if (probs.empty()) throw ValidationError("action distribution is empty");
    const double u = rng.uniform();
    double acc = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t a = 0; a < probs.size(); ++a) {
        if (probs[a] <= 0.0) continue;
        acc += probs[a];
        last_positive = a;
        if (u < acc) return a;
    }
    return last_positive;
}

void AgentConfig::validate() const {
    if (z < 1) throw ValidationError("agent config: z must be at least 1");
    if (!beta.adaptive && (std::isnan(beta.value) || beta.value < 0.0))
        throw ValidationError("agent config: beta must be >= 0");
    if (!(beta_max > 0.0)) throw ValidationError("agent config: beta_max must be positive");
    if (std::isnan(epsilon) || epsilon < 0.0) throw ValidationError("agent config: epsilon must be >= 0");
    ba.validate();
}

std::size_t thompson_action(const PosteriorState& state, Rng& rng) {
    return sample_posterior_mean(state, rng).best_arm();
}

std::size_t satisficing_arm(const EnvironmentRealization& env, double epsilon) {
    if (std::isnan(epsilon) || epsilon < 0.0) throw ValidationError("satisficing_arm: epsilon must be >= 0");
    const double threshold = env.best_mean() - epsilon;
    for (std::size_t a = 0; a < env.n_arms(); ++a)
        if (env.means[a] >= threshold) return a;
    return env.best_arm();
}

std::size_t sts_action(const PosteriorState& state, double epsilon, Rng& rng) {
    return satisficing_arm(sample_posterior_mean(state, rng), epsilon);
}

BASolution solve_target(SampleSet samples, double beta, const BAConfig& cfg) {
    check_samples(samples);
    return blahut_arimoto(Distribution::uniform(samples.size()), squared_regret_distortion(samples), beta,
                          cfg);
}

BASolution optimal_action_target(SampleSet samples) {
    check_samples(samples);
    const std::size_t z = samples.size();
    const std::size_t arms = samples.front().n_arms();
    BASolution sol;
    sol.channel = Matrix(z, arms);
    std::vector<double> counts(arms, 0.0);
    for (std::size_t e = 0; e < z; ++e) {
        const std::size_t best = samples[e].best_arm();
        sol.channel(e, best) = 1.0;
        counts[best] += 1.0;
    }
    sol.marginal = Distribution::from_counts(counts);
    sol.rate = entropy(sol.marginal);
    sol.distortion = 0.0;
    sol.beta = kInf;
    sol.converged = true;
    return sol;
}

std::vector<double> expected_regret_vector(SampleSet samples, const BASolution& target) {
    check_target(samples, target);
    const double inv_z = 1.0 / static_cast<double>(samples.size());
    const std::size_t arms = samples.front().n_arms();
    double target_value = 0.0;
    for (std::size_t e = 0; e < samples.size(); ++e)
        for (std::size_t x = 0; x < arms; ++x) target_value += target.channel(e, x) * samples[e].means[x];
    target_value *= inv_z;

    const auto avg = sample_average_means(samples);
    std::vector<double> delta(arms);
    for (std::size_t a = 0; a < arms; ++a) delta[a] = std::max(0.0, target_value - avg[a]);
    return delta;
}

std::vector<double> variance_info_gain(SampleSet samples, const BASolution& target) {
    check_target(samples, target);
    const std::size_t z = samples.size();
    const std::size_t arms = samples.front().n_arms();
    const double zd = static_cast<double>(z);

    // With c_e = p(x|e) - p(x|0) and its mean c, q(x) = p(x|0) + c and
    // E[mean(a) | x] - E[mean(a)] = sum_e (c_e - c) mean_e(a) / (z q(x)).
    // Rows that agree exactly therefore contribute exactly zero.
    std::vector<double> shift(z);
    std::vector<double> v(arms, 0.0);
    for (std::size_t x = 0; x < arms; ++x) {
        const double base = target.channel(0, x);
        double mean_shift = 0.0;
        for (std::size_t e = 0; e < z; ++e) mean_shift += shift[e] = target.channel(e, x) - base;
        mean_shift /= zd;
        const double q = base + mean_shift;
        if (q <= 0.0) continue;
        for (std::size_t a = 0; a < arms; ++a) {
            double s = 0.0;
            for (std::size_t e = 0; e < z; ++e) s += (shift[e] - mean_shift) * samples[e].means[a];
            v[a] += s * s / (zd * zd * q);
        }
    }
    return v;
}

RatioMinimum minimize_information_ratio(std::span<const double> delta, std::span<const double> v) {
    if (delta.empty() || delta.size() != v.size())
        throw ValidationError("minimize_information_ratio: delta and v must be nonempty and equal length");
    for (std::size_t a = 0; a < delta.size(); ++a)
        if (!(delta[a] >= 0.0) || !(v[a] >= 0.0) || !std::isfinite(delta[a]) || !std::isfinite(v[a]))
            throw ValidationError("minimize_information_ratio: entries must be finite and nonnegative");

    const std::size_t n = delta.size();
    auto info = [&](std::size_t a) { return v[a] > kNegligibleInformation ? v[a] : 0.0; };

    const bool any_information = std::any_of(v.begin(), v.end(), [](double x) { return x > kNegligibleInformation; });
    if (!any_information) {
        const std::size_t at = static_cast<std::size_t>(std::min_element(delta.begin(), delta.end()) - delta.begin());
        return {point_mass(n, at), delta[at] == 0.0 ? 0.0 : kInf, true};
    }

    double best_ratio = kInf;
    std::size_t best_i = 0, best_j = 0;
    double best_weight = 0.0; // mass on best_j
    for (std::size_t a = 0; a < n; ++a) {
        const double r = ratio_value(delta[a], info(a));
        if (r < best_ratio) {
            best_ratio = r;
            best_i = best_j = a;
            best_weight = 0.0;
        }
    }

    // Along pi -> (1 - pi) e_i + pi e_j the ratio is (a + b pi)^2 / (c + d pi),
    // convex where the denominator is positive, with stationary point
    // pi* = (d a - 2 b c) / (b d).
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double a = delta[i], b = delta[j] - delta[i];
            const double c = info(i), d = info(j) - info(i);
            if (b == 0.0 || d == 0.0) continue;
            const double pi = (d * a - 2.0 * b * c) / (b * d);
            if (!(pi > 0.0 && pi < 1.0)) continue;
            const double r = ratio_value(a + b * pi, c + d * pi);
            if (r < best_ratio) {
                best_ratio = r;
                best_i = i;
                best_j = j;
                best_weight = pi;
            }
        }
    }

    RatioMinimum out;
    out.policy.probs.assign(n, 0.0);
    out.policy.probs[best_i] += 1.0 - best_weight;
    out.policy.probs[best_j] += best_weight;
    out.ratio = best_ratio;
    return out;
}

std::size_t greedy_arm(SampleSet samples) {
    check_samples(samples);
    const auto avg = sample_average_means(samples);
    return static_cast<std::size_t>(std::max_element(avg.begin(), avg.end()) - avg.begin());
}

ActionDistribution blasts_policy(SampleSet samples, double beta, const BAConfig& cfg) {
    const auto target = solve_target(samples, beta, cfg);
    const auto q = target.marginal.probs();
    return ActionDistribution{{q.begin(), q.end()}};
}

ActionDistribution vids_policy(SampleSet samples) { return ids_policy(samples, optimal_action_target(samples)); }

ActionDistribution vblaids_policy(SampleSet samples, double beta, const BAConfig& cfg) {
    return ids_policy(samples, solve_target(samples, beta, cfg));
}

double optimal_action_ratio(SampleSet samples) {
    const auto target = optimal_action_target(samples);
    return minimize_information_ratio(expected_regret_vector(samples, target), variance_info_gain(samples, target))
        .ratio;
}

double beta_from_ratio(double psi, double beta_max) {
    if (std::isnan(psi) || psi < 0.0) throw ValidationError("beta_from_ratio: ratio must be >= 0");
    if (psi <= 1e-12) return beta_max;
    return 1.0 / psi;
}

double adaptive_beta(SampleSet samples, double beta_max) {
    return beta_from_ratio(optimal_action_ratio(samples), beta_max);
}

std::size_t sample_target_action(const BASolution& target, Rng& rng) {
    const std::size_t n = target.channel.rows();
    if (n == 0) throw ValidationError("sample_target_action: empty channel");
    const std::size_t e = static_cast<std::size_t>(rng.uniform() * static_cast<double>(n));
    const auto row = target.channel.row(std::min(e, n - 1));
    return ActionDistribution{{row.begin(), row.end()}}.sample(rng);
}

std::size_t blasts_action(const PosteriorState& state, const AgentConfig& cfg, Rng& rng) {
    cfg.validate();
    const auto samples = draw(state, cfg.z, rng);
    return sample_target_action(solve_target(samples, resolve_beta(cfg, samples), cfg.ba), rng);
}

std::size_t vids_action(const PosteriorState& state, const AgentConfig& cfg, Rng& rng) {
    require_variance_z(cfg);
    const auto samples = draw(state, cfg.z, rng);
    return vids_policy(samples).sample(rng);
}

std::size_t vblaids_action(const PosteriorState& state, const AgentConfig& cfg, Rng& rng) {
    require_variance_z(cfg);
    const auto samples = draw(state, cfg.z, rng);
    return vblaids_policy(samples, resolve_beta(cfg, samples), cfg.ba).sample(rng);
}

std::string Agent::name() const {
    switch (kind) {
    case AgentKind::Thompson: return "ts";
    case AgentKind::Satisficing: return "sts";
    case AgentKind::Blasts: return "blasts";
    case AgentKind::VarianceIds: return "vids";
    case AgentKind::VarianceBlaids: return "vblaids";
    }
    return "unknown";
}

std::string Agent::param() const {
    switch (kind) {
    case AgentKind::Satisficing: return format_double(cfg.epsilon);
    case AgentKind::Blasts:
    case AgentKind::VarianceBlaids: return cfg.beta.adaptive ? "adaptive" : format_double(cfg.beta.value);
    default: return "";
    }
}

std::size_t Agent::act(const PosteriorState& state, Rng& rng) const {
    switch (kind) {
    case AgentKind::Thompson: return thompson_action(state, rng);
    case AgentKind::Satisficing: return sts_action(state, cfg.epsilon, rng);
    case AgentKind::Blasts: return blasts_action(state, cfg, rng);
    case AgentKind::VarianceIds: return vids_action(state, cfg, rng);
    case AgentKind::VarianceBlaids: return vblaids_action(state, cfg, rng);
    }
    throw ValidationError("unknown agent kind");
}

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_number(std::string_view text, std::string_view token) {
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc{} || ptr != end || !std::isfinite(value))
        throw ConfigError("agent '" + std::string(token) + "': bad numeric parameter '" + std::string(text) + "'");
    return value;
}

} // namespace

Agent parse_agent(std::string_view token, const AgentConfig& defaults) {
    const std::string_view t = trim(token);
    const auto colon = t.find(':');
    const std::string_view name = trim(t.substr(0, colon));
    const std::string_view arg = colon == std::string_view::npos ? std::string_view{} : trim(t.substr(colon + 1));
    const bool has_arg = colon != std::string_view::npos;

    Agent agent;
    agent.cfg = defaults;
    auto need_arg = [&](const char* what) {
        if (!has_arg || arg.empty())
            throw ConfigError("agent '" + std::string(t) + "' needs a " + what + " parameter");
    };
    auto no_arg = [&] {
        if (has_arg) throw ConfigError("agent '" + std::string(t) + "' takes no parameter");
    };
    auto beta_arg = [&] {
        need_arg("beta");
        agent.cfg.beta = arg == "adaptive" ? BetaChoice::adaptive_rule() : BetaChoice::fixed(parse_number(arg, t));
    };

    if (name == "ts") {
        no_arg();
        agent.kind = AgentKind::Thompson;
    } else if (name == "sts") {
        need_arg("epsilon");
        agent.kind = AgentKind::Satisficing;
        agent.cfg.epsilon = parse_number(arg, t);
    } else if (name == "blasts") {
        agent.kind = AgentKind::Blasts;
        beta_arg();
    } else if (name == "vids") {
        no_arg();
        agent.kind = AgentKind::VarianceIds;
    } else if (name == "vblaids") {
        agent.kind = AgentKind::VarianceBlaids;
        beta_arg();
    } else {
        throw ConfigError("unknown agent '" + std::string(t) + "'");
    }
    try {
        agent.cfg.validate();
    } catch (const ValidationError& e) {
        throw ConfigError("agent '" + std::string(t) + "': " + e.what());
    }
    if ((agent.kind == AgentKind::VarianceIds || agent.kind == AgentKind::VarianceBlaids) && agent.cfg.z < 2)
        throw ConfigError("agent '" + std::string(t) + "' needs z >= 2");
    return agent;
}

std::string format_double(double x) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), ptr);
}

} // namespace rdbandit
