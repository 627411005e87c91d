#include "rdbandit/error.hpp"
#include "rdbandit/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

namespace rdbandit {

namespace {

// One agent's trajectory on a fixed true environment. The reward for the
// n-th pull of arm a comes from a stream keyed by (trial, a, n), so every
// agent sees the same noise for the same pull.
std::vector<TrialRecord> run_agent(const ExperimentConfig& cfg, const EnvironmentRealization& env,
                                   std::size_t trial, std::size_t agent_index) {
    const Agent& agent = cfg.agents[agent_index];
    const std::string name = agent.name();
    const std::string param = agent.param();

    Rng action_rng = Rng::derive(cfg.master_seed, {key(StreamPurpose::Agent), trial, agent_index});
    PosteriorState state = PosteriorState::prior(cfg.spec);
    std::vector<std::uint64_t> pulls(env.n_arms(), 0);
    const double best = env.best_mean();

    std::vector<TrialRecord> out;
    out.reserve(cfg.horizon);
    double cumulative = 0.0;
    for (std::size_t t = 1; t <= cfg.horizon; ++t) {
        const std::size_t arm = agent.act(state, action_rng);
        Rng reward_rng = Rng::derive(cfg.master_seed, {key(StreamPurpose::Reward), trial, arm, pulls[arm]++});
        const double reward = sample_reward(env, arm, cfg.spec, reward_rng);
        state = update_posterior(state, arm, reward);

        const double regret = best - env.means[arm];
        cumulative += regret;
        out.push_back({name, param, trial, t, regret, cumulative});
    }
    return out;
}

// records[agent] for one trial.
std::vector<std::vector<TrialRecord>> run_trial(const ExperimentConfig& cfg, std::size_t trial) {
    Rng env_rng = Rng::derive(cfg.master_seed, {key(StreamPurpose::Environment), trial});
    const EnvironmentRealization env = sample_environment(cfg.spec, env_rng);
    std::vector<std::vector<TrialRecord>> out;
    out.reserve(cfg.agents.size());
    for (std::size_t a = 0; a < cfg.agents.size(); ++a) out.push_back(run_agent(cfg, env, trial, a));
    return out;
}

} // namespace

std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg) {
    cfg.validate();

    std::size_t workers = cfg.threads != 0 ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, cfg.trials);

    std::vector<std::vector<std::vector<TrialRecord>>> per_trial(cfg.trials);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto work = [&] {
        for (std::size_t t = next++; t < cfg.trials; t = next++) {
            try {
                per_trial[t] = run_trial(cfg, t);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = cfg.trials;
            }
        }
    };

    if (workers <= 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t i = 0; i < workers; ++i) pool.emplace_back(work);
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<TrialRecord> records;
    records.reserve(cfg.agents.size() * cfg.trials * cfg.horizon);
    for (std::size_t a = 0; a < cfg.agents.size(); ++a)
        for (std::size_t t = 0; t < cfg.trials; ++t)
            for (auto& r : per_trial[t][a]) records.push_back(std::move(r));
    return records;
}

std::vector<SummaryRow> summarize(std::span<const TrialRecord> records) {
    // Group order follows first appearance so summaries line up with configs.
    std::vector<std::pair<std::string, std::string>> groups;
    std::map<std::pair<std::string, std::string>, std::map<std::size_t, std::vector<double>>> values;
    for (const auto& r : records) {
        auto group = std::make_pair(r.agent, r.param);
        auto it = values.find(group);
        if (it == values.end()) {
            groups.push_back(group);
            it = values.emplace(group, std::map<std::size_t, std::vector<double>>{}).first;
        }
        it->second[r.period].push_back(r.cum_regret);
    }

    std::vector<SummaryRow> rows;
    for (const auto& group : groups) {
        for (const auto& [period, xs] : values.at(group)) {
            SummaryRow row{group.first, group.second, period, xs.size(), 0.0, std::nullopt, std::nullopt};
            double sum = 0.0;
            for (double x : xs) sum += x;
            row.mean = sum / static_cast<double>(xs.size());
            if (xs.size() >= 2) {
                double ss = 0.0;
                for (double x : xs) ss += (x - row.mean) * (x - row.mean);
                const double sd = std::sqrt(ss / static_cast<double>(xs.size() - 1));
                const double half = 1.96 * sd / std::sqrt(static_cast<double>(xs.size()));
                row.ci_low = row.mean - half;
                row.ci_high = row.mean + half;
            }
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

} // namespace rdbandit
