#include "rdbandit/agents.hpp"
#include "rdbandit/bandit.hpp"
#include "rdbandit/rd_solver.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace rdbandit;

namespace {

std::vector<EnvironmentRealization> prior_samples(std::size_t z, std::size_t arms, std::uint64_t seed) {
    BanditSpec spec;
    spec.n_arms = arms;
    Rng rng(seed);
    return sample_posterior_means(PosteriorState::prior(spec), z, rng);
}

void BM_SolveTarget(benchmark::State& state) {
    const auto samples = prior_samples(static_cast<std::size_t>(state.range(0)), 10, 1);
    const double beta = static_cast<double>(state.range(1));
    for (auto _ : state) benchmark::DoNotOptimize(solve_target(samples, beta, BAConfig{}));
}
BENCHMARK(BM_SolveTarget)->Args({16, 1})->Args({16, 100})->Args({32, 100})->Args({64, 100});

void BM_VidsPolicy(benchmark::State& state) {
    const auto samples = prior_samples(16, 10, 2);
    for (auto _ : state) benchmark::DoNotOptimize(vids_policy(samples));
}
BENCHMARK(BM_VidsPolicy);

void BM_AgentStep(benchmark::State& state) {
    static const char* tokens[] = {"ts", "blasts:100", "vids", "vblaids:100", "vblaids:adaptive"};
    const auto agent = parse_agent(tokens[state.range(0)]);
    BanditSpec spec;
    spec.n_arms = 10;
    const auto posterior = PosteriorState::prior(spec);
    Rng rng(3);
    for (auto _ : state) benchmark::DoNotOptimize(agent.act(posterior, rng));
    state.SetLabel(tokens[state.range(0)]);
}
BENCHMARK(BM_AgentStep)->DenseRange(0, 4);

} // namespace
BENCHMARK_MAIN();
