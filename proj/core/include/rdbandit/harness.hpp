#pragma once

// Experiment orchestration: multi-trial regret runs, the learned-target vs
// satisficing-target comparison, summaries, and their file formats.

#include "rdbandit/agents.hpp"
#include "rdbandit/bandit.hpp"

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rdbandit {

struct ExperimentConfig {
    BanditSpec spec;
    std::size_t horizon = 0;
    std::size_t trials = 20;
    std::uint64_t master_seed = 0;
    std::vector<Agent> agents;
    std::filesystem::path output_path = "regret.csv";
    // 0 selects std::thread::hardware_concurrency().
    std::size_t threads = 0;

    void validate() const;
};

// Flat `key = value` file; `#` starts a comment. Keys:
//   kind        bernoulli | gaussian            (default bernoulli)
//   arms        number of arms                   (default 10)
//   prior_a, prior_b        Beta prior, scalar or one value per arm
//   prior_mean, prior_var   Normal prior, scalar or one value per arm
//   noise_var   Gaussian reward noise variance   (default 1)
//   horizon     periods per trial                (required)
//   trials      independent trials               (default 20)
//   seed        master seed                      (default 0)
//   agents      comma-separated agent tokens     (required)
//   z           posterior samples per step       (default 16)
//   beta_max    adaptive-beta cap                (default 1e6)
//   ba_max_iters, ba_tol    solver budget        (defaults 10000, 1e-9)
//   output      CSV path                         (default regret.csv)
//   threads     worker threads, 0 = hardware     (default 0)
ExperimentConfig load_config(const std::filesystem::path& path);
ExperimentConfig parse_config(std::istream& in);

// The subset of a config file that describes the bandit and the solver,
// used by the target comparison. `horizon` and `agents` are not required.
struct CompareSettings {
    BanditSpec spec;
    std::size_t z = 16;
    std::uint64_t seed = 0;
    BAConfig ba;
};

CompareSettings load_compare_settings(const std::filesystem::path& path);
CompareSettings parse_compare_settings(std::istream& in);

struct TrialRecord {
    std::string agent;
    std::string param;
    std::size_t trial = 0;
    std::size_t period = 0; // 1-based
    double regret = 0.0;
    double cum_regret = 0.0;

    friend bool operator==(const TrialRecord&, const TrialRecord&) = default;
};

// Records are ordered by (agent position in cfg.agents, trial, period).
std::vector<TrialRecord> run_experiment(const ExperimentConfig& cfg);

inline constexpr const char* kRecordHeader = "agent,param,trial,period,regret,cum_regret";

void write_records(std::span<const TrialRecord> records, std::ostream& out);
void write_records(std::span<const TrialRecord> records, const std::filesystem::path& path);
std::vector<TrialRecord> read_records(std::istream& in);
std::vector<TrialRecord> read_records(const std::filesystem::path& path);

struct SummaryRow {
    std::string agent;
    std::string param;
    std::size_t period = 0;
    std::size_t n_trials = 0;
    double mean = 0.0;
    // Normal-approximation 95% band; empty for a single trial.
    std::optional<double> ci_low;
    std::optional<double> ci_high;
};

// Mean cumulative regret per (agent, param, period) with mean +- 1.96 sd/sqrt(n).
std::vector<SummaryRow> summarize(std::span<const TrialRecord> records);
void write_summary(std::span<const SummaryRow> rows, std::ostream& out);

enum class TargetMethod { BlahutArimoto, Satisficing };

struct RDPoint {
    TargetMethod method = TargetMethod::BlahutArimoto;
    double param = 0.0; // beta or epsilon
    double rate = 0.0;  // bits
    double distortion = 0.0;
};

// Channel e -> first arm within epsilon of the sample's best.
Matrix satisficing_channel(std::span<const EnvironmentRealization> samples, double epsilon);

struct TargetComparison {
    std::vector<EnvironmentRealization> samples;
    std::vector<RDPoint> points;
};

// Draws z prior samples once, traces the solver's curve over `betas` and
// evaluates the satisficing target for each epsilon on the same samples.
TargetComparison compare_targets(const BanditSpec& spec, std::span<const double> betas,
                                 std::span<const double> epsilons, std::size_t z,
                                 std::uint64_t seed, const BAConfig& cfg = {});

inline constexpr const char* kRDHeader = "method,param,rate_bits,distortion";

void write_rd_points(std::span<const RDPoint> points, std::ostream& out);

// Solver inputs as CSV. Source: header `label,prob`, one row per
// environment. Distortion: header `env,<target labels...>`, then one row per
// environment starting with its label. Malformed input raises ConfigError
// carrying the line number.
Distribution read_source_csv(std::istream& in);
DistortionMatrix read_distortion_csv(std::istream& in);

} // namespace rdbandit
