// rdbandit: regret experiments, target comparisons, one-off solver runs and
// sample-size bounds.
//
// Exit codes: 0 success, 2 configuration or input error, 1 anything else.

#include "rdbandit/error.hpp"
#include "rdbandit/estimation.hpp"
#include "rdbandit/harness.hpp"
#include "rdbandit/rd_solver.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace {

using namespace rdbandit;

constexpr int kConfigErrorExit = 2;

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path + "'");
    return in;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    return out;
}

struct RunOptions {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::size_t> threads;
};

int run(const RunOptions& o) {
    ExperimentConfig cfg = load_config(o.config);
    if (o.seed) cfg.master_seed = *o.seed;
    if (o.out) cfg.output_path = *o.out;
    if (o.threads) cfg.threads = *o.threads;
    const auto records = run_experiment(cfg);
    write_records(records, cfg.output_path);
    std::cerr << "wrote " << records.size() << " records to " << cfg.output_path.string() << '\n';
    return 0;
}

struct CompareOptions {
    std::string config;
    std::vector<double> betas;
    std::vector<double> epsilons;
    std::string out;
    std::optional<std::size_t> z;
    std::optional<std::uint64_t> seed;
};

int rd_compare(const CompareOptions& o) {
    CompareSettings s = load_compare_settings(o.config);
    if (o.z) s.z = *o.z;
    if (o.seed) s.seed = *o.seed;
    const auto result = compare_targets(s.spec, o.betas, o.epsilons, s.z, s.seed, s.ba);
    auto out = open_output(o.out);
    write_rd_points(result.points, out);
    return 0;
}

struct SolveOptions {
    std::string source;
    std::string distortion;
    double beta = 1.0;
    std::size_t max_iters = BAConfig{}.max_iters;
    double tol = BAConfig{}.tol;
};

int ba_solve(const SolveOptions& o) {
    auto src_in = open_input(o.source);
    auto d_in = open_input(o.distortion);
    const Distribution source = read_source_csv(src_in);
    const DistortionMatrix d = read_distortion_csv(d_in);
    BAConfig cfg;
    cfg.max_iters = o.max_iters;
    cfg.tol = o.tol;
    const BASolution sol = blahut_arimoto(source, d, o.beta, cfg);
    std::cout << "rate_bits=" << format_double(sol.rate) << '\n'
              << "distortion=" << format_double(sol.distortion) << '\n'
              << "beta=" << format_double(sol.beta) << '\n'
              << "iterations=" << sol.iterations << '\n'
              << "converged=" << (sol.converged ? "true" : "false") << '\n';
    return 0;
}

struct BoundsOptions {
    double epsilon = 0.0;
    double delta = 0.0;
    double dmin = 0.0;
    std::size_t nenv = 0;
    std::size_t ntarget = 0;
};

int bounds(const BoundsOptions& o) {
    const AlphabetSizes sizes{o.nenv, o.ntarget};
    const double t = phi_inverse(o.epsilon * o.dmin / 7.0, sizes);
    const auto z = required_samples(o.epsilon, o.delta, o.dmin, sizes);
    std::cout << "phi_inverse=" << format_double(t) << '\n' << "required_samples=" << z << '\n';
    return 0;
}

struct SummarizeOptions {
    std::string in;
    std::optional<std::string> out;
};

int summarize_cmd(const SummarizeOptions& o) {
    const auto records = read_records(std::filesystem::path(o.in));
    const auto rows = summarize(records);
    if (o.out) {
        auto out = open_output(*o.out);
        write_summary(rows, out);
    } else {
        write_summary(rows, std::cout);
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Rate-distortion learning targets for multi-armed bandits"};
    app.require_subcommand(1);

    RunOptions run_opts;
    auto* run_cmd = app.add_subcommand("run", "Run a seeded multi-trial regret experiment");
    run_cmd->add_option("--config", run_opts.config, "Experiment config file")->required();
    run_cmd->add_option("--seed", run_opts.seed, "Override the master seed");
    run_cmd->add_option("--out", run_opts.out, "Output CSV (overrides config 'output')");
    run_cmd->add_option("--threads", run_opts.threads, "Worker threads (0 = hardware)");

    CompareOptions cmp_opts;
    auto* cmp_cmd = app.add_subcommand("rd-compare", "Solver targets vs satisficing targets on prior samples");
    cmp_cmd->add_option("--config", cmp_opts.config, "Config file with the bandit spec")->required();
    cmp_cmd->add_option("--betas", cmp_opts.betas, "Beta values (bits per squared reward)")->delimiter(',');
    cmp_cmd->add_option("--epsilons", cmp_opts.epsilons, "Satisficing tolerances")->delimiter(',');
    cmp_cmd->add_option("--out", cmp_opts.out, "Output CSV")->required();
    cmp_cmd->add_option("--z", cmp_opts.z, "Number of prior samples");
    cmp_cmd->add_option("--seed", cmp_opts.seed, "Sampling seed");

    SolveOptions solve_opts;
    auto* solve_cmd = app.add_subcommand("ba-solve", "Solve one rate-distortion instance");
    solve_cmd->add_option("--source", solve_opts.source, "Source CSV (label,prob)")->required();
    solve_cmd->add_option("--distortion", solve_opts.distortion, "Distortion CSV")->required();
    solve_cmd->add_option("--beta", solve_opts.beta, "Lagrange multiplier, bits per distortion unit")->required();
    solve_cmd->add_option("--max-iters", solve_opts.max_iters, "Iteration budget");
    solve_cmd->add_option("--tol", solve_opts.tol, "Stopping threshold on the objective");

    BoundsOptions bound_opts;
    auto* bound_cmd = app.add_subcommand("bounds", "Posterior samples needed for an accurate plug-in estimate");
    bound_cmd->add_option("--epsilon", bound_opts.epsilon, "Accuracy in bits")->required();
    bound_cmd->add_option("--delta", bound_opts.delta, "Failure probability")->required();
    bound_cmd->add_option("--dmin", bound_opts.dmin, "Minimum positive distortion")->required();
    bound_cmd->add_option("--nenv", bound_opts.nenv, "Environment alphabet size")->required();
    bound_cmd->add_option("--ntarget", bound_opts.ntarget, "Target alphabet size")->required();

    SummarizeOptions sum_opts;
    auto* sum_cmd = app.add_subcommand("summarize", "Mean cumulative regret with 95% bands");
    sum_cmd->add_option("--in", sum_opts.in, "Records CSV")->required();
    sum_cmd->add_option("--out", sum_opts.out, "Summary CSV (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kConfigErrorExit;
    }

    try {
        if (*run_cmd) return run(run_opts);
        if (*cmp_cmd) return rd_compare(cmp_opts);
        if (*solve_cmd) return ba_solve(solve_opts);
        if (*bound_cmd) return bounds(bound_opts);
        if (*sum_cmd) return summarize_cmd(sum_opts);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigErrorExit;
    } catch (const ValidationError& e) {
        std::cerr << "invalid input: " << e.what() << '\n';
        return kConfigErrorExit;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
