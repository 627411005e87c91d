#include "rdbandit/error.hpp"
#include "rdbandit/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace rdbandit {

namespace {

struct Entry {
    std::string value;
    std::size_t line = 0;
};

using Entries = std::map<std::string, Entry, std::less<>>;

const std::set<std::string, std::less<>> kKnownKeys = {
    "kind",    "arms",  "prior_a", "prior_b",  "prior_mean",   "prior_var", "noise_var", "horizon",
    "trials",  "seed",  "agents",  "z",        "beta_max",     "ba_max_iters", "ba_tol", "output",
    "threads",
};

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

Entries read_entries(std::istream& in) {
    Entries entries;
    std::string raw;
    std::size_t line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash = raw.find('#');
        const std::string line = trim(std::string_view(raw).substr(0, hash));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line_no);
        std::string k = trim(std::string_view(line).substr(0, eq));
        std::string v = trim(std::string_view(line).substr(eq + 1));
        if (k.empty()) throw ConfigError("empty key", line_no);
        if (!kKnownKeys.contains(k)) throw ConfigError("unknown key '" + k + "'", line_no);
        if (v.empty()) throw ConfigError("key '" + k + "' has no value", line_no);
        if (entries.contains(k)) throw ConfigError("duplicate key '" + k + "'", line_no);
        entries.emplace(std::move(k), Entry{std::move(v), line_no});
    }
    return entries;
}

template <class T>
T parse_value(const std::string& key, const Entry& e) {
    T value{};
    const char* first = e.value.data();
    const char* last = first + e.value.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc{} || ptr != last)
        throw ConfigError("key '" + key + "': cannot parse '" + e.value + "'", e.line);
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(value)) throw ConfigError("key '" + key + "' must be finite", e.line);
    }
    return value;
}

template <class T>
T get_or(const Entries& entries, const std::string& key, T fallback) {
    const auto it = entries.find(key);
    return it == entries.end() ? fallback : parse_value<T>(key, it->second);
}

const Entry& require(const Entries& entries, const std::string& key) {
    const auto it = entries.find(key);
    if (it == entries.end()) throw ConfigError("missing required key '" + key + "'");
    return it->second;
}

std::vector<std::string> split_list(const std::string& value) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(value);
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

std::vector<double> get_list(const Entries& entries, const std::string& key, double fallback) {
    const auto it = entries.find(key);
    if (it == entries.end()) return {fallback};
    std::vector<double> out;
    for (const auto& item : split_list(it->second.value))
        out.push_back(parse_value<double>(key, Entry{item, it->second.line}));
    return out;
}

std::size_t line_of(const Entries& entries, const std::string& key) {
    const auto it = entries.find(key);
    return it == entries.end() ? 0 : it->second.line;
}

template <class Prior, class Make>
std::vector<Prior> zip_priors(const Entries& entries, const std::string& k1, const std::vector<double>& v1,
                              const std::string& k2, const std::vector<double>& v2, Make make) {
    const std::size_t n = std::max(v1.size(), v2.size());
    if ((v1.size() != 1 && v1.size() != n) || (v2.size() != 1 && v2.size() != n))
        throw ConfigError("'" + k1 + "' and '" + k2 + "' have incompatible lengths",
                          std::max(line_of(entries, k1), line_of(entries, k2)));
    std::vector<Prior> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(make(v1[v1.size() == 1 ? 0 : i], v2[v2.size() == 1 ? 0 : i]));
    return out;
}

BanditSpec bandit_from(const Entries& entries) {
    BanditSpec spec;
    if (const auto it = entries.find("kind"); it != entries.end()) {
        if (it->second.value == "bernoulli")
            spec.kind = ArmKind::Bernoulli;
        else if (it->second.value == "gaussian")
            spec.kind = ArmKind::Gaussian;
        else
            throw ConfigError("kind must be 'bernoulli' or 'gaussian'", it->second.line);
    }
    spec.n_arms = get_or<std::size_t>(entries, "arms", 10);
    spec.beta_priors = zip_priors<BetaPrior>(entries, "prior_a", get_list(entries, "prior_a", 1.0), "prior_b",
                                             get_list(entries, "prior_b", 1.0),
                                             [](double a, double b) { return BetaPrior{a, b}; });
    spec.normal_priors = zip_priors<NormalPrior>(
        entries, "prior_mean", get_list(entries, "prior_mean", 0.0), "prior_var", get_list(entries, "prior_var", 1.0),
        [](double m, double v) { return NormalPrior{m, v}; });
    spec.noise_var = get_or<double>(entries, "noise_var", 1.0);
    try {
        spec.validate();
    } catch (const ValidationError& e) {
        throw ConfigError(e.what());
    }
    return spec;
}

BAConfig ba_from(const Entries& entries) {
    BAConfig ba;
    ba.max_iters = get_or<std::size_t>(entries, "ba_max_iters", ba.max_iters);
    ba.tol = get_or<double>(entries, "ba_tol", ba.tol);
    try {
        ba.validate();
    } catch (const ValidationError& e) {
        throw ConfigError(e.what(), std::max(line_of(entries, "ba_max_iters"), line_of(entries, "ba_tol")));
    }
    return ba;
}

std::ifstream open_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path.string() + "'");
    return in;
}

} // namespace

void ExperimentConfig::validate() const {
    spec.validate();
    if (horizon < 1) throw ConfigError("horizon must be at least 1");
    if (trials < 1) throw ConfigError("trials must be at least 1");
    if (agents.empty()) throw ConfigError("at least one agent is required");
    for (const auto& a : agents)
        if (a.cfg.z < 1) throw ConfigError("agent '" + a.name() + "' needs z >= 1");
}

ExperimentConfig parse_config(std::istream& in) {
    const Entries entries = read_entries(in);
    ExperimentConfig cfg;
    cfg.spec = bandit_from(entries);

    const Entry& horizon = require(entries, "horizon");
    cfg.horizon = parse_value<std::size_t>("horizon", horizon);
    if (cfg.horizon < 1) throw ConfigError("horizon must be at least 1", horizon.line);
    cfg.trials = get_or<std::size_t>(entries, "trials", cfg.trials);
    if (cfg.trials < 1) throw ConfigError("trials must be at least 1", line_of(entries, "trials"));
    cfg.master_seed = get_or<std::uint64_t>(entries, "seed", 0);
    cfg.threads = get_or<std::size_t>(entries, "threads", 0);
    if (const auto it = entries.find("output"); it != entries.end()) cfg.output_path = it->second.value;

    AgentConfig defaults;
    defaults.z = get_or<std::size_t>(entries, "z", defaults.z);
    defaults.beta_max = get_or<double>(entries, "beta_max", defaults.beta_max);
    defaults.ba = ba_from(entries);

    const Entry& agents = require(entries, "agents");
    for (const auto& token : split_list(agents.value)) {
        try {
            cfg.agents.push_back(parse_agent(token, defaults));
        } catch (const ConfigError& e) {
            throw ConfigError(e.what(), agents.line);
        }
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    auto in = open_config(path);
    return parse_config(in);
}

CompareSettings parse_compare_settings(std::istream& in) {
    const Entries entries = read_entries(in);
    CompareSettings s;
    s.spec = bandit_from(entries);
    s.z = get_or<std::size_t>(entries, "z", s.z);
    s.seed = get_or<std::uint64_t>(entries, "seed", 0);
    s.ba = ba_from(entries);
    return s;
}

CompareSettings load_compare_settings(const std::filesystem::path& path) {
    auto in = open_config(path);
    return parse_compare_settings(in);
}

} // namespace rdbandit
