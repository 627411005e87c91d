#include "rdbandit/error.hpp"
#include "rdbandit/harness.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace rdbandit {

namespace {

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

template <class T>
T parse_field(std::string_view text, std::size_t line, const char* column) {
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ConfigError(std::string("records: bad ") + column + " '" + std::string(text) + "'", line);
    return value;
}

} // namespace

void write_records(std::span<const TrialRecord> records, std::ostream& out) {
    out << kRecordHeader << '\n';
    for (const auto& r : records) {
        out << r.agent << ',' << r.param << ',' << r.trial << ',' << r.period << ',' << format_double(r.regret)
            << ',' << format_double(r.cum_regret) << '\n';
    }
}

void write_records(std::span<const TrialRecord> records, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    write_records(records, out);
    out.flush();
    if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

std::vector<TrialRecord> read_records(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kRecordHeader)
        throw ConfigError("records: expected header '" + std::string(kRecordHeader) + "'", 1);
    std::vector<TrialRecord> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 6)
            throw ConfigError("records: expected 6 fields", line_no);
        out.push_back({std::string(f[0]), std::string(f[1]), parse_field<std::size_t>(f[2], line_no, "trial"),
                       parse_field<std::size_t>(f[3], line_no, "period"), parse_field<double>(f[4], line_no, "regret"),
                       parse_field<double>(f[5], line_no, "cum_regret")});
    }
    return out;
}

std::vector<TrialRecord> read_records(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open '" + path.string() + "'");
    return read_records(in);
}

void write_summary(std::span<const SummaryRow> rows, std::ostream& out) {
    out << "agent,param,period,trials,mean,ci_low,ci_high\n";
    for (const auto& r : rows) {
        out << r.agent << ',' << r.param << ',' << r.period << ',' << r.n_trials << ',' << format_double(r.mean) << ',';
        if (r.ci_low) out << format_double(*r.ci_low);
        out << ',';
        if (r.ci_high) out << format_double(*r.ci_high);
        out << '\n';
    }
}

namespace {

std::string trimmed(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

double parse_cell(std::string_view text, std::size_t line) {
    const std::string t = trimmed(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size())
        throw ConfigError("not a number: '" + t + "'", line);
    return value;
}

} // namespace

Distribution read_source_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || trimmed(line) != "label,prob") throw ConfigError("expected header 'label,prob'", 1);
    std::vector<std::string> labels;
    std::vector<double> probs;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trimmed(line).empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != 2) throw ConfigError("expected 'label,prob'", line_no);
        labels.push_back(trimmed(f[0]));
        probs.push_back(parse_cell(f[1], line_no));
    }
    try {
        return Distribution(std::move(labels), std::move(probs));
    } catch (const ValidationError& e) {
        throw ConfigError(std::string("source: ") + e.what());
    }
}

DistortionMatrix read_distortion_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw ConfigError("distortion file is empty", 1);
    const auto header = split(line, ',');
    if (header.size() < 2) throw ConfigError("expected header 'env,<targets...>'", 1);
    std::vector<std::string> cols;
    for (std::size_t i = 1; i < header.size(); ++i) cols.push_back(trimmed(header[i]));

    std::vector<std::string> rows;
    std::vector<double> values;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trimmed(line).empty()) continue;
        const auto f = split(line, ',');
        if (f.size() != header.size())
            throw ConfigError("expected " + std::to_string(header.size()) + " fields", line_no);
        rows.push_back(trimmed(f[0]));
        for (std::size_t i = 1; i < f.size(); ++i) values.push_back(parse_cell(f[i], line_no));
    }
    Matrix m(rows.size(), cols.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c) m(r, c) = values[r * cols.size() + c];
    try {
        return DistortionMatrix(std::move(rows), std::move(cols), std::move(m));
    } catch (const ValidationError& e) {
        throw ConfigError(std::string("distortion: ") + e.what());
    }
}

} // namespace rdbandit
