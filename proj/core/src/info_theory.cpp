#include "rdbandit/info_theory.hpp"

#include "rdbandit/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_set>

namespace rdbandit {

namespace {

void check_labels(const std::vector<std::string>& labels, const char* what) {
    std::unordered_set<std::string> seen;
    for (const auto& l : labels)
        if (!seen.insert(l).second)
            throw ValidationError(std::string(what) + ": duplicate label '" + l + "'");
}

// Validates nonnegativity and total mass; rescales by the total.
void normalize_checked(std::span<double> mass, const char* what) {
    if (mass.empty()) throw ValidationError(std::string(what) + ": empty alphabet");
    double total = 0.0;
    for (double m : mass) {
        if (!std::isfinite(m) || m < 0.0)
            throw ValidationError(std::string(what) + ": negative or non-finite mass");
        total += m;
    }
    if (std::abs(total - 1.0) > kProbabilityTolerance)
        throw ValidationError(std::string(what) + ": mass sums to " + std::to_string(total));
    for (double& m : mass) m /= total;
}

} // namespace

std::vector<std::string> index_labels(std::size_t n, const std::string& prefix) {
    std::vector<std::string> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
    return out;
}

Distribution::Distribution(std::vector<std::string> labels, std::vector<double> probs)
    : labels_(std::move(labels)), probs_(std::move(probs)) {
    if (labels_.size() != probs_.size())
        throw ValidationError("distribution: label/probability count mismatch");
    check_labels(labels_, "distribution");
    normalize_checked(probs_, "distribution");
}

Distribution::Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
    labels_ = index_labels(probs_.size());
    normalize_checked(probs_, "distribution");
}

Distribution Distribution::uniform(std::size_t n) {
    if (n == 0) throw ValidationError("distribution: empty alphabet");
    return Distribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

Distribution Distribution::point_mass(std::size_t n, std::size_t at) {
    if (at >= n) throw ValidationError("distribution: point mass outside alphabet");
    std::vector<double> p(n, 0.0);
    p[at] = 1.0;
    return Distribution(std::move(p));
}

Distribution Distribution::from_counts(std::span<const double> counts) {
    if (counts.empty()) throw ValidationError("distribution: empty alphabet");
    double total = 0.0;
    for (double c : counts) {
        if (!std::isfinite(c) || c < 0.0) throw ValidationError("distribution: negative or non-finite count");
        total += c;
    }
    if (!(total > 0.0)) throw ValidationError("distribution: counts sum to zero");
    Distribution d;
    d.probs_.assign(counts.begin(), counts.end());
    for (double& p : d.probs_) p /= total;
    d.labels_ = index_labels(counts.size());
    return d;
}

JointDistribution::JointDistribution(std::vector<std::string> row_labels,
                                     std::vector<std::string> col_labels, Matrix mass)
    : row_labels_(std::move(row_labels)), col_labels_(std::move(col_labels)), mass_(std::move(mass)) {
    if (row_labels_.size() != mass_.rows() || col_labels_.size() != mass_.cols())
        throw ValidationError("joint distribution: label/shape mismatch");
    check_labels(row_labels_, "joint distribution rows");
    check_labels(col_labels_, "joint distribution columns");
    std::vector<double> flat(mass_.data().begin(), mass_.data().end());
    normalize_checked(flat, "joint distribution");
    for (std::size_t r = 0; r < mass_.rows(); ++r)
        for (std::size_t c = 0; c < mass_.cols(); ++c) mass_(r, c) = flat[r * mass_.cols() + c];
}

JointDistribution::JointDistribution(Matrix mass)
    : JointDistribution(index_labels(mass.rows()), index_labels(mass.cols()), Matrix(mass)) {}

JointDistribution JointDistribution::from_channel(const Distribution& source, const Matrix& channel) {
    if (channel.rows() != source.size())
        throw ValidationError("joint distribution: channel rows do not match source");
    Matrix mass(channel.rows(), channel.cols());
    for (std::size_t e = 0; e < channel.rows(); ++e)
        for (std::size_t x = 0; x < channel.cols(); ++x) mass(e, x) = source[e] * channel(e, x);
    return JointDistribution(source.labels(), index_labels(channel.cols()), std::move(mass));
}

Distribution JointDistribution::row_marginal() const {
    std::vector<double> p(mass_.rows(), 0.0);
    for (std::size_t r = 0; r < mass_.rows(); ++r)
        for (double m : mass_.row(r)) p[r] += m;
    return Distribution(row_labels_, std::move(p));
}

Distribution JointDistribution::col_marginal() const {
    std::vector<double> p(mass_.cols(), 0.0);
    for (std::size_t r = 0; r < mass_.rows(); ++r)
        for (std::size_t c = 0; c < mass_.cols(); ++c) p[c] += mass_(r, c);
    return Distribution(col_labels_, std::move(p));
}

JointDistribution JointDistribution::transposed() const {
    return JointDistribution(col_labels_, row_labels_, mass_.transposed());
}

double entropy_bits(std::span<const double> p) {
    double h = 0.0;
    for (double x : p)
        if (x > 0.0) h -= x * std::log2(x);
    return std::max(h, 0.0);
}

double kl_bits(std::span<const double> p, std::span<const double> q) {
    double kl = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] <= 0.0) continue;
        if (q[i] <= 0.0) return std::numeric_limits<double>::infinity();
        kl += p[i] * std::log2(p[i] / q[i]);
    }
    return kl;
}

double entropy(const Distribution& p) { return entropy_bits(p.probs()); }

double kl_divergence(const Distribution& p, const Distribution& q) {
    if (p.labels() != q.labels()) throw ValidationError("kl_divergence: alphabets differ");
    return std::max(kl_bits(p.probs(), q.probs()), 0.0);
}

double mutual_information(const JointDistribution& joint) {
    const Matrix& m = joint.mass();
    std::vector<double> px(m.rows(), 0.0), py(m.cols(), 0.0);
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) {
            px[r] += m(r, c);
            py[c] += m(r, c);
        }
    double mi = 0.0;
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) {
            const double pxy = m(r, c);
            if (pxy > 0.0) mi += pxy * std::log2(pxy / (px[r] * py[c]));
        }
    return std::max(mi, 0.0);
}

double log_sum_exp(std::span<const double> values) {
    if (values.empty()) throw ValidationError("log_sum_exp: empty input");
    const double m = *std::max_element(values.begin(), values.end());
    if (m == -std::numeric_limits<double>::infinity()) return m;
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double v : values) s += std::exp(v - m);
    return m + std::log(s);
}

} // namespace rdbandit
