#pragma once

// Finite-alphabet information measures. Every quantity is in bits and uses
// the convention 0 * log 0 = 0.

#include "rdbandit/matrix.hpp"

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace rdbandit {

inline constexpr double kProbabilityTolerance = 1e-9;

// Probability vector over a labeled alphabet. Construction validates and,
// when the total is within kProbabilityTolerance of 1, renormalizes.
class Distribution {
public:
    Distribution(std::vector<std::string> labels, std::vector<double> probs);

    // Labels are "0", "1", ... in index order.
    explicit Distribution(std::vector<double> probs);

    static Distribution uniform(std::size_t n);
    static Distribution point_mass(std::size_t n, std::size_t at);
    // Relative frequencies: each entry is exactly count / total.
    static Distribution from_counts(std::span<const double> counts);

    std::size_t size() const noexcept { return probs_.size(); }
    double operator[](std::size_t i) const { return probs_[i]; }
    std::span<const double> probs() const noexcept { return probs_; }
    const std::vector<std::string>& labels() const noexcept { return labels_; }

    friend bool operator==(const Distribution&, const Distribution&) = default;

private:
    Distribution() = default;

    std::vector<std::string> labels_;
    std::vector<double> probs_;
};

// Joint probability mass over (row, column) label pairs.
class JointDistribution {
public:
    JointDistribution(std::vector<std::string> row_labels, std::vector<std::string> col_labels,
                      Matrix mass);
    explicit JointDistribution(Matrix mass);

    // source(e) * channel(a | e); the channel must be row-stochastic.
    static JointDistribution from_channel(const Distribution& source, const Matrix& channel);

    const Matrix& mass() const noexcept { return mass_; }
    const std::vector<std::string>& row_labels() const noexcept { return row_labels_; }
    const std::vector<std::string>& col_labels() const noexcept { return col_labels_; }

    Distribution row_marginal() const;
    Distribution col_marginal() const;
    JointDistribution transposed() const;

private:
    std::vector<std::string> row_labels_;
    std::vector<std::string> col_labels_;
    Matrix mass_;
};

std::vector<std::string> index_labels(std::size_t n, const std::string& prefix = "");

double entropy(const Distribution& p);

// +infinity when p is not absolutely continuous w.r.t. q.
double kl_divergence(const Distribution& p, const Distribution& q);

double mutual_information(const JointDistribution& joint);

// Natural-log log-sum-exp, stable for large-magnitude inputs. Entries equal
// to -infinity contribute nothing; all -infinity yields -infinity.
double log_sum_exp(std::span<const double> values);

// Unvalidated kernels shared with the solver. `p` and `q` must already be
// probability vectors; these skip all checks.
double entropy_bits(std::span<const double> p);
double kl_bits(std::span<const double> p, std::span<const double> q);

} // namespace rdbandit
