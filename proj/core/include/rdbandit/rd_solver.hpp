#pragma once

// Discrete Blahut-Arimoto solver for the Lagrangian rate-distortion objective
//
//   J(P, Q, beta) = KL(P_{E,X} || P_E x Q_X) + beta * E_P[d(E, X)]
//
// Rates are in bits, so beta is measured in bits per unit of distortion and
// the channel update is p(x|e) proportional to q(x) * 2^(-beta d(e, x)).
// beta = +infinity is accepted and yields the distortion-minimizing limit
// channel p(x|e) proportional to q(x) * 1[d(e, x) = min_x' d(e, x')].

#include "rdbandit/info_theory.hpp"
#include "rdbandit/matrix.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace rdbandit {

// Nonnegative finite distortions d(e, x); rows are environments, columns
// are targets.
class DistortionMatrix {
public:
    DistortionMatrix(std::vector<std::string> row_labels, std::vector<std::string> col_labels,
                     Matrix values);
    explicit DistortionMatrix(Matrix values);

    std::size_t rows() const noexcept { return values_.rows(); }
    std::size_t cols() const noexcept { return values_.cols(); }
    double operator()(std::size_t e, std::size_t x) const { return values_(e, x); }
    const Matrix& values() const noexcept { return values_; }
    const std::vector<std::string>& row_labels() const noexcept { return row_labels_; }
    const std::vector<std::string>& col_labels() const noexcept { return col_labels_; }

private:
    std::vector<std::string> row_labels_;
    std::vector<std::string> col_labels_;
    Matrix values_;
};

struct BAConfig {
    std::size_t max_iters = 10'000;
    double tol = 1e-9; // on |J_k - J_{k-1}|, bits
    std::optional<Distribution> init_marginal;
    // Keep J after every half-step (channel update, then marginal update).
    bool record_trace = false;

    void validate() const;
};

struct BASolution {
    Matrix channel;       // p(x | e), row-stochastic
    Distribution marginal{std::vector<double>{1.0}}; // q(x) = sum_e p(e) p(x | e)
    double rate = 0.0;       // I(E; X) in bits
    double distortion = 0.0; // E[d(E, X)]
    double beta = 0.0;
    std::size_t iterations = 0;
    bool converged = false;
    std::vector<double> objective_trace;
};

BASolution blahut_arimoto(const Distribution& source, const DistortionMatrix& d, double beta,
                          const BAConfig& cfg = {});

// J evaluated for an arbitrary channel and output marginal. Returns
// +infinity when q vanishes where the joint has mass. 0 * infinity is
// taken as 0 in the distortion term.
double objective_J(const Distribution& source, const Matrix& channel, const Distribution& q,
                   const DistortionMatrix& d, double beta);

struct RDCurvePoint {
    double beta = 0.0;
    double distortion = 0.0;
    double rate = 0.0;
};

// One solver run per beta, in input order.
std::vector<RDCurvePoint> rd_curve(const Distribution& source, const DistortionMatrix& d,
                                   std::span<const double> betas, const BAConfig& cfg = {});

// Piecewise-linear interpolation of rate at distortion `D` along the lower
// convex hull of `curve`. Beyond the largest traced distortion the rate of
// that point is returned; below the smallest one, +infinity (no feasible
// traced channel reaches that distortion).
double interpolate_rate(std::span<const RDCurvePoint> curve, double D);

} // namespace rdbandit
