#include "rdbandit/rd_solver.hpp"

#include "rdbandit/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace rdbandit {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// beta * d with 0 * infinity = 0.
double penalty(double beta, double d) { return d == 0.0 ? 0.0 : beta * d; }

struct ObjectiveParts {
    double kl = 0.0;
    double distortion = 0.0;
};

ObjectiveParts objective_parts(std::span<const double> source, const Matrix& channel,
                               std::span<const double> q, const Matrix& d) {
    ObjectiveParts parts;
    for (std::size_t e = 0; e < channel.rows(); ++e) {
        if (source[e] <= 0.0) continue;
        for (std::size_t x = 0; x < channel.cols(); ++x) {
            const double p = channel(e, x);
            const double joint = source[e] * p;
            if (joint <= 0.0) continue;
            if (q[x] <= 0.0) {
                parts.kl = kInf;
            } else if (std::isfinite(parts.kl)) {
                parts.kl += joint * std::log2(p / q[x]);
            }
            parts.distortion += joint * d(e, x);
        }
    }
    return parts;
}

// Value whose changes drive the stopping rule. For beta = infinity the
// distortion is pinned to the row minima, so only the rate term moves.
double tracked_objective(const ObjectiveParts& parts, double beta) {
    if (std::isinf(beta)) return parts.kl;
    return parts.kl + penalty(beta, parts.distortion);
}

void column_mix(std::span<const double> source, const Matrix& channel, std::vector<double>& q) {
    std::fill(q.begin(), q.end(), 0.0);
    for (std::size_t e = 0; e < channel.rows(); ++e)
        for (std::size_t x = 0; x < channel.cols(); ++x) q[x] += source[e] * channel(e, x);
    double total = 0.0;
    for (double v : q) total += v;
    for (double& v : q) v /= total;
}

// Log-domain channel update p(x|e) proportional to q(x) 2^(-beta d(e, x)).
// Returns the objective of the updated channel against q, which equals
// -sum_e p(e) log2 Z_e for the row normalizers Z_e (for beta = infinity, the
// rate term alone, by the same identity).
double update_channel(std::span<const double> source, const Matrix& d, double beta,
                      std::span<const double> q, Matrix& channel, std::vector<double>& log_q) {
    const std::size_t m = d.cols();
    for (std::size_t x = 0; x < m; ++x) log_q[x] = q[x] > 0.0 ? std::log(q[x]) : -kInf;
    const double scale = std::isinf(beta) ? 0.0 : beta * std::numbers::ln2;

    double objective = 0.0;
    for (std::size_t e = 0; e < d.rows(); ++e) {
        auto row = channel.row(e);
        const auto dist = d.row(e);
        double row_min = kInf;
        if (std::isinf(beta)) {
            for (std::size_t x = 0; x < m; ++x)
                if (q[x] > 0.0) row_min = std::min(row_min, dist[x]);
        }
        double peak = -kInf;
        for (std::size_t x = 0; x < m; ++x) {
            double logit = log_q[x];
            if (std::isinf(beta)) {
                if (dist[x] != row_min) logit = -kInf;
            } else if (dist[x] != 0.0) {
                logit -= scale * dist[x];
            }
            row[x] = logit;
            peak = std::max(peak, logit);
        }
        double total = 0.0;
        for (std::size_t x = 0; x < m; ++x) {
            row[x] = std::exp(row[x] - peak);
            total += row[x];
        }
        for (std::size_t x = 0; x < m; ++x) row[x] /= total;
        if (source[e] > 0.0) objective -= source[e] * (peak + std::log(total)) / std::numbers::ln2;
    }
    return objective;
}

} // namespace

DistortionMatrix::DistortionMatrix(std::vector<std::string> row_labels,
                                   std::vector<std::string> col_labels, Matrix values)
    : row_labels_(std::move(row_labels)), col_labels_(std::move(col_labels)), values_(std::move(values)) {
    if (values_.rows() == 0 || values_.cols() == 0)
        throw ValidationError("distortion matrix: empty");
    if (row_labels_.size() != values_.rows() || col_labels_.size() != values_.cols())
        throw ValidationError("distortion matrix: label/shape mismatch");
    for (double v : values_.data())
        if (!std::isfinite(v) || v < 0.0)
            throw ValidationError("distortion matrix: entries must be finite and nonnegative");
}

DistortionMatrix::DistortionMatrix(Matrix values)
    : DistortionMatrix(index_labels(values.rows()), index_labels(values.cols()), Matrix(values)) {}

void BAConfig::validate() const {
    if (max_iters < 1) throw ValidationError("BAConfig: max_iters must be at least 1");
    if (!(tol > 0.0)) throw ValidationError("BAConfig: tol must be positive");
}

BASolution blahut_arimoto(const Distribution& source, const DistortionMatrix& d, double beta,
                          const BAConfig& cfg) {
    cfg.validate();
    if (source.size() != d.rows() || source.labels() != d.row_labels())
        throw ValidationError("blahut_arimoto: source labels do not match distortion rows");
    if (std::isnan(beta) || beta < 0.0) throw ValidationError("blahut_arimoto: beta must be >= 0");

    const std::size_t n = d.rows();
    const std::size_t m = d.cols();
    const auto src = source.probs();

    std::vector<double> q(m, 1.0 / static_cast<double>(m));
    if (cfg.init_marginal) {
        if (cfg.init_marginal->size() != m)
            throw ValidationError("blahut_arimoto: initial marginal has wrong size");
        q.assign(cfg.init_marginal->probs().begin(), cfg.init_marginal->probs().end());
    }

    BASolution sol;
    sol.beta = beta;
    sol.channel = Matrix(n, m);
    std::vector<double> log_q(m);
    std::vector<double> next_q(m);
    double previous = kInf;

    for (std::size_t k = 1; k <= cfg.max_iters; ++k) {
        const double current = update_channel(src, d.values(), beta, q, sol.channel, log_q);
        if (cfg.record_trace) sol.objective_trace.push_back(current);

        column_mix(src, sol.channel, next_q);
        if (cfg.record_trace)
            sol.objective_trace.push_back(
                tracked_objective(objective_parts(src, sol.channel, next_q, d.values()), beta));

        sol.iterations = k;
        const bool settled = std::isfinite(previous) && std::abs(current - previous) < cfg.tol;
        q.swap(next_q);
        if (settled) {
            sol.converged = true;
            break;
        }
        previous = current;
    }

    // q is now the induced marginal of the final channel.
    const auto parts = objective_parts(src, sol.channel, q, d.values());
    sol.rate = std::max(parts.kl, 0.0);
    sol.distortion = parts.distortion;
    sol.marginal = Distribution(d.col_labels(), q);
    return sol;
}

double objective_J(const Distribution& source, const Matrix& channel, const Distribution& q,
                   const DistortionMatrix& d, double beta) {
    if (channel.rows() != source.size() || channel.rows() != d.rows() ||
        channel.cols() != q.size() || channel.cols() != d.cols())
        throw ValidationError("objective_J: inconsistent shapes");
    if (std::isnan(beta) || beta < 0.0) throw ValidationError("objective_J: beta must be >= 0");
    const auto parts = objective_parts(source.probs(), channel, q.probs(), d.values());
    return parts.kl + penalty(beta, parts.distortion);
}

std::vector<RDCurvePoint> rd_curve(const Distribution& source, const DistortionMatrix& d,
                                   std::span<const double> betas, const BAConfig& cfg) {
    if (betas.empty()) throw ValidationError("rd_curve: no beta values");
    std::vector<RDCurvePoint> curve;
    curve.reserve(betas.size());
    for (double beta : betas) {
        const BASolution sol = blahut_arimoto(source, d, beta, cfg);
        curve.push_back({beta, sol.distortion, sol.rate});
    }
    return curve;
}

double interpolate_rate(std::span<const RDCurvePoint> curve, double D) {
    std::vector<RDCurvePoint> pts(curve.begin(), curve.end());
    std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
        return a.distortion < b.distortion || (a.distortion == b.distortion && a.rate < b.rate);
    });

    // Any traced point at or left of D bounds R(D) from above.
    double best = kInf;
    for (const auto& p : pts)
        if (p.distortion <= D) best = std::min(best, p.rate);

    // Lower convex hull (monotone chain); mixing two channels is feasible
    // and its rate lies on or below the chord.
    std::vector<RDCurvePoint> hull;
    for (const auto& p : pts) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull.back();
            const double cross = (b.distortion - a.distortion) * (p.rate - a.rate) -
                                 (b.rate - a.rate) * (p.distortion - a.distortion);
            if (cross <= 0.0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(p);
    }
    for (std::size_t i = 0; i + 1 < hull.size(); ++i) {
        const auto& a = hull[i];
        const auto& b = hull[i + 1];
        if (D >= a.distortion && D <= b.distortion && b.distortion > a.distortion) {
            const double w = (D - a.distortion) / (b.distortion - a.distortion);
            best = std::min(best, a.rate + w * (b.rate - a.rate));
        }
    }
    return best;
}

} // namespace rdbandit
