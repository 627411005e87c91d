#pragma once

// Test-only reference computations. Deliberately naive: linear-domain
// arithmetic, natural logs converted at the end, no shared code with the
// library's numeric kernels.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <random>
#include <vector>

namespace oracle {

using Vec = std::vector<double>;
using Mat = std::vector<std::vector<double>>;

inline double log2_of(double x) { return std::log(x) / std::log(2.0); }

inline double binary_entropy(double p) {
    if (p <= 0.0 || p >= 1.0) return 0.0;
    return -p * log2_of(p) - (1.0 - p) * log2_of(1.0 - p);
}

// Rate-distortion function of a fair bit under Hamming distortion.
inline double binary_hamming_rd(double D) { return D >= 0.5 ? 0.0 : 1.0 - binary_entropy(D); }

inline double entropy(const Vec& p) {
    double h = 0.0;
    for (double x : p)
        if (x > 0.0) h += x * std::log(1.0 / x);
    return h / std::log(2.0);
}

// H(X) + H(Y) - H(X, Y).
inline double mutual_information(const Mat& joint) {
    Vec px(joint.size(), 0.0), py(joint.front().size(), 0.0), flat;
    for (std::size_t i = 0; i < joint.size(); ++i)
        for (std::size_t j = 0; j < joint[i].size(); ++j) {
            px[i] += joint[i][j];
            py[j] += joint[i][j];
            flat.push_back(joint[i][j]);
        }
    return entropy(px) + entropy(py) - entropy(flat);
}

// Double sum for KL(source x channel || source x q) + beta E[d].
inline double objective(const Vec& source, const Mat& channel, const Vec& q, const Mat& d, double beta) {
    double kl = 0.0, dist = 0.0;
    for (std::size_t e = 0; e < source.size(); ++e)
        for (std::size_t x = 0; x < q.size(); ++x) {
            const double pj = source[e] * channel[e][x];
            if (pj == 0.0) continue;
            kl += pj * std::log(pj / (source[e] * q[x]));
            dist += pj * d[e][x];
        }
    return kl / std::log(2.0) + beta * dist;
}

struct Solution {
    Mat channel;
    Vec q;
};

// Plain Blahut-Arimoto in the linear domain with weights 2^(-beta d),
// run for a fixed iteration count.
inline Solution blahut_arimoto(const Vec& source, const Mat& d, double beta, int iterations) {
    const std::size_t n = source.size(), m = d.front().size();
    Vec q(m, 1.0 / static_cast<double>(m));
    Mat ch(n, Vec(m));
    for (int it = 0; it < iterations; ++it) {
        for (std::size_t e = 0; e < n; ++e) {
            double z = 0.0;
            for (std::size_t x = 0; x < m; ++x) z += ch[e][x] = q[x] * std::pow(2.0, -beta * d[e][x]);
            for (std::size_t x = 0; x < m; ++x) ch[e][x] /= z;
        }
        Vec nq(m, 0.0);
        for (std::size_t e = 0; e < n; ++e)
            for (std::size_t x = 0; x < m; ++x) nq[x] += source[e] * ch[e][x];
        q = nq;
    }
    return {ch, q};
}

// Squared regret rows straight from the definition.
inline Mat squared_regret(const Mat& means) {
    Mat d;
    for (const auto& row : means) {
        const double best = *std::max_element(row.begin(), row.end());
        Vec r;
        for (double m : row) r.push_back((best - m) * (best - m));
        d.push_back(r);
    }
    return d;
}

// Delta and v for a uniform empirical source over `means`.
inline Vec regret_vector(const Mat& means, const Mat& channel) {
    const double z = static_cast<double>(means.size());
    const std::size_t arms = means.front().size();
    double target = 0.0;
    for (std::size_t e = 0; e < means.size(); ++e)
        for (std::size_t x = 0; x < arms; ++x) target += channel[e][x] * means[e][x] / z;
    Vec out;
    for (std::size_t a = 0; a < arms; ++a) {
        double avg = 0.0;
        for (const auto& row : means) avg += row[a] / z;
        out.push_back(std::max(0.0, target - avg));
    }
    return out;
}

// Variance over the target of E[mean(a) | target], via explicit
// conditional distributions p(e | x) = p(x | e) / (z q(x)).
inline Vec info_gain(const Mat& means, const Mat& channel) {
    const std::size_t z = means.size(), arms = means.front().size();
    Vec q(arms, 0.0);
    for (std::size_t e = 0; e < z; ++e)
        for (std::size_t x = 0; x < arms; ++x) q[x] += channel[e][x] / static_cast<double>(z);
    Vec out(arms, 0.0);
    for (std::size_t a = 0; a < arms; ++a) {
        double overall = 0.0;
        for (std::size_t e = 0; e < z; ++e) overall += means[e][a] / static_cast<double>(z);
        for (std::size_t x = 0; x < arms; ++x) {
            if (q[x] == 0.0) continue;
            double cond = 0.0;
            for (std::size_t e = 0; e < z; ++e) cond += channel[e][x] / (static_cast<double>(z) * q[x]) * means[e][a];
            out[a] += q[x] * (cond - overall) * (cond - overall);
        }
    }
    return out;
}

inline double ratio(const Vec& delta, const Vec& v, const Vec& pi) {
    double num = 0.0, den = 0.0;
    for (std::size_t a = 0; a < pi.size(); ++a) {
        num += pi[a] * delta[a];
        den += pi[a] * v[a];
    }
    if (num == 0.0) return 0.0;
    if (den <= 0.0) return std::numeric_limits<double>::infinity();
    return num * num / den;
}

// Best ratio over all arm pairs on a grid of mixing weights.
inline double grid_ratio(const Vec& delta, const Vec& v, double step) {
    const std::size_t n = delta.size();
    double best = std::numeric_limits<double>::infinity();
    const int steps = static_cast<int>(std::round(1.0 / step));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            for (int k = 0; k <= steps; ++k) {
                Vec pi(n, 0.0);
                const double w = static_cast<double>(k) / steps;
                pi[i] += 1.0 - w;
                pi[j] += w;
                best = std::min(best, ratio(delta, v, pi));
            }
    return best;
}

// Golden-section minimum of a unimodal function on [lo, hi].
inline double golden_section(const std::function<double(double)>& f, double lo, double hi, double tol) {
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = lo, b = hi;
    double c = b - g * (b - a), d = a + g * (b - a);
    while (b - a > tol) {
        if (f(c) < f(d))
            b = d;
        else
            a = c;
        c = b - g * (b - a);
        d = a + g * (b - a);
    }
    return 0.5 * (a + b);
}

inline Vec random_simplex(std::mt19937_64& gen, std::size_t n) {
    std::exponential_distribution<double> ex(1.0);
    Vec p(n);
    double s = 0.0;
    for (double& x : p) s += x = ex(gen);
    for (double& x : p) x /= s;
    return p;
}

} // namespace oracle
