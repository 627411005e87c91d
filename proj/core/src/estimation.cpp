#include "rdbandit/estimation.hpp"

#include "rdbandit/error.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace rdbandit {

namespace {

void check_sizes(const AlphabetSizes& sizes) {
    if (sizes.n_env < 1 || sizes.n_target < 1)
        throw ValidationError("alphabet sizes must be at least 1");
}

} // namespace

double min_positive_distortion(const Distribution& source, const DistortionMatrix& d) {
    if (source.size() != d.rows())
        throw ValidationError("min_positive_distortion: source does not match distortion rows");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < d.rows(); ++e) {
        if (source[e] <= 0.0) continue;
        for (std::size_t x = 0; x < d.cols(); ++x)
            if (d(e, x) > 0.0) best = std::min(best, d(e, x));
    }
    if (std::isinf(best))
        throw DegenerateInstance("degenerate instance: every distortion on the source support is zero");
    return best;
}

double phi(double t, const AlphabetSizes& sizes) {
    check_sizes(sizes);
    if (t == 0.0) return 0.0;
    return t * std::log2(sizes.product() / t);
}

double phi_inverse(double y, const AlphabetSizes& sizes) {
    check_sizes(sizes);
    if (sizes.product() < 2.0)
        throw ValidationError("phi_inverse: |Sigma||Xi| must be at least 2 for phi to be invertible");
    const double y_max = phi(0.5, sizes);
    if (std::isnan(y) || y < 0.0 || y > y_max)
        throw ValidationError("phi_inverse: argument outside [0, phi(1/2)]");
    if (y == 0.0) return 0.0;
    double lo = 0.0;
    double hi = 0.5;
    // Runs to full double resolution, well inside the 1e-12 target.
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (phi(mid, sizes) < y)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double rate_deviation_bound(double l1, double d_min, const AlphabetSizes& sizes) {
    check_sizes(sizes);
    if (!(d_min > 0.0)) throw ValidationError("rate_deviation_bound: d_min must be positive");
    if (std::isnan(l1) || l1 < 0.0 || l1 > d_min / 4.0)
        throw ValidationError("rate_deviation_bound: requires 0 <= l1 <= d_min / 4");
    if (l1 == 0.0) return 0.0;
    return (7.0 / d_min) * l1 * std::log2(sizes.product() / l1);
}

std::uint64_t required_samples(double epsilon, double delta, double d_min,
                               const AlphabetSizes& sizes) {
    check_sizes(sizes);
    // delta = 1 is admitted as a boundary probe where the confidence term vanishes.
    if (!(delta > 0.0 && delta <= 1.0)) throw ValidationError("required_samples: delta must be in (0, 1]");
    if (!(d_min > 0.0)) throw ValidationError("required_samples: d_min must be positive");
    const double eps_max = std::log2(static_cast<double>(sizes.n_env));
    if (!(epsilon > 0.0 && epsilon < eps_max))
        throw ValidationError("required_samples: epsilon must be in (0, log2 |Sigma|)");
    const double y = epsilon * d_min / 7.0;
    if (sizes.product() < 2.0 || y > phi(0.5, sizes))
        throw ValidationError("required_samples: epsilon * d_min / 7 exceeds phi(1/2)");

    const double t = phi_inverse(y, sizes);
    const double z = 2.0 / (t * t) *
                     (std::log(1.0 / delta) + static_cast<double>(sizes.n_env) * std::numbers::ln2);
    const double rounded = std::ceil(z);
    if (!(rounded < 0x1.0p63)) throw ValidationError("required_samples: bound exceeds 2^63");
    return static_cast<std::uint64_t>(rounded);
}

} // namespace rdbandit
