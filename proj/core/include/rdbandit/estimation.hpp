#pragma once

// Sample-complexity tooling for the plug-in rate-distortion estimator: the
// smallest positive distortion on the source's support, the uniform
// continuity bound on |R(D) - R_hat(D)|, and the number of posterior samples
// that makes the plug-in estimate epsilon-accurate with probability 1 - delta.

#include "rdbandit/info_theory.hpp"
#include "rdbandit/rd_solver.hpp"

#include <cstddef>
#include <cstdint>

namespace rdbandit {

struct AlphabetSizes {
    std::size_t n_env = 1;
    std::size_t n_target = 1;

    double product() const noexcept {
        return static_cast<double>(n_env) * static_cast<double>(n_target);
    }
};

// min over e with p(e) > 0 of min over x with d(e, x) > 0 of d(e, x).
// Throws DegenerateInstance when every distortion on the support is zero.
double min_positive_distortion(const Distribution& source, const DistortionMatrix& d);

// phi(t) = t log2(|Sigma||Xi| / t) on [0, 1/2], phi(0) = 0.
double phi(double t, const AlphabetSizes& sizes);

// Inverse of phi on [0, 1/2] by bisection to 1e-12.
double phi_inverse(double y, const AlphabetSizes& sizes);

// (7 / d_min) * l1 * log2(|Sigma||Xi| / l1), valid for 0 <= l1 <= d_min / 4.
double rate_deviation_bound(double l1, double d_min, const AlphabetSizes& sizes);

// Smallest integer z >= 2 / t^2 * (ln(1/delta) + |Sigma| ln 2) with
// t = phi_inverse(epsilon * d_min / 7).
std::uint64_t required_samples(double epsilon, double delta, double d_min,
                               const AlphabetSizes& sizes);

} // namespace rdbandit
