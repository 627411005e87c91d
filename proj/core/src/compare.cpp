#include "rdbandit/error.hpp"
#include "rdbandit/harness.hpp"

#include <ostream>

namespace rdbandit {

Matrix satisficing_channel(std::span<const EnvironmentRealization> samples, double epsilon) {
    if (samples.empty()) throw ValidationError("satisficing_channel: no samples");
    Matrix channel(samples.size(), samples.front().n_arms());
    for (std::size_t e = 0; e < samples.size(); ++e) channel(e, satisficing_arm(samples[e], epsilon)) = 1.0;
    return channel;
}

TargetComparison compare_targets(const BanditSpec& spec, std::span<const double> betas,
                                 std::span<const double> epsilons, std::size_t z, std::uint64_t seed,
                                 const BAConfig& cfg) {
    if (z < 2) throw ValidationError("compare_targets: z must be at least 2");
    spec.validate();

    TargetComparison out;
    Rng rng = Rng::derive(seed, {key(StreamPurpose::TargetComparison)});
    out.samples.reserve(z);
    for (std::size_t i = 0; i < z; ++i) out.samples.push_back(sample_environment(spec, rng));

    const Distribution source = Distribution::uniform(z);
    const DistortionMatrix d = squared_regret_distortion(out.samples);

    if (!betas.empty()) {
        for (const auto& p : rd_curve(source, d, betas, cfg))
            out.points.push_back({TargetMethod::BlahutArimoto, p.beta, p.rate, p.distortion});
    }
    for (double eps : epsilons) {
        const Matrix channel = satisficing_channel(out.samples, eps);
        double distortion = 0.0;
        for (std::size_t e = 0; e < z; ++e)
            for (std::size_t x = 0; x < channel.cols(); ++x) distortion += source[e] * channel(e, x) * d(e, x);
        const double rate = mutual_information(JointDistribution::from_channel(source, channel));
        out.points.push_back({TargetMethod::Satisficing, eps, rate, distortion});
    }
    return out;
}

void write_rd_points(std::span<const RDPoint> points, std::ostream& out) {
    out << kRDHeader << '\n';
    for (const auto& p : points) {
        out << (p.method == TargetMethod::BlahutArimoto ? "BA" : "STS") << ',' << format_double(p.param) << ','
            << format_double(p.rate) << ',' << format_double(p.distortion) << '\n';
    }
}

} // namespace rdbandit
