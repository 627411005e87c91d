#include "rdbandit/error.hpp"
#include "rdbandit/rd_solver.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace rdbandit;

namespace {

DistortionMatrix hamming(std::size_t n) {
    Matrix m(n, n, 1.0);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 0.0;
    return DistortionMatrix(m);
}

struct Instance {
    Distribution source;
    DistortionMatrix d;
    oracle::Vec src;
    oracle::Mat dist;
};

Instance random_instance(std::mt19937_64& gen, std::size_t n, std::size_t m, double scale = 1.0) {
    std::uniform_real_distribution<double> u(0.0, scale);
    const auto src = oracle::random_simplex(gen, n);
    Matrix dm(n, m);
    oracle::Mat od(n, oracle::Vec(m));
    for (std::size_t e = 0; e < n; ++e)
        for (std::size_t x = 0; x < m; ++x) dm(e, x) = od[e][x] = u(gen);
    return {Distribution(src), DistortionMatrix(dm), src, od};
}

oracle::Mat to_rows(const Matrix& m) {
    oracle::Mat out(m.rows());
    for (std::size_t r = 0; r < m.rows(); ++r) out[r].assign(m.row(r).begin(), m.row(r).end());
    return out;
}

} // namespace

TEST_CASE("beta = 0 yields an environment-independent channel") {
    std::mt19937_64 gen(1);
    for (int i = 0; i < 20; ++i) {
        auto inst = random_instance(gen, 2 + gen() % 6, 2 + gen() % 6);
        const auto sol = blahut_arimoto(inst.source, inst.d, 0.0);
        CHECK(sol.rate <= 1e-9);
        for (std::size_t e = 0; e < sol.channel.rows(); ++e)
            for (std::size_t x = 0; x < sol.channel.cols(); ++x)
                CHECK(sol.channel(e, x) == doctest::Approx(sol.marginal[x]).epsilon(1e-12));
    }
}

TEST_CASE("binary source under Hamming distortion follows 1 - h2(D)") {
    const Distribution fair = Distribution::uniform(2);
    for (double beta : {0.5, 1.0, 2.0, 4.0}) {
        const auto sol = blahut_arimoto(fair, hamming(2), beta);
        CHECK(sol.converged);
        CHECK(std::abs(sol.rate - oracle::binary_hamming_rd(sol.distortion)) <= 1e-4);
    }
}

TEST_CASE("large beta selects each row's minimum") {
    std::mt19937_64 gen(2);
    for (int i = 0; i < 20; ++i) {
        auto inst = random_instance(gen, 3 + gen() % 6, 2 + gen() % 6);
        const auto sol = blahut_arimoto(inst.source, inst.d, 1e6);
        for (std::size_t e = 0; e < inst.dist.size(); ++e) {
            const auto& row = inst.dist[e];
            const std::size_t argmin = static_cast<std::size_t>(std::min_element(row.begin(), row.end()) - row.begin());
            CHECK(sol.channel(e, argmin) == doctest::Approx(1.0).epsilon(1e-9));
        }
    }
}

TEST_CASE("beta limit rate equals the entropy of the argmin marginal") {
    std::mt19937_64 gen(3);
    for (int i = 0; i < 30; ++i) {
        auto inst = random_instance(gen, 2 + gen() % 10, 2 + gen() % 6);
        std::vector<double> q(inst.d.cols(), 0.0);
        bool separated = true;
        for (std::size_t e = 0; e < inst.dist.size(); ++e) {
            auto row = inst.dist[e];
            const std::size_t a = static_cast<std::size_t>(std::min_element(row.begin(), row.end()) - row.begin());
            q[a] += inst.src[e];
            std::sort(row.begin(), row.end());
            separated = separated && row[1] - row[0] > 1e-4;
        }
        if (!separated) continue;
        for (double beta : {1e6, std::numeric_limits<double>::infinity()}) {
            const auto sol = blahut_arimoto(inst.source, inst.d, beta);
            CHECK(sol.rate == doctest::Approx(oracle::entropy(q)).epsilon(1e-6));
        }
    }
}

TEST_CASE("infinite beta splits ties through the fixed point") {
    // Both environments are indifferent between targets 0 and 1; the
    // cheapest description uses a single target.
    Matrix d(2, 3, 1.0);
    d(0, 0) = d(0, 1) = 0.0;
    d(1, 0) = d(1, 1) = 0.0;
    const auto sol = blahut_arimoto(Distribution::uniform(2), DistortionMatrix(d),
                                    std::numeric_limits<double>::infinity());
    CHECK(sol.distortion == 0.0);
    CHECK(sol.rate <= 1e-9);
    CHECK(sol.marginal[2] == 0.0);
}

TEST_CASE("objective J") {
    std::mt19937_64 gen(4);
    auto inst = random_instance(gen, 3, 3);
    const Distribution q(oracle::random_simplex(gen, 3));

    Matrix product(3, 3);
    for (std::size_t e = 0; e < 3; ++e)
        for (std::size_t x = 0; x < 3; ++x) product(e, x) = q[x];
    CHECK(objective_J(inst.source, product, q, inst.d, 0.0) == doctest::Approx(0.0).epsilon(1e-15));

    Matrix channel(3, 3);
    oracle::Mat och(3);
    for (std::size_t e = 0; e < 3; ++e) {
        och[e] = oracle::random_simplex(gen, 3);
        for (std::size_t x = 0; x < 3; ++x) channel(e, x) = och[e][x];
    }
    for (double beta : {0.0, 0.7, 12.0}) {
        const double j = objective_J(inst.source, channel, q, inst.d, beta);
        CHECK(std::abs(j - oracle::objective(inst.src, och, oracle::Vec(q.probs().begin(), q.probs().end()),
                                             inst.dist, beta)) <= 1e-12);
    }

    // Against the induced marginal, J is mutual information plus beta E[d].
    const auto joint = JointDistribution::from_channel(inst.source, channel);
    const Distribution col = joint.col_marginal();
    const Distribution induced(std::vector<double>(col.probs().begin(), col.probs().end()));
    double dist = 0.0;
    for (std::size_t e = 0; e < 3; ++e)
        for (std::size_t x = 0; x < 3; ++x) dist += inst.src[e] * channel(e, x) * inst.dist[e][x];
    CHECK(objective_J(inst.source, channel, induced, inst.d, 2.0) ==
          doctest::Approx(mutual_information(joint) + 2.0 * dist).epsilon(1e-12));

    CHECK(std::isinf(objective_J(inst.source, channel, Distribution({1.0, 0.0, 0.0}), inst.d, 1.0)));
    CHECK_THROWS_AS(objective_J(inst.source, Matrix(2, 3, 0.5), q, inst.d, 1.0), ValidationError);
}

TEST_CASE("objective is non-increasing across every half-step") {
    std::mt19937_64 gen(5);
    BAConfig cfg;
    cfg.record_trace = true;
    for (int i = 0; i < 100; ++i) {
        auto inst = random_instance(gen, 1 + gen() % 16, 1 + gen() % 16, 2.0);
        const double beta = std::exp(std::uniform_real_distribution<double>(-3.0, 5.0)(gen));
        const auto sol = blahut_arimoto(inst.source, inst.d, beta, cfg);
        for (std::size_t k = 1; k < sol.objective_trace.size(); ++k)
            CHECK(sol.objective_trace[k] <= sol.objective_trace[k - 1] + 1e-12);

        for (std::size_t e = 0; e < sol.channel.rows(); ++e) {
            double mass = 0.0;
            for (double p : sol.channel.row(e)) mass += inst.src[e] * p;
            CHECK(std::abs(mass - inst.src[e]) <= 1e-12);
        }
    }
}

TEST_CASE("solution invariants") {
    std::mt19937_64 gen(6);
    for (int i = 0; i < 30; ++i) {
        auto inst = random_instance(gen, 2 + gen() % 8, 2 + gen() % 8);
        const auto sol = blahut_arimoto(inst.source, inst.d, 3.0);
        CHECK(sol.rate >= -1e-9);
        for (std::size_t x = 0; x < sol.channel.cols(); ++x) {
            double col = 0.0;
            for (std::size_t e = 0; e < sol.channel.rows(); ++e) col += inst.src[e] * sol.channel(e, x);
            CHECK(std::abs(col - sol.marginal[x]) <= 1e-9);
        }
        for (std::size_t e = 0; e < sol.channel.rows(); ++e) {
            double row = 0.0;
            for (double p : sol.channel.row(e)) row += p;
            CHECK(std::abs(row - 1.0) <= 1e-9);
        }
        // Matches a naive linear-domain solver run to the same fixed point.
        const auto ref = oracle::blahut_arimoto(inst.src, inst.dist, 3.0, 20000);
        const auto joint = JointDistribution::from_channel(inst.source, sol.channel);
        Matrix ref_channel(inst.dist.size(), inst.dist.front().size());
        for (std::size_t e = 0; e < ref.channel.size(); ++e)
            for (std::size_t x = 0; x < ref.channel[e].size(); ++x) ref_channel(e, x) = ref.channel[e][x];
        const double ref_j = objective_J(inst.source, ref_channel, Distribution(ref.q), inst.d, 3.0);
        CHECK(objective_J(inst.source, sol.channel, sol.marginal, inst.d, 3.0) >= ref_j - 1e-12);
        BAConfig tight;
        tight.tol = 1e-15;
        tight.max_iters = 200000;
        const auto deep = blahut_arimoto(inst.source, inst.d, 3.0, tight);
        CHECK(objective_J(inst.source, deep.channel, deep.marginal, inst.d, 3.0) ==
              doctest::Approx(ref_j).epsilon(1e-10));
    }
}

TEST_CASE("rows that underflow in the linear domain") {
    Matrix d(2, 2);
    d(0, 0) = 1000.0;
    d(0, 1) = 1001.0;
    d(1, 0) = 1002.0;
    d(1, 1) = 1000.0;
    const auto sol = blahut_arimoto(Distribution::uniform(2), DistortionMatrix(d), 1e6);
    CHECK(sol.channel(0, 0) == doctest::Approx(1.0));
    CHECK(sol.channel(1, 1) == doctest::Approx(1.0));
    CHECK(sol.rate == doctest::Approx(1.0));
}

TEST_CASE("zero-mass targets stay in the alphabet") {
    BAConfig cfg;
    cfg.init_marginal = Distribution({0.5, 0.5, 0.0});
    Matrix d(2, 3, 1.0);
    d(0, 0) = d(1, 1) = 0.0;
    d(0, 2) = d(1, 2) = 0.0;
    const auto sol = blahut_arimoto(Distribution::uniform(2), DistortionMatrix(d), 2.0, cfg);
    REQUIRE(sol.channel.cols() == 3);
    CHECK(sol.marginal[2] == 0.0);
    CHECK(std::isfinite(sol.rate));
}

TEST_CASE("solver input validation") {
    const auto d = hamming(2);
    CHECK_THROWS_AS(blahut_arimoto(Distribution({"x", "y"}, {0.5, 0.5}), d, 1.0), ValidationError);
    CHECK_THROWS_AS(blahut_arimoto(Distribution::uniform(3), d, 1.0), ValidationError);
    CHECK_THROWS_AS(blahut_arimoto(Distribution::uniform(2), d, -1.0), ValidationError);
    BAConfig bad;
    bad.tol = 0.0;
    CHECK_THROWS_AS(blahut_arimoto(Distribution::uniform(2), d, 1.0, bad), ValidationError);
    bad = {};
    bad.max_iters = 0;
    CHECK_THROWS_AS(blahut_arimoto(Distribution::uniform(2), d, 1.0, bad), ValidationError);
    CHECK_THROWS_AS(DistortionMatrix(Matrix(2, 2, -1.0)), ValidationError);
    CHECK_THROWS_AS(DistortionMatrix(Matrix(1, 1, std::numeric_limits<double>::infinity())), ValidationError);

    BAConfig one;
    one.max_iters = 1;
    const auto sol = blahut_arimoto(Distribution::uniform(2), d, 1.0, one);
    CHECK(sol.iterations == 1);
    CHECK_FALSE(sol.converged);
}

TEST_CASE("rate-distortion curve") {
    const Distribution fair = Distribution::uniform(2);
    const double zero[] = {0.0};
    const auto single = rd_curve(fair, hamming(2), zero);
    REQUIRE(single.size() == 1);
    CHECK(single[0].rate <= 1e-9);
    CHECK(single[0].distortion == doctest::Approx(0.5));

    const double sweep[] = {0.5, 1.0, 2.0, 4.0};
    for (const auto& p : rd_curve(fair, hamming(2), sweep))
        CHECK(std::abs(p.rate - oracle::binary_hamming_rd(p.distortion)) <= 1e-4);

    const double dup[] = {1.5, 1.5};
    const auto twice = rd_curve(fair, hamming(2), dup);
    CHECK(twice[0].rate == twice[1].rate);
    CHECK(twice[0].distortion == twice[1].distortion);

    CHECK_THROWS_AS(rd_curve(fair, hamming(2), std::span<const double>{}), ValidationError);
}

TEST_CASE("traced curves are monotone and satisfy the tangent inequality") {
    std::mt19937_64 gen(8);
    const double betas[] = {0.0, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0, 32.0, 64.0};
    for (int i = 0; i < 10; ++i) {
        auto inst = random_instance(gen, 2 + gen() % 8, 2 + gen() % 8);
        const auto curve = rd_curve(inst.source, inst.d, betas);
        for (std::size_t k = 1; k < curve.size(); ++k) {
            CHECK(curve[k].distortion <= curve[k - 1].distortion + 1e-6);
            CHECK(curve[k].rate >= curve[k - 1].rate - 1e-6);
        }
        for (const auto& p1 : curve)
            for (const auto& p2 : curve) CHECK(p2.rate + p1.beta * p2.distortion >= p1.rate + p1.beta * p1.distortion - 1e-6);
    }
}

TEST_CASE("interpolated rate along a traced curve") {
    const std::vector<RDCurvePoint> curve = {{0, 1.0, 0.0}, {1, 0.5, 0.5}, {2, 0.0, 2.0}, {3, 0.4, 1.5}};
    // (0.4, 1.5) lies above the chord between (0, 2) and (0.5, 0.5).
    CHECK(interpolate_rate(curve, 0.25) == doctest::Approx(1.25));
    CHECK(interpolate_rate(curve, 0.4) == doctest::Approx(0.8));
    CHECK(interpolate_rate(curve, 0.75) == doctest::Approx(0.25));
    CHECK(interpolate_rate(curve, 2.0) == 0.0);
    CHECK(std::isinf(interpolate_rate(curve, -0.1)));
}
