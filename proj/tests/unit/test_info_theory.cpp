#include "rdbandit/error.hpp"
#include "rdbandit/info_theory.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

using namespace rdbandit;

TEST_CASE("entropy of reference distributions") {
    CHECK(entropy(Distribution::uniform(2)) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(entropy(Distribution::point_mass(3, 1)) == 0.0);
    // mpmath, 30 digits: 0.811278124459132863909695792039
    CHECK(entropy(Distribution({0.25, 0.75})) == doctest::Approx(0.811278124459132863909695792039).epsilon(1e-14));
}

TEST_CASE("entropy stays within [0, log2 n]") {
    std::mt19937_64 gen(7);
    for (int i = 0; i < 200; ++i) {
        const std::size_t n = 1 + gen() % 12;
        const Distribution p(oracle::random_simplex(gen, n));
        const double h = entropy(p);
        CHECK(h >= 0.0);
        CHECK(h <= std::log2(static_cast<double>(n)) + 1e-12);
    }
}

TEST_CASE("distribution validation") {
    CHECK_THROWS_AS(Distribution({0.5, 0.6}), ValidationError);
    CHECK_THROWS_AS(Distribution({-0.1, 1.1}), ValidationError);
    CHECK_THROWS_AS(Distribution({"a", "a"}, {0.5, 0.5}), ValidationError);
    CHECK_THROWS_AS(Distribution(std::vector<double>{}), ValidationError);

    // Within tolerance: accepted and renormalized.
    const Distribution p({0.5 + 4e-10, 0.5});
    CHECK(p[0] + p[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("kl divergence") {
    const Distribution p({0.3, 0.7});
    CHECK(kl_divergence(p, p) == 0.0);
    CHECK(kl_divergence(Distribution({1.0, 0.0}), Distribution({0.5, 0.5})) == doctest::Approx(1.0));
    CHECK(std::isinf(kl_divergence(Distribution({0.5, 0.5}), Distribution({1.0, 0.0}))));
    CHECK_THROWS_AS(kl_divergence(Distribution({"a", "b"}, {0.5, 0.5}), Distribution({"a", "c"}, {0.5, 0.5})),
                    ValidationError);
    CHECK_THROWS_AS(kl_divergence(Distribution::uniform(2), Distribution::uniform(3)), ValidationError);
}

TEST_CASE("Gibbs inequality on random pairs") {
    std::mt19937_64 gen(11);
    for (int i = 0; i < 500; ++i) {
        const std::size_t n = 2 + gen() % 8;
        const Distribution p(oracle::random_simplex(gen, n));
        const Distribution q(oracle::random_simplex(gen, n));
        CHECK(kl_divergence(p, q) >= 0.0);
        CHECK(kl_divergence(p, p) <= 1e-9);
    }
}

TEST_CASE("mutual information reference values") {
    Matrix indep(2, 3);
    const double px[] = {0.3, 0.7}, py[] = {0.2, 0.5, 0.3};
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 3; ++j) indep(i, j) = px[i] * py[j];
    CHECK(mutual_information(JointDistribution(indep)) == doctest::Approx(0.0).epsilon(1e-12));

    Matrix diag(2, 2);
    diag(0, 0) = diag(1, 1) = 0.5;
    CHECK(mutual_information(JointDistribution(diag)) == doctest::Approx(1.0).epsilon(1e-15));

    Matrix corr(2, 2);
    corr(0, 0) = corr(1, 1) = 0.4;
    corr(0, 1) = corr(1, 0) = 0.1;
    // 2 H(0.5) - H(0.4, 0.1, 0.1, 0.4), mpmath: 0.278071905112637652129680570511
    CHECK(mutual_information(JointDistribution(corr)) == doctest::Approx(0.278071905112637652).epsilon(1e-13));
    CHECK_THROWS_AS(JointDistribution(Matrix(2, 2, 0.3)), ValidationError);
}

TEST_CASE("mutual information properties on random joints") {
    std::mt19937_64 gen(13);
    for (int i = 0; i < 200; ++i) {
        const std::size_t r = 1 + gen() % 6, c = 1 + gen() % 6;
        const auto flat = oracle::random_simplex(gen, r * c);
        Matrix m(r, c);
        oracle::Mat om(r, oracle::Vec(c));
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t b = 0; b < c; ++b) m(a, b) = om[a][b] = flat[a * c + b];
        const JointDistribution j(m);
        const double mi = mutual_information(j);

        CHECK(mi >= 0.0);
        CHECK(mi == doctest::Approx(oracle::mutual_information(om)).epsilon(1e-9));
        CHECK(std::abs(mi - mutual_information(j.transposed())) <= 1e-12);

        // Infimum over product measures.
        const auto mx = oracle::random_simplex(gen, r);
        const auto my = oracle::random_simplex(gen, c);
        double kl = 0.0;
        for (std::size_t a = 0; a < r; ++a)
            for (std::size_t b = 0; b < c; ++b)
                if (m(a, b) > 0) kl += m(a, b) * std::log2(m(a, b) / (mx[a] * my[b]));
        CHECK(kl >= mi - 1e-9);
    }
}

TEST_CASE("uniform continuity of entropy") {
    std::mt19937_64 gen(17);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int checked = 0;
    while (checked < 500) {
        const std::size_t n = 2 + gen() % 8;
        const auto p = oracle::random_simplex(gen, n);
        // Pull q toward p so the L1 distance lands below 1/2 often.
        const auto r = oracle::random_simplex(gen, n);
        const double w = unit(gen) * 0.3;
        std::vector<double> q(n);
        for (std::size_t i = 0; i < n; ++i) q[i] = (1 - w) * p[i] + w * r[i];
        double l1 = 0.0;
        for (std::size_t i = 0; i < n; ++i) l1 += std::abs(p[i] - q[i]);
        if (l1 == 0.0 || l1 > 0.5) continue;
        ++checked;
        const double gap = std::abs(entropy(Distribution(p)) - entropy(Distribution(q)));
        CHECK(gap <= l1 * std::log2(static_cast<double>(n) / l1) + 1e-12);
    }
}

TEST_CASE("log_sum_exp") {
    const double single[] = {0.0};
    CHECK(log_sum_exp(single) == 0.0);
    const double pair[] = {3.5, 3.5};
    CHECK(log_sum_exp(pair) == doctest::Approx(3.5 + std::log(2.0)).epsilon(1e-15));
    const double far[] = {-1000.0, -1001.0};
    // -1000 + log(1 + e^-1), mpmath: -999.686738312481777165951004505
    CHECK(log_sum_exp(far) == doctest::Approx(-999.686738312481777).epsilon(1e-15));
    const double with_neg_inf[] = {-std::numeric_limits<double>::infinity(), 2.0};
    CHECK(log_sum_exp(with_neg_inf) == doctest::Approx(2.0));
    CHECK_THROWS_AS(log_sum_exp(std::span<const double>{}), ValidationError);
}
