#include <doctest.h>

#include <cmath>
#include <vector>

#include "qtdlab/reward_model.hpp"
#include "support/oracles.hpp"

using namespace qtdlab;

TEST_SUITE("reward_models") {

TEST_CASE("point mass sampling is degenerate") {
    RngStream rng(1);
    const auto model = RewardModel::point_mass(2.5);
    for (int i = 0; i < 100; ++i) CHECK(sample(model, rng) == 2.5);
}

TEST_CASE("gaussian sample mean matches configured mean") {
    RngStream rng(42);
    const auto model = RewardModel::gaussian(0.0, 1.0);
    const int n = 1'000'000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += sample(model, rng);
    CHECK(std::abs(sum / n) < 0.005);  // 4 sigma / sqrt(N) band with margin
}

TEST_CASE("shifted exponential support starts at mean - 1") {
    RngStream rng(7);
    const auto model = RewardModel::exponential(0.0);
    double lo = 1e300;
    double sum = 0.0;
    const int n = 200'000;
    for (int i = 0; i < n; ++i) {
        const double r = sample(model, rng);
        lo = std::min(lo, r);
        sum += r;
    }
    CHECK(lo >= -1.0);
    CHECK(std::abs(sum / n) < 0.02);
}

TEST_CASE("cdf closed forms") {
    CHECK(cdf(RewardModel::gaussian(0.0, 1.0), 0.0) == doctest::Approx(0.5).epsilon(1e-14));
    // t2 CDF F(t) = (1 + t/sqrt(t^2+2))/2 at the 0.75 quantile
    const double q75 = 0.5 / std::sqrt(2.0 * 0.75 * 0.25);
    CHECK(cdf(RewardModel::student_t2(0.0), q75) == doctest::Approx(0.75).epsilon(1e-14));
    CHECK(cdf(RewardModel::student_t2(0.0), 0.8165) == doctest::Approx(0.75).epsilon(1e-4));
    CHECK(cdf(RewardModel::point_mass(1.0), 0.999) == 0.0);
    CHECK(cdf(RewardModel::point_mass(1.0), 1.0) == 1.0);
}

TEST_CASE("cdf_left differs from cdf only at atoms") {
    const auto pm = RewardModel::point_mass(1.0);
    CHECK(cdf_left(pm, 1.0) == 0.0);
    CHECK(cdf(pm, 1.0) == 1.0);
    const auto g = RewardModel::gaussian(0.0, 2.0);
    CHECK(cdf_left(g, 0.7) == cdf(g, 0.7));
}

TEST_CASE("quantile closed forms") {
    CHECK(quantile(RewardModel::gaussian(3.0, 1.0), 0.5) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(quantile(RewardModel::student_t2(0.0), 0.75) ==
          doctest::Approx(0.81649658092772603).epsilon(1e-9));
    const double p = 1.0 - std::exp(-1.0);
    CHECK(std::abs(quantile(RewardModel::exponential(0.0), p)) < 1e-12);
    CHECK(quantile(RewardModel::point_mass(4.0), 0.001) == 4.0);
    CHECK(quantile(RewardModel::point_mass(4.0), 0.999) == 4.0);
}

TEST_CASE("quantile rejects p outside (0,1)") {
    const auto model = RewardModel::gaussian(0.0, 1.0);
    CHECK_THROWS_AS((void)quantile(model, 0.0), std::invalid_argument);
    CHECK_THROWS_AS((void)quantile(model, 1.0), std::invalid_argument);
    CHECK_THROWS_AS((void)quantile(model, -0.2), std::invalid_argument);
    CHECK_THROWS_AS((void)quantile(model, 1.5), std::invalid_argument);
}

TEST_CASE("mean is the configured mean") {
    CHECK(mean(RewardModel::point_mass(-1.2)) == -1.2);
    CHECK(mean(RewardModel::gaussian(0.7, 5.0)) == 0.7);
    CHECK(mean(RewardModel::student_t2(2.0)) == 2.0);
    CHECK(mean(RewardModel::exponential(-3.0)) == -3.0);
}

TEST_CASE("quantile/cdf round trip for continuous families") {
    RngStream rng(11);
    std::vector<RewardModel> models;
    for (int k = 0; k < 1000; ++k) {
        const double mu = 4.0 * (rng.uniform() - 0.5);
        switch (k % 3) {
            case 0: models.push_back(RewardModel::gaussian(mu, 0.1 + 3.0 * rng.uniform())); break;
            case 1: models.push_back(RewardModel::exponential(mu)); break;
            default: models.push_back(RewardModel::student_t2(mu)); break;
        }
    }
    for (const auto& model : models) {
        const double p = rng.uniform();
        CHECK(std::abs(cdf(model, quantile(model, p)) - p) < 1e-10);
    }
}

TEST_CASE("left-quantile Galois inequalities") {
    RngStream rng(13);
    for (int k = 0; k < 200; ++k) {
        const auto model = (k % 2 == 0) ? RewardModel::gaussian(1.0, 2.0)
                                        : RewardModel::exponential(-0.5);
        const double p = rng.uniform();
        const double q = quantile(model, p);
        CHECK(cdf(model, q) >= p - 1e-12);
        const double z = q - 1e-6;
        CHECK(quantile(model, std::max(1e-12, cdf(model, z))) <= z + 1e-6);
    }
}

TEST_CASE("closed-form quantile agrees with bisection on 99 percentiles") {
    const std::vector<RewardModel> models = {
        RewardModel::gaussian(0.3, 1.7),
        RewardModel::exponential(1.2),
        RewardModel::student_t2(-0.4),
        RewardModel::point_mass(2.0),
    };
    for (const auto& model : models) {
        for (int k = 1; k <= 99; ++k) {
            const double p = k / 100.0;
            const double closed = quantile(model, p);
            const double numeric = oracles::bisect_quantile(
                [&](double z) { return cdf(model, z); }, p, -50.0, 50.0);
            CHECK(std::abs(closed - numeric) < 1e-9);
        }
    }
}

TEST_CASE("samples agree with the CDF (Kolmogorov-Smirnov)") {
    const std::size_t n = 100'000;
    const double crit = oracles::ks_critical(n, 0.001);
    const std::vector<RewardModel> models = {
        RewardModel::gaussian(0.5, 1.0),
        RewardModel::exponential(0.0),
        RewardModel::student_t2(1.0),
    };
    std::uint64_t seed = 1000;
    for (const auto& model : models) {
        RngStream rng(seed++);
        std::vector<double> xs(n);
        for (auto& x : xs) x = sample(model, rng);
        const double d = oracles::ks_statistic(std::move(xs), [&](double z) { return cdf(model, z); });
        CHECK(d < crit);
    }
}

TEST_CASE("kind names round trip") {
    for (RewardKind k : {RewardKind::PointMass, RewardKind::Gaussian, RewardKind::Exponential,
                         RewardKind::StudentT2}) {
        CHECK(kind_from_name(kind_name(k)) == k);
    }
    CHECK_THROWS_AS((void)kind_from_name("cauchy"), std::invalid_argument);
}

}  // TEST_SUITE
