#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "hiqa/metrics.hpp"
#include "oracles.hpp"

using namespace hiqa;

namespace {

// Constant-line fan: level l maps to the constant l - 50.
QuantileFan synthetic_fan(std::size_t length) {
    QuantileFan fan;
    for (int l = 0; l <= 100; l += 5) {
        fan.levels.push_back(static_cast<double>(l));
        fan.lines.emplace_back(length, static_cast<double>(l) - 50.0);
    }
    return fan;
}

}  // namespace

TEST_CASE("metric descriptors") {
    CHECK(pattern_requirement(MetricKind::Mse) == PatternKind::Mean);
    CHECK(pattern_requirement(MetricKind::Mape) == PatternKind::Mean);
    CHECK(pattern_requirement(MetricKind::Sqif) == PatternKind::QuantileFan);
    CHECK(pattern_requirement(MetricKind::KupiecPof) == PatternKind::IncrementQuantileLine);
    CHECK(pattern_requirement(MetricKind::KupiecTuff) == PatternKind::IncrementQuantileLine);
    CHECK(metric_from_name("SQIF") == MetricKind::Sqif);
    CHECK(!metric_from_name("sqif").has_value());
    CHECK(all_metrics().size() == 5);
    for (MetricKind kind : all_metrics()) CHECK(lower_is_better(kind));
}

TEST_CASE("mse") {
    const std::vector<double> p{1.5, -2.0, 0.25};
    CHECK(mse(p, p) == 0.0);
    CHECK(mse(std::vector<double>{0, 0}, std::vector<double>{3, 4}) ==
          doctest::Approx(12.5).epsilon(1e-12));
    CHECK_THROWS_AS(mse(p, std::vector<double>{1.0}), std::invalid_argument);

    std::mt19937_64 rng(1);
    std::uniform_real_distribution<double> value(-9.0, 9.0);
    std::vector<double> a(12), b(12);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = value(rng);
        b[i] = value(rng);
    }
    const double base = mse(a, b);
    CHECK(base > 0.0);
    auto ca = a;
    auto cb = b;
    for (double& v : ca) v *= 3.0;
    for (double& v : cb) v *= 3.0;
    CHECK(mse(ca, cb) == doctest::Approx(9.0 * base).epsilon(1e-12));
    CHECK(mse(a, b) == doctest::Approx(oracle::mse(a, b)).epsilon(1e-10));
}

TEST_CASE("mape") {
    const std::vector<double> p{2, 4};
    CHECK(mape(p, p) == 0.0);
    CHECK(mape(p, std::vector<double>{1, 5}) == doctest::Approx(0.375).epsilon(1e-12));

    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> value(0.5, 9.0);
    std::vector<double> a(10), b(10);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a[i] = value(rng);
        b[i] = value(rng);
    }
    const double base = mape(a, b);
    auto ca = a;
    auto cb = b;
    for (double& v : ca) v *= -7.0;
    for (double& v : cb) v *= -7.0;
    CHECK(mape(ca, cb) == doctest::Approx(base).epsilon(1e-12));
    CHECK(mape(a, b) == doctest::Approx(oracle::mape(a, b)).epsilon(1e-10));

    const std::vector<double> hazardous{1.0, 0.0, 2.0};
    try {
        mape(hazardous, std::vector<double>{1, 1, 1});
        FAIL("expected a division-hazard error");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("index 1") != std::string::npos);
    }
}

TEST_CASE("sqif identity coverage scores zero") {
    // 10 points at each magnitude 2.5 + 5k, so exactly q% of the 100 points
    // sit inside the central band of order q for every q in {0,10,...,100}.
    std::vector<double> trajectory;
    for (int k = 0; k < 10; ++k) {
        for (int j = 0; j < 10; ++j) {
            const double magnitude = 2.5 + 5.0 * k;
            trajectory.push_back(j % 2 == 0 ? magnitude : -magnitude);
        }
    }
    const auto fan = synthetic_fan(trajectory.size());
    CHECK(sqif(fan, trajectory) == 0.0);
}

TEST_CASE("sqif boundary cases and invariance") {
    // All points inside every band (even the zero-width median band).
    const std::vector<double> on_median(40, 0.0);
    const auto fan = synthetic_fan(on_median.size());
    CHECK(sqif(fan, on_median) == doctest::Approx(0.35).epsilon(1e-12));

    // All points above the 100% line.
    const std::vector<double> above(40, 60.0);
    CHECK(sqif(fan, above) == doctest::Approx(0.35).epsilon(1e-12));

    // Bounded in [0, 1] and invariant under a joint increasing affine map.
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> value(-80.0, 80.0);
    std::vector<double> random(40);
    for (double& v : random) v = value(rng);
    const double score = sqif(fan, random);
    CHECK(score >= 0.0);
    CHECK(score <= 1.0);

    QuantileFan mapped = fan;
    for (auto& line : mapped.lines) {
        for (double& v : line) v = 0.25 * v + 3.0;
    }
    auto mapped_trajectory = random;
    for (double& v : mapped_trajectory) v = 0.25 * v + 3.0;
    CHECK(sqif(mapped, mapped_trajectory) == score);

    // Missing band level is a configuration error.
    QuantileFan sparse;
    sparse.levels = {0.0, 100.0};
    sparse.lines = {std::vector<double>(40, -1.0), std::vector<double>(40, 1.0)};
    CHECK_THROWS_AS(sqif(sparse, random), std::invalid_argument);
}

TEST_CASE("sqif agrees with the recounted reference") {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> value(-70.0, 70.0);
    const auto fan = synthetic_fan(25);
    const SqifConfig config;
    std::vector<std::vector<double>> lowers, uppers;
    for (double q : config.band_orders) {
        lowers.push_back(fan.line_at((100.0 - q) / 2.0));
        uppers.push_back(fan.line_at((100.0 + q) / 2.0));
    }
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> trajectory(25);
        for (double& v : trajectory) v = value(rng);
        const double got = sqif(fan, trajectory, config);
        const double want = oracle::sqif(config.band_orders, lowers, uppers, trajectory);
        CHECK(got == doctest::Approx(want).epsilon(1e-10));
    }
}

TEST_CASE("kupiec pof statistic") {
    CHECK(std::abs(kupiec_pof_statistic(100, 49, 0.49)) <= 1e-9);
    CHECK(kupiec_pof_statistic(100, 0, 0.49) ==
          doctest::Approx(134.66891065275314).epsilon(1e-12));
    CHECK(kupiec_pof_statistic(100, 100, 0.49) ==
          doctest::Approx(142.66997757549296).epsilon(1e-12));
    CHECK_THROWS_AS(kupiec_pof_statistic(0, 0, 0.49), std::invalid_argument);
    CHECK_THROWS_AS(kupiec_pof_statistic(10, 11, 0.49), std::invalid_argument);
    CHECK_THROWS_AS(kupiec_pof_statistic(10, 5, 1.0), std::invalid_argument);

    // Nonnegative over the whole exceedance range, against the reference.
    for (const double p_star : {0.49, 0.25, 0.02}) {
        for (int n : {1, 7, 100, 599}) {
            for (int x = 0; x <= n; x += std::max(1, n / 17)) {
                const double v = kupiec_pof_statistic(n, x, p_star);
                CHECK(v >= -1e-9);
                CHECK(v == doctest::Approx(oracle::pof_statistic(n, x, p_star)).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("kupiec pof depends on increments only through the exceedance count") {
    IncrementQuantileLine line;
    line.order = 51.0;
    line.values = std::vector<double>(10, 0.0);
    std::vector<double> diffs{0.5, -0.5, 1.5, -1.5, 0.25, -0.25, 2.0, -2.0, 0.75, -0.75};
    const double base = kupiec_pof(line, diffs);
    // Perturb without crossing the line.
    for (double& d : diffs) d *= 1.9;
    CHECK(kupiec_pof(line, diffs) == base);
    CHECK_THROWS_AS(kupiec_pof(line, std::vector<double>{}), std::invalid_argument);
    CHECK_THROWS_AS(kupiec_pof(line, std::vector<double>{1.0}), std::invalid_argument);
}

TEST_CASE("tuff order solver") {
    CHECK(solve_tuff_order(1).p_star == 0.5);
    const auto order199 = solve_tuff_order(199);
    CHECK(order199.p_star == doctest::Approx(0.019572817824680955).epsilon(1e-12));
    CHECK(order199.order == doctest::Approx(98.042718217531899).epsilon(1e-12));
    CHECK(std::abs(std::pow(1.0 - order199.p_star, 199.0) - order199.p_star) < 1e-12);
    CHECK(order199.p_star == doctest::Approx(oracle::tuff_root(199)).epsilon(1e-12));
    CHECK_THROWS_AS(solve_tuff_order(0), std::invalid_argument);

    double previous = 1.0;
    for (int n : {1, 2, 5, 13, 47, 199, 1024, 5000, 10000}) {
        const auto order = solve_tuff_order(n);
        CHECK(std::abs(std::pow(1.0 - order.p_star, static_cast<double>(n)) - order.p_star) <
              1e-12);
        CHECK(order.p_star < previous);
        previous = order.p_star;
    }
}

TEST_CASE("kupiec tuff statistic") {
    CHECK(std::abs(kupiec_tuff_statistic(100, 50, 0.02)) <= 1e-9);
    const double p199 = 0.019572817824680955;
    CHECK(kupiec_tuff_statistic(199, std::nullopt, p199) ==
          doctest::Approx(7.8672270419714723).epsilon(1e-12));
    CHECK(kupiec_tuff_statistic(199, 1, p199) ==
          doctest::Approx(1565.5781813523204).epsilon(1e-12));
    CHECK_THROWS_AS(kupiec_tuff_statistic(10, 0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(kupiec_tuff_statistic(10, 11, 0.1), std::invalid_argument);

    for (const double p_star : {0.5, 0.1, 0.019572817824680955}) {
        for (int n : {5, 37, 199}) {
            CHECK(kupiec_tuff_statistic(n, std::nullopt, p_star) >= -1e-9);
            for (int x = 1; x <= n; x += std::max(1, n / 11)) {
                const double v = kupiec_tuff_statistic(n, x, p_star);
                CHECK(v >= -1e-9);
                CHECK(v ==
                      doctest::Approx(oracle::tuff_statistic(n, x, p_star)).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("kupiec tuff finds the first exceedance") {
    IncrementQuantileLine line;
    line.order = 98.0;
    line.values = std::vector<double>(6, 1.0);
    const std::vector<double> no_exceedance{0, 0.5, -2, 0.7, 0.2, 1.0};  // ties do not exceed
    CHECK(kupiec_tuff(line, no_exceedance) ==
          doctest::Approx(kupiec_tuff_statistic(6, std::nullopt, 0.02)).epsilon(1e-12));
    const std::vector<double> third{0, 0.5, 2.0, 5.0, 0.2, 9.0};
    CHECK(kupiec_tuff(line, third) ==
          doctest::Approx(kupiec_tuff_statistic(6, 3, 0.02)).epsilon(1e-12));
    CHECK_THROWS_AS(kupiec_tuff(line, std::vector<double>{}), std::invalid_argument);
}
