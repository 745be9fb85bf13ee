#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "hiqa/calibration.hpp"
#include "oracles.hpp"

using namespace hiqa;

namespace {

DegradationParams paper_params() { return {6000, 9000, 10000, 1.0, 2.0, 7.0, 25.0, 10.0}; }

CalibrationSpec paper_spec(Regime regime, std::uint64_t seed) {
    CalibrationSpec spec;
    spec.params = paper_params();
    spec.regime = regime;
    spec.master_seed = seed;
    spec.threads = 2;
    return spec;
}

}  // namespace

TEST_CASE("regime windows and the 80/20 split") {
    const auto second = regime_window(paper_params(), Regime::Second, 0.8);
    CHECK(second.train == SampleWindow{6001, 8400});
    CHECK(second.test == SampleWindow{8401, 9000});

    const auto third = regime_window(paper_params(), Regime::Third, 0.8);
    CHECK(third.train == SampleWindow{9001, 9800});
    CHECK(third.test == SampleWindow{9801, 10000});

    // 10-point regime, even split.
    const RegimeBoundaries tiny{2, 4, 14};
    const auto half = regime_window(tiny, Regime::Third, 0.5);
    CHECK(half.train.length() == 5);
    CHECK(half.test.length() == 5);
    CHECK(half.test == SampleWindow{10, 14});

    // Real-data boundaries pass through the same machinery.
    const RegimeBoundaries femto{676, 2149, 2204};
    const auto femto_second = regime_window(femto, Regime::Second, 0.8);
    CHECK(femto_second.train.start == 677);
    CHECK(femto_second.test.end == 2149);
    CHECK(femto_second.train.length() + femto_second.test.length() == 2149 - 676);

    CHECK_THROWS_AS(regime_window(paper_params(), Regime::Second, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(regime_window(paper_params(), Regime::Second, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(regime_window(RegimeBoundaries{2, 4, 6}, Regime::Third, 0.1),
                    std::invalid_argument);
    CHECK_THROWS_AS(regime_window(RegimeBoundaries{5, 4, 6}, Regime::Second, 0.5),
                    std::invalid_argument);
}

TEST_CASE("zero-noise model ties every metric and splits the verdicts at 50") {
    auto spec = paper_spec(Regime::Second, 3);
    spec.noise_scale = 0.0;
    spec.n_prognoses = 5;
    spec.n_tests = 8;
    const auto table = run_calibration(spec);
    for (std::size_t mi = 0; mi < table.metrics.size(); ++mi) {
        for (double score : table.scores[mi]) CHECK(score == 50.0);
        for (std::size_t ti = 0; ti < table.theta_grid.size(); ++ti) {
            const double expected = table.theta_grid[ti] < 50.0 ? 100.0 : 0.0;
            CHECK(table.good_percent[mi][ti] == expected);
        }
    }
}

TEST_CASE("calibration is deterministic per seed and across thread counts") {
    auto spec = paper_spec(Regime::Second, 12);
    spec.n_prognoses = 60;
    spec.n_tests = 80;
    spec.threads = 1;
    const auto a = run_calibration(spec);
    spec.threads = 3;
    const auto b = run_calibration(spec);
    CHECK(a.good_percent == b.good_percent);
    CHECK(a.scores == b.scores);
    const auto c = run_calibration(spec);
    CHECK(b.good_percent == c.good_percent);

    spec.master_seed = 13;
    const auto other = run_calibration(spec);
    CHECK(other.scores != a.scores);
}

TEST_CASE("full-scale null calibration reproduces the expected coverage") {
    const auto second = run_calibration(paper_spec(Regime::Second, 26));
    CHECK(second.test_window == SampleWindow{8401, 9000});

    // Spot anchors for the second regime at theta = 50.
    CHECK(std::abs(second.good(MetricKind::Mse, 50.0) - 47.6) <= 5.0);
    CHECK(std::abs(second.good(MetricKind::Sqif, 50.0) - 50.3) <= 5.0);

    // Every metric stays within 6 pp of the theoretical 100 - theta and the
    // curves fall monotonically (3 pp slack for Monte Carlo noise).
    for (std::size_t mi = 0; mi < second.metrics.size(); ++mi) {
        double previous = 100.0;
        for (std::size_t ti = 0; ti < second.theta_grid.size(); ++ti) {
            const double good = second.good_percent[mi][ti];
            CHECK(std::abs(good - (100.0 - second.theta_grid[ti])) <= 6.0);
            CHECK(good <= previous + 3.0);
            previous = good;
        }
    }

    // Null scores of the continuous metrics are close to uniform.
    for (MetricKind kind : {MetricKind::Mse, MetricKind::Mape, MetricKind::Sqif}) {
        for (std::size_t mi = 0; mi < second.metrics.size(); ++mi) {
            if (second.metrics[mi] == kind) {
                CHECK(oracle::ks_uniform(second.scores[mi], 100.0) < 0.06);
            }
        }
    }

    const auto third = run_calibration(paper_spec(Regime::Third, 26));
    CHECK(third.test_window == SampleWindow{9801, 10000});
    CHECK(std::abs(third.good(MetricKind::Mse, 90.0) - 10.0) <= 4.0);
    for (std::size_t mi = 0; mi < third.metrics.size(); ++mi) {
        for (std::size_t ti = 0; ti < third.theta_grid.size(); ++ti) {
            CHECK(std::abs(third.good_percent[mi][ti] - (100.0 - third.theta_grid[ti])) <= 6.0);
        }
    }
}

TEST_CASE("independent seeds agree within Monte Carlo noise") {
    const auto a = run_calibration(paper_spec(Regime::Second, 26));
    const auto b = run_calibration(paper_spec(Regime::Second, 27));
    for (std::size_t mi = 0; mi < a.good_percent.size(); ++mi) {
        for (std::size_t ti = 0; ti < a.good_percent[mi].size(); ++ti) {
            CHECK(std::abs(a.good_percent[mi][ti] - b.good_percent[mi][ti]) <= 8.0);
        }
    }
}

TEST_CASE("table lookups and argument checks") {
    auto spec = paper_spec(Regime::Second, 4);
    spec.n_prognoses = 10;
    spec.n_tests = 10;
    const auto table = run_calibration(spec);
    CHECK_NOTHROW(table.good(MetricKind::Mape, 50.0));
    CHECK_THROWS_AS(table.good(MetricKind::Mape, 55.0), std::invalid_argument);

    spec.n_prognoses = 1;
    CHECK_THROWS_AS(run_calibration(spec), std::invalid_argument);
    spec.n_prognoses = 10;
    spec.theta_grid.clear();
    CHECK_THROWS_AS(run_calibration(spec), std::invalid_argument);
}
