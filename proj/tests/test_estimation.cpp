#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "hiqa/degradation.hpp"
#include "hiqa/estimation.hpp"

using namespace hiqa;

namespace {

DegradationParams paper_params() { return {6000, 9000, 10000, 1.0, 2.0, 7.0, 25.0, 10.0}; }

double median(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    return values[values.size() / 2];
}

}  // namespace

TEST_CASE("linear fit recovers a noiseless line exactly") {
    Trajectory data;
    data.start = 101;
    for (int t = 101; t <= 160; ++t) data.values.push_back(0.75 * t - 12.0);
    const auto model = fit_linear_window(data);
    CHECK(model.kind == WindowModel::Kind::Linear);
    CHECK(model.trend_slope == doctest::Approx(0.75).epsilon(1e-9));
    for (int t : {101, 130, 160}) {
        CHECK(model.trend_at(t) == doctest::Approx(0.75 * t - 12.0).epsilon(1e-9));
        CHECK(model.scale_at(t) > 0.0);
        CHECK(model.scale_at(t) <= 2.0 * model.scale_floor + 1e-12);
    }
}

TEST_CASE("linear fit of a constant series") {
    Trajectory data;
    data.start = 1;
    data.values.assign(25, 4.5);
    const auto model = fit_linear_window(data);
    CHECK(model.trend_slope == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(model.trend_at(13) == doctest::Approx(4.5).epsilon(1e-12));
}

TEST_CASE("window fits reject too-short input") {
    Trajectory tiny;
    tiny.start = 1;
    tiny.values.assign(9, 1.0);
    CHECK_THROWS_AS(fit_linear_window(tiny), std::invalid_argument);
    CHECK_THROWS_AS(fit_exponential_window(tiny), std::invalid_argument);
}

TEST_CASE("linear fit recovers the second-regime trend and scale from noisy data") {
    const auto p = paper_params();
    const auto c = derive_coefficients(p);
    const SampleWindow window{6001, 9000};
    std::vector<double> slope_err, scale_lo_err, scale_hi_err;
    for (int s = 0; s < 100; ++s) {
        const auto data = simulate_trajectory(p, c, window, child_seed(1001, s));
        const auto model = fit_linear_window(data);
        slope_err.push_back(std::abs(model.trend_slope / c.a2 - 1.0));
        scale_lo_err.push_back(std::abs(model.scale_at(window.start) / p.sigma2 - 1.0));
        scale_hi_err.push_back(std::abs(model.scale_at(window.end) / p.sigma3 - 1.0));
    }
    CHECK(median(slope_err) < 0.10);
    CHECK(median(scale_lo_err) < 0.15);
    CHECK(median(scale_hi_err) < 0.15);
}

TEST_CASE("exponential fit recovers a noiseless exponential with an on-grid rate") {
    const auto grid = exponential_rate_grid({});
    const double rate = grid[150];
    const SampleWindow window{9001, 10000};
    const double t_ref = window.start + (window.length() - 1) / 2.0;
    Trajectory data;
    data.start = window.start;
    for (int t = window.start; t <= window.end; ++t) {
        data.values.push_back(3.0 * std::exp(rate * (t - t_ref)) + 5.0);
    }
    const auto model = fit_exponential_window(data);
    CHECK(model.trend_rate == doctest::Approx(rate).epsilon(1e-9));
    for (int t = window.start; t <= window.end; t += 111) {
        const double truth = 3.0 * std::exp(rate * (t - t_ref)) + 5.0;
        CHECK(model.trend_at(t) == doctest::Approx(truth).epsilon(1e-6));
    }
    CHECK(model.scale_at(window.start) <= 2.0 * model.scale_floor + 1e-12);
}

TEST_CASE("exponential fit of a pure line picks the flattest rate") {
    const SampleWindow window{6001, 9000};
    Trajectory data;
    data.start = window.start;
    for (int t = window.start; t <= window.end; ++t) data.values.push_back(0.002 * t - 1.0);
    const auto model = fit_exponential_window(data);
    const auto grid = exponential_rate_grid({});
    CHECK(model.trend_rate == doctest::Approx(grid.front()).epsilon(1e-12));
    for (int t = window.start; t <= window.end; t += 97) {
        CHECK(model.trend_at(t) == doctest::Approx(0.002 * t - 1.0).epsilon(1e-3));
    }
}

TEST_CASE("exponential fit recovers the third-regime trend from noisy data") {
    const auto p = paper_params();
    const auto c = derive_coefficients(p);
    const SampleWindow window{9001, 10000};
    const int t_mid = 9500;
    std::vector<double> mid_err, end_err;
    for (int s = 0; s < 100; ++s) {
        const auto data = simulate_trajectory(p, c, window, child_seed(2002, s));
        const auto model = fit_exponential_window(data);
        mid_err.push_back(std::abs(model.trend_at(t_mid) / trend_at(p, c, t_mid) - 1.0));
        end_err.push_back(std::abs(model.trend_at(window.end) / trend_at(p, c, window.end) - 1.0));
    }
    CHECK(median(mid_err) < 0.10);
    CHECK(median(end_err) < 0.10);
}

TEST_CASE("fit, simulate, refit round trip keeps the trend") {
    const auto p = paper_params();
    const auto c = derive_coefficients(p);
    const SampleWindow window{9001, 10000};
    const auto data = simulate_trajectory(p, c, window, 31);
    const auto first = fit_exponential_window(data);
    const auto resim = simulate_trajectory_from_model(first, window, 32);
    const auto second = fit_exponential_window(resim);
    for (int t : {9001, 9500, 10000}) {
        CHECK(second.trend_at(t) == doctest::Approx(first.trend_at(t)).epsilon(0.10));
    }
    // Fitted scale stays positive over the window for both fits.
    for (int t = window.start; t <= window.end; t += 37) {
        CHECK(first.scale_at(t) > 0.0);
        CHECK(second.scale_at(t) > 0.0);
    }
}

TEST_CASE("window-model simulation honors the trend, scale and seeding") {
    WindowModel model;
    model.kind = WindowModel::Kind::Linear;
    model.t_ref = 0.0;
    model.trend_slope = 0.5;
    model.trend_intercept = 3.0;
    model.scale_slope = 0.0;
    model.scale_intercept = 0.0;
    model.scale_floor = 0.0;
    const SampleWindow window{1, 50};

    // Zero scale: every trajectory equals the trend exactly.
    const auto flat = simulate_from_window_model(model, window, 3, 9);
    for (const auto& member : flat.trajectories) {
        for (int t = window.start; t <= window.end; ++t) {
            CHECK(member[static_cast<std::size_t>(t - 1)] == model.trend_at(t));
        }
    }

    model.scale_slope = 0.01;
    model.scale_intercept = 2.0;
    model.scale_floor = 1e-9;
    const auto a = simulate_from_window_model(model, window, 4, 11);
    const auto b = simulate_from_window_model(model, window, 4, 11);
    CHECK(a.trajectories == b.trajectories);
    CHECK_THROWS_AS(simulate_from_window_model(model, window, 1, 11), std::invalid_argument);

    const SampleWindow longer{1, 200};
    const auto big = simulate_from_window_model(model, longer, 1000, 5150);
    for (int t = longer.start; t <= longer.end; ++t) {
        double s = 0.0, s2 = 0.0;
        for (const auto& member : big.trajectories) {
            const double v = member[static_cast<std::size_t>(t - 1)];
            s += v;
            s2 += v * v;
        }
        const double mean = s / 1000.0;
        const double sd = std::sqrt(s2 / 1000.0 - mean * mean);
        CHECK(sd == doctest::Approx(model.scale_at(t)).epsilon(0.10));
    }
}
