#pragma once

#include <cstdint>
#include <vector>

#include "hiqa/trajectory.hpp"

namespace hiqa {

// Fitted single-window model: deterministic trend plus a positive noise
// envelope, both either linear (warning-stage form) or exponential
// (critical-stage form). Times evaluate relative to t_ref so exponentials
// stay well scaled on long windows.
struct WindowModel {
    enum class Kind { Linear, Exponential };

    Kind kind = Kind::Linear;
    double t_ref = 0.0;

    // Trend: Linear -> slope*(t-t_ref) + intercept,
    // Exponential -> amp*exp(rate*(t-t_ref)) + offset.
    double trend_slope = 0.0;
    double trend_intercept = 0.0;
    double trend_amp = 0.0;
    double trend_rate = 0.0;
    double trend_offset = 0.0;

    // Scale envelope: Linear -> scale_slope*(t-t_ref) + scale_intercept,
    // Exponential -> scale_amp*exp(scale_rate*(t-t_ref));
    // both clamped below by scale_floor.
    double scale_slope = 0.0;
    double scale_intercept = 0.0;
    double scale_amp = 0.0;
    double scale_rate = 0.0;
    double scale_floor = 0.0;

    double trend_at(double t) const;
    double scale_at(double t) const;
};

struct ExpFitOptions {
    double rate_min = 1e-6;
    double rate_max = 0.5;
    int rate_count = 280;
};

// Log-spaced candidate rates for the exponential trend search.
std::vector<double> exponential_rate_grid(const ExpFitOptions& options = {});

// Least-squares line for the trend; scale line fitted to |residual|*sqrt(pi/2)
// (unbiased for the standard deviation of centered Gaussian noise). Needs at
// least 10 points.
WindowModel fit_linear_window(const Trajectory& data);

// Trend a*exp(b*t)+c by grid search over the rate with closed-form least
// squares for (a, c) at each candidate; exponential scale envelope fitted in
// the log domain. Needs at least 10 points.
WindowModel fit_exponential_window(const Trajectory& data, const ExpFitOptions& options = {});

Trajectory simulate_trajectory_from_model(const WindowModel& model, SampleWindow window,
                                          std::uint64_t seed);

// Same child-seed scheme as the degradation simulator.
PrognosisEnsemble simulate_from_window_model(const WindowModel& model, SampleWindow window,
                                             int n, std::uint64_t master_seed);

}  // namespace hiqa
