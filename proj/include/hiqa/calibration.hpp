#pragma once

#include "hiqa/assessment.hpp"
#include "hiqa/degradation.hpp"

namespace hiqa {

enum class Regime { Second, Third };

struct RegimeBoundaries {
    int t1_star = 0;
    int t2_star = 0;
    int m = 0;
};

struct SplitWindows {
    SampleWindow train;
    SampleWindow test;
};

// The second regime spans [t1*+1, t2*], the third [t2*+1, m]. The training
// part takes floor(split * span) samples; the test window is the remainder.
SplitWindows regime_window(const RegimeBoundaries& boundaries, Regime regime, double split);
SplitWindows regime_window(const DegradationParams& params, Regime regime, double split);

struct CalibrationSpec {
    DegradationParams params;
    Regime regime = Regime::Second;
    double split = 0.8;
    int n_prognoses = 1000;
    int n_tests = 1000;
    std::vector<MetricKind> metrics = all_metrics();
    std::vector<double> theta_grid = default_calibration_theta_grid();
    std::uint64_t master_seed = 0;
    double noise_scale = 1.0;
    int threads = 0;  // 0 = hardware concurrency
    AssessmentConfig assessment{};
};

// Percentage of good predictions per (metric, threshold) under the null,
// plus the raw per-replication scores behind the percentages.
struct CalibrationTable {
    std::vector<MetricKind> metrics;
    std::vector<double> theta_grid;
    std::vector<std::vector<double>> good_percent;  // [metric][theta]
    std::vector<std::vector<double>> scores;        // [metric][replication]
    SampleWindow train_window;
    SampleWindow test_window;

    double good(MetricKind kind, double theta) const;  // throws if absent
};

// Simulates one prognosis ensemble on the regime's test window, assesses
// n_tests freshly simulated actual trajectories against it, and tabulates
// the percentage of good verdicts per metric and threshold. Deterministic
// for a fixed master seed under any thread count.
CalibrationTable run_calibration(const CalibrationSpec& spec);

}  // namespace hiqa
