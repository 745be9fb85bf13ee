#include "hiqa/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>
#include <string>
#include <thread>

namespace hiqa {

namespace {

// Seed-stream tags so the prognosis ensemble and the test trajectories never
// share a child seed.
constexpr std::uint64_t kEnsembleStream = 1;
constexpr std::uint64_t kTestStream = 2;

void check_boundaries(const RegimeBoundaries& b) {
    if (!(1 < b.t1_star && b.t1_star < b.t2_star && b.t2_star < b.m)) {
        throw std::invalid_argument("regime boundaries need 1 < t1* < t2* < m");
    }
}

// Static partition of [0, count) into contiguous chunks, one worker per
// chunk. Each index is processed by exactly one worker, so any writer that
// keys on the index is race-free, and integer aggregation afterwards does
// not depend on the chunking.
template <typename Fn>
void parallel_for(int count, int threads, Fn&& body) {
    if (threads <= 0) {
        threads = static_cast<int>(std::thread::hardware_concurrency());
        if (threads < 1) threads = 1;
    }
    threads = std::min(threads, std::max(count, 1));
    if (threads == 1) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(threads));
    const int chunk = (count + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
        const int begin = w * chunk;
        const int end = std::min(count, begin + chunk);
        if (begin >= end) break;
        workers.emplace_back([begin, end, &body] {
            for (int i = begin; i < end; ++i) body(i);
        });
    }
    for (auto& worker : workers) worker.join();
}

}  // namespace

SplitWindows regime_window(const RegimeBoundaries& boundaries, Regime regime, double split) {
    check_boundaries(boundaries);
    if (!(split > 0.0 && split < 1.0)) {
        throw std::invalid_argument("split fraction must lie in (0,1), got " +
                                    std::to_string(split));
    }
    const SampleWindow span = regime == Regime::Second
                                  ? SampleWindow{boundaries.t1_star + 1, boundaries.t2_star}
                                  : SampleWindow{boundaries.t2_star + 1, boundaries.m};
    const int len = span.length();
    // The epsilon absorbs the binary representation of decimal splits
    // (0.8 * 3000 must give exactly 2400 training samples).
    const int train_len = static_cast<int>(std::floor(split * len + 1e-9));
    const int test_len = len - train_len;
    if (test_len < 1) {
        throw std::invalid_argument("split leaves an empty test window");
    }
    if (train_len < 1) {
        throw std::invalid_argument("split leaves an empty training window");
    }
    SplitWindows windows;
    windows.train = {span.start, span.start + train_len - 1};
    windows.test = {span.start + train_len, span.end};
    return windows;
}

SplitWindows regime_window(const DegradationParams& params, Regime regime, double split) {
    return regime_window(RegimeBoundaries{params.t1_star, params.t2_star, params.m}, regime,
                         split);
}

double CalibrationTable::good(MetricKind kind, double theta) const {
    for (std::size_t mi = 0; mi < metrics.size(); ++mi) {
        if (metrics[mi] != kind) continue;
        for (std::size_t ti = 0; ti < theta_grid.size(); ++ti) {
            if (theta_grid[ti] == theta) return good_percent[mi][ti];
        }
    }
    throw std::invalid_argument("calibration table has no cell for " +
                                std::string(metric_name(kind)) + " at theta " +
                                std::to_string(theta));
}

CalibrationTable run_calibration(const CalibrationSpec& spec) {
    if (spec.n_prognoses < 2 || spec.n_tests < 2) {
        throw std::invalid_argument("calibration needs n_prognoses >= 2 and n_tests >= 2");
    }
    if (spec.metrics.empty() || spec.theta_grid.empty()) {
        throw std::invalid_argument("calibration needs at least one metric and one threshold");
    }

    const DegradationCoefficients coeffs = derive_coefficients(spec.params);
    const SplitWindows windows = regime_window(spec.params, spec.regime, spec.split);

    const PrognosisEnsemble ensemble =
        simulate_ensemble(spec.params, coeffs, windows.test, spec.n_prognoses,
                          child_seed(spec.master_seed, kEnsembleStream), spec.noise_scale);

    std::vector<MetricEvaluator> evaluators;
    evaluators.reserve(spec.metrics.size());
    for (MetricKind kind : spec.metrics) {
        evaluators.emplace_back(ensemble, kind, spec.assessment);
    }

    // Member metric values are shared across all test replications.
    const std::size_t n_metrics = spec.metrics.size();
    std::vector<std::vector<double>> m_p(n_metrics,
                                         std::vector<double>(ensemble.trajectories.size()));
    parallel_for(ensemble.size(), spec.threads, [&](int i) {
        const auto idx = static_cast<std::size_t>(i);
        for (std::size_t mi = 0; mi < n_metrics; ++mi) {
            m_p[mi][idx] = evaluators[mi](ensemble.trajectories[idx]);
        }
    });

    CalibrationTable table;
    table.metrics = spec.metrics;
    table.theta_grid = spec.theta_grid;
    table.train_window = windows.train;
    table.test_window = windows.test;
    table.scores.assign(n_metrics, std::vector<double>(static_cast<std::size_t>(spec.n_tests)));

    const std::uint64_t test_master = child_seed(spec.master_seed, kTestStream);
    const std::size_t n_theta = spec.theta_grid.size();
    std::vector<std::vector<int>> good_counts(n_metrics,
                                              std::vector<int>(n_theta, 0));
    std::mutex counts_mutex;
    parallel_for(spec.n_tests, spec.threads, [&](int j) {
        const Trajectory actual =
            simulate_trajectory(spec.params, coeffs, windows.test,
                                child_seed(test_master, static_cast<std::uint64_t>(j)),
                                spec.noise_scale);
        std::vector<int> local_good(n_metrics * n_theta, 0);
        for (std::size_t mi = 0; mi < n_metrics; ++mi) {
            const double m_w = evaluators[mi](actual.values);
            const ScoreBreakdown breakdown = assessment_score(m_p[mi], m_w);
            table.scores[mi][static_cast<std::size_t>(j)] = breakdown.score;
            for (std::size_t ti = 0; ti < n_theta; ++ti) {
                if (breakdown.score > spec.theta_grid[ti]) local_good[mi * n_theta + ti] = 1;
            }
        }
        const std::lock_guard<std::mutex> lock(counts_mutex);
        for (std::size_t mi = 0; mi < n_metrics; ++mi) {
            for (std::size_t ti = 0; ti < n_theta; ++ti) {
                good_counts[mi][ti] += local_good[mi * n_theta + ti];
            }
        }
    });

    table.good_percent.assign(n_metrics, std::vector<double>(n_theta, 0.0));
    for (std::size_t mi = 0; mi < n_metrics; ++mi) {
        for (std::size_t ti = 0; ti < n_theta; ++ti) {
            table.good_percent[mi][ti] =
                100.0 * static_cast<double>(good_counts[mi][ti]) / spec.n_tests;
        }
    }
    return table;
}

}  // namespace hiqa
