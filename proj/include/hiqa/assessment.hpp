#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hiqa/metrics.hpp"

namespace hiqa {

struct AssessmentConfig {
    SqifConfig sqif{};
    std::vector<double> fan_levels = default_fan_levels();
    double pof_line_order = 51.0;  // percent
    double mape_epsilon = 1e-12;
};

// Metric-specific pattern prepared once from an ensemble; evaluates any
// trajectory covering the same window. Immutable after construction and
// safe to share across threads.
class MetricEvaluator {
public:
    MetricEvaluator(const PrognosisEnsemble& ensemble, MetricKind kind,
                    const AssessmentConfig& config = {});

    double operator()(std::span<const double> values) const;

    MetricKind kind() const { return kind_; }
    SampleWindow window() const { return window_; }

    // Pattern accessors; meaningful only for the matching pattern kind.
    const std::vector<double>& mean() const { return mean_; }
    const QuantileFan& fan() const { return fan_; }
    const IncrementQuantileLine& line() const { return line_; }

private:
    MetricKind kind_;
    AssessmentConfig config_;
    SampleWindow window_;
    std::vector<double> mean_;
    QuantileFan fan_;
    IncrementQuantileLine line_;
};

// Metric values of every ensemble member against the pattern derived from
// the same (self-inclusive) ensemble.
std::vector<double> metric_set(const PrognosisEnsemble& ensemble, MetricKind kind,
                               const AssessmentConfig& config = {});

struct ScoreBreakdown {
    double gamma1 = 0.0;  // percent of member values strictly above m_w
    double gamma2 = 0.0;  // percent of member values >= m_w
    double score = 0.0;   // tie-midpoint (gamma1 + gamma2) / 2
};

ScoreBreakdown assessment_score(std::span<const double> m_p, double m_w);

// Empirical quantile of order 100 - theta over the member metric values;
// all metrics are lower-is-better, so the acceptance threshold theta maps to
// the complementary quantile order. theta must lie in (0, 100).
double threshold_quantile(std::span<const double> m_p, double theta);

std::vector<double> default_theta_grid();              // {1,...,5,10,...,90}
std::vector<double> default_calibration_theta_grid();  // {10,...,90}

struct AssessmentReport {
    MetricKind metric = MetricKind::Mse;
    double m_w = 0.0;
    std::vector<double> m_p;
    double gamma1 = 0.0, gamma2 = 0.0, score = 0.0;
    std::vector<double> theta_grid;
    std::vector<int> decisions;  // 1 good / 0 bad, parallel to theta_grid
    int n = 0;
    SampleWindow window;
    std::uint64_t seed = 0;  // provenance only; 0 when unknown
};

// Full procedure for one metric: member metric values, the actual series'
// value, the tie-midpoint score and per-threshold verdicts (good iff
// score > theta). The actual trajectory must cover the ensemble window
// exactly.
AssessmentReport assess(const PrognosisEnsemble& ensemble, const Trajectory& actual,
                        MetricKind kind, std::span<const double> theta_grid,
                        const AssessmentConfig& config = {});

}  // namespace hiqa
