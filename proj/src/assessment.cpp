#include "hiqa/assessment.hpp"

#include <stdexcept>
#include <string>

namespace hiqa {

MetricEvaluator::MetricEvaluator(const PrognosisEnsemble& ensemble, MetricKind kind,
                                 const AssessmentConfig& config)
    : kind_(kind), config_(config), window_(ensemble.window) {
    validate(ensemble);
    switch (pattern_requirement(kind)) {
        case PatternKind::Mean:
            mean_ = mean_pattern(ensemble);
            break;
        case PatternKind::QuantileFan: {
            fan_ = quantile_fan(ensemble, config_.fan_levels);
            for (double q : config_.sqif.band_orders) {
                if (!fan_.has_level((100.0 - q) / 2.0) || !fan_.has_level((100.0 + q) / 2.0)) {
                    throw std::invalid_argument(
                        "fan levels do not cover the band of order " + std::to_string(q));
                }
            }
            break;
        }
        case PatternKind::IncrementQuantileLine: {
            if (ensemble.length() < 2) {
                throw std::invalid_argument("Kupiec metrics need a window of length >= 2");
            }
            double order = config_.pof_line_order;
            if (kind == MetricKind::KupiecTuff) {
                order = solve_tuff_order(ensemble.length() - 1).order;
            }
            line_ = increment_quantile_line(ensemble, order);
            break;
        }
    }
}

double MetricEvaluator::operator()(std::span<const double> values) const {
    switch (kind_) {
        case MetricKind::Mse:
            return mse(mean_, values);
        case MetricKind::Mape:
            return mape(mean_, values, config_.mape_epsilon);
        case MetricKind::Sqif:
            return sqif(fan_, values, config_.sqif);
        case MetricKind::KupiecPof:
            return kupiec_pof(line_, increments(values));
        case MetricKind::KupiecTuff:
            return kupiec_tuff(line_, increments(values));
    }
    throw std::invalid_argument("unknown metric kind");
}

std::vector<double> metric_set(const PrognosisEnsemble& ensemble, MetricKind kind,
                               const AssessmentConfig& config) {
    const MetricEvaluator evaluate(ensemble, kind, config);
    std::vector<double> values;
    values.reserve(ensemble.trajectories.size());
    for (const auto& trajectory : ensemble.trajectories) {
        values.push_back(evaluate(trajectory));
    }
    return values;
}

ScoreBreakdown assessment_score(std::span<const double> m_p, double m_w) {
    if (m_p.empty()) {
        throw std::invalid_argument("assessment_score: empty member metric set");
    }
    std::size_t above = 0, above_or_equal = 0;
    for (double v : m_p) {
        if (v > m_w) ++above;
        if (v >= m_w) ++above_or_equal;
    }
    const double n = static_cast<double>(m_p.size());
    ScoreBreakdown breakdown;
    breakdown.gamma1 = 100.0 * static_cast<double>(above) / n;
    breakdown.gamma2 = 100.0 * static_cast<double>(above_or_equal) / n;
    breakdown.score = 0.5 * (breakdown.gamma1 + breakdown.gamma2);
    return breakdown;
}

double threshold_quantile(std::span<const double> m_p, double theta) {
    if (!(theta > 0.0 && theta < 100.0)) {
        throw std::invalid_argument("threshold must lie in (0,100), got " + std::to_string(theta));
    }
    return empirical_quantile(m_p, 100.0 - theta);
}

std::vector<double> default_theta_grid() {
    std::vector<double> grid = {1, 2, 3, 4, 5};
    for (int t = 10; t <= 90; t += 10) grid.push_back(static_cast<double>(t));
    return grid;
}

std::vector<double> default_calibration_theta_grid() {
    std::vector<double> grid;
    for (int t = 10; t <= 90; t += 10) grid.push_back(static_cast<double>(t));
    return grid;
}

AssessmentReport assess(const PrognosisEnsemble& ensemble, const Trajectory& actual,
                        MetricKind kind, std::span<const double> theta_grid,
                        const AssessmentConfig& config) {
    if (actual.window() != ensemble.window) {
        throw std::invalid_argument(
            "actual series window [" + std::to_string(actual.start) + "," +
            std::to_string(actual.end()) + "] does not match the prediction window [" +
            std::to_string(ensemble.window.start) + "," + std::to_string(ensemble.window.end) +
            "]");
    }
    const MetricEvaluator evaluate(ensemble, kind, config);

    AssessmentReport report;
    report.metric = kind;
    report.window = ensemble.window;
    report.n = ensemble.size();
    report.m_p.reserve(ensemble.trajectories.size());
    for (const auto& trajectory : ensemble.trajectories) {
        report.m_p.push_back(evaluate(trajectory));
    }
    report.m_w = evaluate(actual.values);

    const ScoreBreakdown breakdown = assessment_score(report.m_p, report.m_w);
    report.gamma1 = breakdown.gamma1;
    report.gamma2 = breakdown.gamma2;
    report.score = breakdown.score;

    report.theta_grid.assign(theta_grid.begin(), theta_grid.end());
    report.decisions.reserve(report.theta_grid.size());
    for (double theta : report.theta_grid) {
        report.decisions.push_back(report.score > theta ? 1 : 0);
    }
    return report;
}

}  // namespace hiqa
