#include "hiqa/patterns.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace hiqa {

double quantile_from_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) {
        throw std::invalid_argument("quantile of an empty sample");
    }
    if (!(q >= 0.0 && q <= 100.0)) {
        throw std::invalid_argument("quantile order must lie in [0,100], got " +
                                    std::to_string(q));
    }
    const std::size_t n = sorted.size();
    if (q == 0.0) return sorted.front();
    if (q == 100.0) return sorted.back();

    const double u = q / 100.0;
    const double nd = static_cast<double>(n);
    // Largest k in [1, n] with (k - 0.5)/n < u; 0 when no k qualifies.
    std::size_t k = 0;
    std::size_t lo = 1, hi = n;
    while (lo <= hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if ((static_cast<double>(mid) - 0.5) / nd < u) {
            k = mid;
            lo = mid + 1;
        } else {
            hi = mid - 1;
        }
    }
    if (k == 0) return sorted.front();
    if (k == n) return sorted.back();
    const double pos_k = (static_cast<double>(k) - 0.5) / nd;
    const double pos_next = (static_cast<double>(k) + 1.0 - 0.5) / nd;
    const double w = (u - pos_k) / (pos_next - pos_k);
    return sorted[k - 1] + w * (sorted[k] - sorted[k - 1]);
}

double empirical_quantile(std::span<const double> values, double q) {
    if (values.empty()) {
        throw std::invalid_argument("quantile of an empty sample");
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    return quantile_from_sorted(sorted, q);
}

std::vector<double> mean_pattern(const PrognosisEnsemble& ensemble) {
    validate(ensemble);
    const std::size_t len = ensemble.trajectories.front().size();
    std::vector<double> mean(len, 0.0);
    for (const auto& trajectory : ensemble.trajectories) {
        for (std::size_t t = 0; t < len; ++t) mean[t] += trajectory[t];
    }
    const double n = static_cast<double>(ensemble.size());
    for (double& v : mean) v /= n;
    return mean;
}

bool QuantileFan::has_level(double level) const {
    for (double l : levels) {
        if (std::abs(l - level) <= 1e-9) return true;
    }
    return false;
}

const std::vector<double>& QuantileFan::line_at(double level) const {
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (std::abs(levels[i] - level) <= 1e-9) return lines[i];
    }
    throw std::invalid_argument("quantile fan has no line at level " + std::to_string(level));
}

std::vector<double> default_fan_levels() {
    std::vector<double> levels;
    for (int l = 0; l <= 100; l += 5) levels.push_back(static_cast<double>(l));
    return levels;
}

QuantileFan quantile_fan(const PrognosisEnsemble& ensemble, std::span<const double> levels) {
    validate(ensemble);
    if (levels.empty()) {
        throw std::invalid_argument("quantile fan needs at least one level");
    }
    QuantileFan fan;
    fan.levels.assign(levels.begin(), levels.end());
    std::sort(fan.levels.begin(), fan.levels.end());
    fan.levels.erase(std::unique(fan.levels.begin(), fan.levels.end()), fan.levels.end());
    for (double l : fan.levels) {
        if (!(l >= 0.0 && l <= 100.0)) {
            throw std::invalid_argument("fan level outside [0,100]: " + std::to_string(l));
        }
    }

    const std::size_t len = ensemble.trajectories.front().size();
    const std::size_t n = ensemble.trajectories.size();
    fan.lines.assign(fan.levels.size(), std::vector<double>(len, 0.0));
    std::vector<double> column(n);
    for (std::size_t t = 0; t < len; ++t) {
        for (std::size_t i = 0; i < n; ++i) column[i] = ensemble.trajectories[i][t];
        std::sort(column.begin(), column.end());
        for (std::size_t li = 0; li < fan.levels.size(); ++li) {
            fan.lines[li][t] = quantile_from_sorted(column, fan.levels[li]);
        }
    }
    return fan;
}

std::vector<double> increments(std::span<const double> values) {
    if (values.size() < 2) {
        throw std::invalid_argument("increments need at least 2 values, got " +
                                    std::to_string(values.size()));
    }
    std::vector<double> diff(values.size() - 1);
    for (std::size_t t = 0; t + 1 < values.size(); ++t) diff[t] = values[t + 1] - values[t];
    return diff;
}

IncrementQuantileLine increment_quantile_line(const PrognosisEnsemble& ensemble, double order) {
    validate(ensemble);
    if (ensemble.length() < 2) {
        throw std::invalid_argument("window too short for increments");
    }
    if (!(order >= 0.0 && order <= 100.0)) {
        throw std::invalid_argument("quantile order must lie in [0,100], got " +
                                    std::to_string(order));
    }
    const std::size_t steps = ensemble.trajectories.front().size() - 1;
    const std::size_t n = ensemble.trajectories.size();
    IncrementQuantileLine line;
    line.order = order;
    line.values.resize(steps);
    std::vector<double> column(n);
    for (std::size_t t = 0; t < steps; ++t) {
        for (std::size_t i = 0; i < n; ++i) {
            const auto& trajectory = ensemble.trajectories[i];
            column[i] = trajectory[t + 1] - trajectory[t];
        }
        std::sort(column.begin(), column.end());
        line.values[t] = quantile_from_sorted(column, order);
    }
    return line;
}

}  // namespace hiqa
