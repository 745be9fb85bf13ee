#include "hiqa/metrics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace hiqa {

namespace {

void check_equal_lengths(std::span<const double> pattern, std::span<const double> trajectory) {
    if (pattern.size() != trajectory.size() || pattern.empty()) {
        throw std::invalid_argument("pattern and trajectory must be non-empty and equal length (" +
                                    std::to_string(pattern.size()) + " vs " +
                                    std::to_string(trajectory.size()) + ")");
    }
}

}  // namespace

PatternKind pattern_requirement(MetricKind kind) {
    switch (kind) {
        case MetricKind::Mse:
        case MetricKind::Mape:
            return PatternKind::Mean;
        case MetricKind::Sqif:
            return PatternKind::QuantileFan;
        case MetricKind::KupiecPof:
        case MetricKind::KupiecTuff:
            return PatternKind::IncrementQuantileLine;
    }
    throw std::invalid_argument("unknown metric kind");
}

bool lower_is_better(MetricKind) { return true; }

std::string_view metric_name(MetricKind kind) {
    switch (kind) {
        case MetricKind::Mse: return "MSE";
        case MetricKind::Mape: return "MAPE";
        case MetricKind::Sqif: return "SQIF";
        case MetricKind::KupiecPof: return "KupiecPOF";
        case MetricKind::KupiecTuff: return "KupiecTUFF";
    }
    throw std::invalid_argument("unknown metric kind");
}

std::optional<MetricKind> metric_from_name(std::string_view name) {
    for (MetricKind kind : all_metrics()) {
        if (metric_name(kind) == name) return kind;
    }
    return std::nullopt;
}

std::vector<MetricKind> all_metrics() {
    return {MetricKind::Mse, MetricKind::Mape, MetricKind::Sqif, MetricKind::KupiecPof,
            MetricKind::KupiecTuff};
}

std::vector<double> default_sqif_band_orders() {
    std::vector<double> orders;
    for (int q = 0; q <= 100; q += 10) orders.push_back(static_cast<double>(q));
    return orders;
}

double mse(std::span<const double> pattern, std::span<const double> trajectory) {
    check_equal_lengths(pattern, trajectory);
    double sum = 0.0;
    for (std::size_t j = 0; j < pattern.size(); ++j) {
        const double gap = pattern[j] - trajectory[j];
        sum += gap * gap;
    }
    return sum / static_cast<double>(pattern.size());
}

double mape(std::span<const double> pattern, std::span<const double> trajectory, double epsilon) {
    check_equal_lengths(pattern, trajectory);
    double sum = 0.0;
    for (std::size_t j = 0; j < pattern.size(); ++j) {
        const double denom = std::abs(pattern[j]);
        if (denom <= epsilon) {
            throw std::invalid_argument("mape: pattern magnitude at index " + std::to_string(j) +
                                        " is below the division threshold");
        }
        sum += std::abs(pattern[j] - trajectory[j]) / denom;
    }
    return sum / static_cast<double>(pattern.size());
}

double sqif(const QuantileFan& fan, std::span<const double> trajectory, const SqifConfig& config) {
    if (config.band_orders.empty()) {
        throw std::invalid_argument("sqif: empty band order set");
    }
    if (trajectory.empty()) {
        throw std::invalid_argument("sqif: empty trajectory");
    }
    double sum = 0.0;
    for (double q : config.band_orders) {
        const auto& lower = fan.line_at((100.0 - q) / 2.0);
        const auto& upper = fan.line_at((100.0 + q) / 2.0);
        if (lower.size() != trajectory.size()) {
            throw std::invalid_argument("sqif: fan length " + std::to_string(lower.size()) +
                                        " does not match trajectory length " +
                                        std::to_string(trajectory.size()));
        }
        std::size_t inside = 0;
        for (std::size_t t = 0; t < trajectory.size(); ++t) {
            if (trajectory[t] >= lower[t] && trajectory[t] <= upper[t]) ++inside;
        }
        const double phi = static_cast<double>(inside) / static_cast<double>(trajectory.size());
        const double gap = phi - q / 100.0;
        sum += gap * gap;
    }
    return sum / static_cast<double>(config.band_orders.size());
}

double kupiec_pof_statistic(int n_increments, int exceedances, double p_star) {
    if (n_increments < 1) {
        throw std::invalid_argument("kupiec_pof: need at least one increment");
    }
    if (exceedances < 0 || exceedances > n_increments) {
        throw std::invalid_argument("kupiec_pof: exceedance count out of range");
    }
    if (!(p_star > 0.0 && p_star < 1.0)) {
        throw std::invalid_argument("kupiec_pof: p* must lie in (0,1)");
    }
    const double n = static_cast<double>(n_increments);
    const double x = static_cast<double>(exceedances);
    if (exceedances == 0) return -2.0 * n * std::log(1.0 - p_star);
    if (exceedances == n_increments) return -2.0 * n * std::log(p_star);
    return -2.0 * ((n - x) * std::log(n * (1.0 - p_star) / (n - x)) +
                   x * std::log(n * p_star / x));
}

double kupiec_pof(const IncrementQuantileLine& line, std::span<const double> increments) {
    if (increments.empty()) {
        throw std::invalid_argument("kupiec_pof: empty increment series");
    }
    if (line.values.size() != increments.size()) {
        throw std::invalid_argument("kupiec_pof: line length " + std::to_string(line.values.size()) +
                                    " does not match increments length " +
                                    std::to_string(increments.size()));
    }
    int exceedances = 0;
    for (std::size_t t = 0; t < increments.size(); ++t) {
        if (increments[t] > line.values[t]) ++exceedances;
    }
    return kupiec_pof_statistic(static_cast<int>(increments.size()), exceedances,
                                1.0 - line.order / 100.0);
}

TuffOrder solve_tuff_order(int n_increments) {
    if (n_increments < 1) {
        throw std::invalid_argument("solve_tuff_order: need at least one increment");
    }
    const double n = static_cast<double>(n_increments);
    // f(x) = (1-x)^N - x is strictly decreasing with f(0) = 1, f(1) = -1.
    double lo = 0.0, hi = 1.0;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        const double f = std::pow(1.0 - mid, n) - mid;
        if (f == 0.0) {
            lo = hi = mid;
            break;
        }
        if (f > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double f_lo = std::abs(std::pow(1.0 - lo, n) - lo);
    const double f_hi = std::abs(std::pow(1.0 - hi, n) - hi);
    const double p_star = f_lo <= f_hi ? lo : hi;
    return {p_star, 100.0 * (1.0 - p_star)};
}

double kupiec_tuff_statistic(int n_increments, std::optional<int> first_exceedance,
                             double p_star) {
    if (n_increments < 1) {
        throw std::invalid_argument("kupiec_tuff: need at least one increment");
    }
    if (!(p_star > 0.0 && p_star < 1.0)) {
        throw std::invalid_argument("kupiec_tuff: p* must lie in (0,1)");
    }
    const double n = static_cast<double>(n_increments);
    if (!first_exceedance) return -2.0 * n * std::log(1.0 - p_star);
    const int x = *first_exceedance;
    if (x < 1 || x > n_increments) {
        throw std::invalid_argument("kupiec_tuff: first exceedance index out of range");
    }
    if (x == 1) return -2.0 * n * std::log(p_star);
    const double xd = static_cast<double>(x);
    return -2.0 * (std::log(p_star) + (xd - 1.0) * std::log(1.0 - p_star) +
                   xd * std::log(xd) - (xd - 1.0) * std::log(xd - 1.0));
}

double kupiec_tuff(const IncrementQuantileLine& line, std::span<const double> increments) {
    if (increments.empty()) {
        throw std::invalid_argument("kupiec_tuff: empty increment series");
    }
    if (line.values.size() != increments.size()) {
        throw std::invalid_argument("kupiec_tuff: line length " +
                                    std::to_string(line.values.size()) +
                                    " does not match increments length " +
                                    std::to_string(increments.size()));
    }
    std::optional<int> first;
    for (std::size_t t = 0; t < increments.size(); ++t) {
        if (increments[t] > line.values[t]) {
            first = static_cast<int>(t) + 1;
            break;
        }
    }
    return kupiec_tuff_statistic(static_cast<int>(increments.size()), first,
                                 1.0 - line.order / 100.0);
}

}  // namespace hiqa
