#include "hiqa/estimation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace hiqa {

namespace {

constexpr double kHalfPi = 1.5707963267948966;
// E[ln(|Z| * sqrt(pi/2))] for standard normal Z; the log-domain envelope fit
// understates ln(sigma) by exactly this much, so it is added back.
constexpr double kLogEnvelopeOffset = 0.40939007008601166;
// Exponents past this would overflow the squared-feature sums.
constexpr double kMaxExponent = 250.0;

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;  // value at the centering origin
};

// Least squares of y on centered x (x already has mean ~0 by construction
// when called with t - t_ref).
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = x.size();
    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_x += x[i];
        mean_y += y[i];
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mean_x;
        sxx += dx * dx;
        sxy += dx * (y[i] - mean_y);
    }
    LineFit fit;
    fit.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    fit.intercept = mean_y - fit.slope * mean_x;
    return fit;
}

double max_abs(const std::vector<double>& values) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
}

void check_input(const Trajectory& data) {
    if (data.values.size() < 10) {
        throw std::invalid_argument("window fit needs at least 10 points, got " +
                                    std::to_string(data.values.size()));
    }
    for (double v : data.values) {
        if (!std::isfinite(v)) {
            throw std::invalid_argument("window fit input contains a non-finite value");
        }
    }
}

double positive_floor(const std::vector<double>& values) {
    const double m = max_abs(values);
    return m > 0.0 ? 1e-9 * m : 1e-18;
}

}  // namespace

double WindowModel::trend_at(double t) const {
    const double dt = t - t_ref;
    if (kind == Kind::Linear) return trend_slope * dt + trend_intercept;
    return trend_amp * std::exp(trend_rate * dt) + trend_offset;
}

double WindowModel::scale_at(double t) const {
    const double dt = t - t_ref;
    const double raw = kind == Kind::Linear ? scale_slope * dt + scale_intercept
                                            : scale_amp * std::exp(scale_rate * dt);
    return std::max(raw, scale_floor);
}

std::vector<double> exponential_rate_grid(const ExpFitOptions& options) {
    if (!(options.rate_min > 0.0) || !(options.rate_max > options.rate_min) ||
        options.rate_count < 2) {
        throw std::invalid_argument("exponential rate grid needs 0 < rate_min < rate_max and "
                                    "at least 2 candidates");
    }
    std::vector<double> grid(static_cast<std::size_t>(options.rate_count));
    const double log_lo = std::log(options.rate_min);
    const double log_hi = std::log(options.rate_max);
    for (int i = 0; i < options.rate_count; ++i) {
        const double f = static_cast<double>(i) / (options.rate_count - 1);
        grid[static_cast<std::size_t>(i)] = std::exp(log_lo + f * (log_hi - log_lo));
    }
    return grid;
}

WindowModel fit_linear_window(const Trajectory& data) {
    check_input(data);
    const std::size_t n = data.values.size();
    const double t_ref = data.start + static_cast<double>(n - 1) / 2.0;
    std::vector<double> tc(n);
    for (std::size_t i = 0; i < n; ++i) {
        tc[i] = static_cast<double>(data.start + static_cast<int>(i)) - t_ref;
    }

    WindowModel model;
    model.kind = WindowModel::Kind::Linear;
    model.t_ref = t_ref;

    const LineFit trend = fit_line(tc, data.values);
    model.trend_slope = trend.slope;
    model.trend_intercept = trend.intercept;

    std::vector<double> envelope(n);
    const double env_factor = std::sqrt(kHalfPi);
    for (std::size_t i = 0; i < n; ++i) {
        const double residual = data.values[i] - (trend.slope * tc[i] + trend.intercept);
        envelope[i] = std::abs(residual) * env_factor;
    }
    const LineFit scale = fit_line(tc, envelope);
    model.scale_slope = scale.slope;
    model.scale_intercept = scale.intercept;
    model.scale_floor = positive_floor(data.values);
    return model;
}

WindowModel fit_exponential_window(const Trajectory& data, const ExpFitOptions& options) {
    check_input(data);
    const std::size_t n = data.values.size();
    const double t_ref = data.start + static_cast<double>(n - 1) / 2.0;
    std::vector<double> tc(n);
    double half_span = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        tc[i] = static_cast<double>(data.start + static_cast<int>(i)) - t_ref;
        half_span = std::max(half_span, std::abs(tc[i]));
    }

    const std::vector<double> grid = exponential_rate_grid(options);

    double mean_y = 0.0;
    for (double v : data.values) mean_y += v;
    mean_y /= static_cast<double>(n);

    double best_sse = std::numeric_limits<double>::infinity();
    double best_rate = grid.front();
    double best_amp = 0.0, best_offset = 0.0;
    std::vector<double> feature(n);
    for (double rate : grid) {
        if (rate * half_span > kMaxExponent) continue;
        double mean_x = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            feature[i] = std::exp(rate * tc[i]);
            mean_x += feature[i];
        }
        mean_x /= static_cast<double>(n);
        double sxx = 0.0, sxy = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double dx = feature[i] - mean_x;
            sxx += dx * dx;
            sxy += dx * (data.values[i] - mean_y);
        }
        if (!(sxx > 0.0)) continue;
        const double amp = sxy / sxx;
        const double offset = mean_y - amp * mean_x;
        double sse = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double gap = data.values[i] - (amp * feature[i] + offset);
            sse += gap * gap;
        }
        if (sse < best_sse) {
            best_sse = sse;
            best_rate = rate;
            best_amp = amp;
            best_offset = offset;
        }
    }
    if (!std::isfinite(best_sse)) {
        throw std::invalid_argument("exponential fit failed: no admissible rate candidate");
    }

    WindowModel model;
    model.kind = WindowModel::Kind::Exponential;
    model.t_ref = t_ref;
    model.trend_amp = best_amp;
    model.trend_rate = best_rate;
    model.trend_offset = best_offset;
    model.scale_floor = positive_floor(data.values);

    std::vector<double> envelope(n);
    const double env_factor = std::sqrt(kHalfPi);
    double env_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double residual =
            data.values[i] - (best_amp * std::exp(best_rate * tc[i]) + best_offset);
        envelope[i] = std::abs(residual) * env_factor;
        env_max = std::max(env_max, envelope[i]);
    }
    if (env_max <= 0.0) {
        model.scale_amp = model.scale_floor;
        model.scale_rate = 0.0;
        return model;
    }
    const double log_floor = std::log(1e-12 * env_max);
    std::vector<double> log_env(n);
    for (std::size_t i = 0; i < n; ++i) {
        log_env[i] = envelope[i] > 0.0 ? std::max(std::log(envelope[i]), log_floor) : log_floor;
    }
    const LineFit scale = fit_line(tc, log_env);
    model.scale_amp = std::exp(scale.intercept + kLogEnvelopeOffset);
    model.scale_rate = scale.slope;
    return model;
}

Trajectory simulate_trajectory_from_model(const WindowModel& model, SampleWindow window,
                                          std::uint64_t seed) {
    if (window.length() < 1) {
        throw std::invalid_argument("simulation window is empty");
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Trajectory out;
    out.start = window.start;
    out.values.resize(static_cast<std::size_t>(window.length()));
    for (int t = window.start; t <= window.end; ++t) {
        const double z = normal(rng);
        out.values[static_cast<std::size_t>(t - window.start)] =
            model.trend_at(t) + model.scale_at(t) * z;
    }
    return out;
}

PrognosisEnsemble simulate_from_window_model(const WindowModel& model, SampleWindow window,
                                             int n, std::uint64_t master_seed) {
    if (n < 2) {
        throw std::invalid_argument("ensemble size must be >= 2, got " + std::to_string(n));
    }
    PrognosisEnsemble ensemble;
    ensemble.window = window;
    ensemble.trajectories.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        ensemble.trajectories.push_back(
            simulate_trajectory_from_model(model, window,
                                           child_seed(master_seed, static_cast<std::uint64_t>(i)))
                .values);
    }
    return ensemble;
}

}  // namespace hiqa
