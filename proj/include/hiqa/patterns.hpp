#pragma once

#include <span>
#include <vector>

#include "hiqa/trajectory.hpp"

namespace hiqa {

// Empirical quantile with (k - 0.5)/n plotting positions and linear
// interpolation between adjacent order statistics. q is in percent;
// q = 0 and q = 100 return the minimum and maximum, and orders falling
// below the first (or above the last) plotting position clamp the same way.
double empirical_quantile(std::span<const double> values, double q);

// Same convention on values already sorted ascending.
double quantile_from_sorted(std::span<const double> sorted, double q);

// Pointwise arithmetic mean over the ensemble members.
std::vector<double> mean_pattern(const PrognosisEnsemble& ensemble);

// Time-indexed empirical quantile lines of the ensemble at several orders.
struct QuantileFan {
    std::vector<double> levels;              // percent, ascending
    std::vector<std::vector<double>> lines;  // lines[i] is the levels[i] quantile line

    bool has_level(double level) const;
    // Throws std::invalid_argument when the level is absent.
    const std::vector<double>& line_at(double level) const;
};

std::vector<double> default_fan_levels();  // {0, 5, ..., 100}

QuantileFan quantile_fan(const PrognosisEnsemble& ensemble, std::span<const double> levels);

// Forward differences value[t+1] - value[t]; length shrinks by one.
std::vector<double> increments(std::span<const double> values);

// Quantile line of the member increments at a single order.
struct IncrementQuantileLine {
    double order = 50.0;         // percent
    std::vector<double> values;  // one entry per increment step
};

IncrementQuantileLine increment_quantile_line(const PrognosisEnsemble& ensemble, double order);

}  // namespace hiqa
