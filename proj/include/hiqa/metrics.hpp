#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hiqa/patterns.hpp"

namespace hiqa {

// The five prediction-quality metrics. All are oriented lower-is-better.
enum class MetricKind { Mse, Mape, Sqif, KupiecPof, KupiecTuff };

enum class PatternKind { Mean, QuantileFan, IncrementQuantileLine };

PatternKind pattern_requirement(MetricKind kind);
// Orientation of the metric: every supported metric treats a lower value as
// a better prediction, which is what maps an acceptance threshold to the
// complementary quantile order in the assessment step.
bool lower_is_better(MetricKind kind);
std::string_view metric_name(MetricKind kind);
std::optional<MetricKind> metric_from_name(std::string_view name);
std::vector<MetricKind> all_metrics();

std::vector<double> default_sqif_band_orders();  // {0, 10, ..., 100}

struct SqifConfig {
    // Central band orders Q; band q spans the (100-q)/2 .. (100+q)/2
    // quantile lines, so the fan must carry both levels for every q.
    std::vector<double> band_orders = default_sqif_band_orders();
};

// Mean squared pointwise gap between pattern and trajectory.
double mse(std::span<const double> pattern, std::span<const double> trajectory);

// Mean of |P - T| / |P|; throws when any |P| <= epsilon, naming the index.
double mape(std::span<const double> pattern, std::span<const double> trajectory,
            double epsilon = 1e-12);

// Mean squared gap, over the band set, between the nominal coverage q/100
// and the fraction of trajectory points inside the central band of order q
// (inclusive at both edges). Result lies in [0, 1].
double sqif(const QuantileFan& fan, std::span<const double> trajectory,
            const SqifConfig& config = {});

// Likelihood-ratio statistic on the exceedance count x out of n increments,
// with exceedance probability p_star; the x = 0 and x = n boundary cases use
// their closed forms.
double kupiec_pof_statistic(int n_increments, int exceedances, double p_star);

// x = number of increments strictly above the line; p_star = 1 - order/100.
double kupiec_pof(const IncrementQuantileLine& line, std::span<const double> increments);

struct TuffOrder {
    double p_star = 0.0;  // exceedance probability in (0, 1)
    double order = 0.0;   // quantile order 100 * (1 - p_star), percent
};

// Unique root of (1 - x)^N = x in (0, 1), by bisection: the order at which
// "no exceedance in N steps" and "first exceedance at step one" are equally
// likely.
TuffOrder solve_tuff_order(int n_increments);

// Likelihood-ratio statistic on the index of the first exceedance
// (1-based); nullopt means no exceedance occurred.
double kupiec_tuff_statistic(int n_increments, std::optional<int> first_exceedance,
                             double p_star);

// First index with increment strictly above the line; p_star = 1 - order/100.
double kupiec_tuff(const IncrementQuantileLine& line, std::span<const double> increments);

}  // namespace hiqa
