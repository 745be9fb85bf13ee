#pragma once

#include <cstdint>

#include "hiqa/trajectory.hpp"

namespace hiqa {

// Three-regime degradation model: near-flat trend with slowly growing scale
// (healthy), linear trend and scale (warning), exponential trend and scale
// (critical). Regime boundaries are sample indices.
struct DegradationParams {
    int t1_star = 0;  // last sample of the first regime
    int t2_star = 0;  // last sample of the second regime
    int m = 0;        // trajectory length
    double sigma1 = 1.0;  // scale at t = 1
    double sigma2 = 1.0;  // scale at t = t1_star
    double sigma3 = 1.0;  // scale at t = t2_star
    double sigma4 = 1.0;  // scale at t = m
    double c1 = 0.0;      // first-regime trend level
};

// Piecewise trend/scale constants pinned by the boundary conditions
// SC(1)=sigma1, SC(t1*)=sigma2, SC(t2*)=sigma3, SC(m)=sigma4 and by trend
// continuity at both change points.
struct DegradationCoefficients {
    double a1 = 0.0, b1 = 0.0;  // regime-1 scale line a1*t + b1
    double a2 = 0.0, b2 = 0.0;  // regime-2 scale line a2*t + b2
    double a3 = 0.0, b3 = 0.0;  // regime-3 scale a3*exp(b3*t)
    double c2 = 0.0, c3 = 0.0;  // trend continuity offsets
};

// Closed-form derivation; throws std::invalid_argument on degenerate spans
// (t1* <= 1, t2* <= t1*, m <= t2*) or non-positive scale anchors.
DegradationCoefficients derive_coefficients(const DegradationParams& params);

// Scale component: a1*t+b1 for t <= t1*, a2*t+b2 for t1* < t <= t2*,
// a3*exp(b3*t) above. Throws std::out_of_range outside [1, m].
double scale_at(const DegradationParams& params, const DegradationCoefficients& coeffs, int t);

// Trend component: c1 for t <= t1*, a2*t+c2 for t1* < t <= t2*,
// a3*exp(b3*t)+c3 above; continuous at both change points.
double trend_at(const DegradationParams& params, const DegradationCoefficients& coeffs, int t);

// value(t) = trend(t) + noise_scale * scale(t) * Z_t with i.i.d. standard
// normal Z_t; pure function of (params, window, seed, noise_scale).
Trajectory simulate_trajectory(const DegradationParams& params,
                               const DegradationCoefficients& coeffs, SampleWindow window,
                               std::uint64_t seed, double noise_scale = 1.0);

// n independent trajectories; trajectory i draws from child_seed(master_seed, i),
// so the result does not depend on evaluation order or thread count.
PrognosisEnsemble simulate_ensemble(const DegradationParams& params,
                                    const DegradationCoefficients& coeffs, SampleWindow window,
                                    int n, std::uint64_t master_seed, double noise_scale = 1.0);

}  // namespace hiqa
