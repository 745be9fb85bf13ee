#include "hiqa/degradation.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <string>

namespace hiqa {

namespace {

void check_params(const DegradationParams& p) {
    if (!(1 < p.t1_star && p.t1_star < p.t2_star && p.t2_star < p.m)) {
        throw std::invalid_argument("degradation params need 1 < t1* < t2* < m, got t1*=" +
                                    std::to_string(p.t1_star) + ", t2*=" +
                                    std::to_string(p.t2_star) + ", m=" + std::to_string(p.m));
    }
    for (double s : {p.sigma1, p.sigma2, p.sigma3, p.sigma4}) {
        if (!(s > 0.0) || !std::isfinite(s)) {
            throw std::invalid_argument("scale anchors sigma1..sigma4 must be positive finite");
        }
    }
    if (!std::isfinite(p.c1)) {
        throw std::invalid_argument("c1 must be finite");
    }
}

void check_window(const DegradationParams& p, SampleWindow w) {
    if (w.start < 1 || w.end > p.m || w.start > w.end) {
        throw std::out_of_range("window [" + std::to_string(w.start) + "," +
                                std::to_string(w.end) + "] outside model range [1," +
                                std::to_string(p.m) + "]");
    }
}

}  // namespace

DegradationCoefficients derive_coefficients(const DegradationParams& p) {
    check_params(p);
    DegradationCoefficients c;
    c.a1 = (p.sigma2 - p.sigma1) / (p.t1_star - 1);
    c.b1 = p.sigma1 - c.a1;
    c.a2 = (p.sigma3 - p.sigma2) / (p.t2_star - p.t1_star);
    c.b2 = p.sigma2 - c.a2 * p.t1_star;
    c.b3 = std::log(p.sigma4 / p.sigma3) / (p.m - p.t2_star);
    c.a3 = p.sigma3 * std::exp(-c.b3 * p.t2_star);
    c.c2 = p.c1 - c.a2 * p.t1_star;
    c.c3 = c.a2 * p.t2_star + c.c2 - c.a3 * std::exp(c.b3 * p.t2_star);
    return c;
}

double scale_at(const DegradationParams& p, const DegradationCoefficients& c, int t) {
    if (t < 1 || t > p.m) {
        throw std::out_of_range("t=" + std::to_string(t) + " outside [1," + std::to_string(p.m) +
                                "]");
    }
    if (t <= p.t1_star) return c.a1 * t + c.b1;
    if (t <= p.t2_star) return c.a2 * t + c.b2;
    return c.a3 * std::exp(c.b3 * t);
}

double trend_at(const DegradationParams& p, const DegradationCoefficients& c, int t) {
    if (t < 1 || t > p.m) {
        throw std::out_of_range("t=" + std::to_string(t) + " outside [1," + std::to_string(p.m) +
                                "]");
    }
    if (t <= p.t1_star) return p.c1;
    if (t <= p.t2_star) return c.a2 * t + c.c2;
    return c.a3 * std::exp(c.b3 * t) + c.c3;
}

Trajectory simulate_trajectory(const DegradationParams& p, const DegradationCoefficients& c,
                               SampleWindow window, std::uint64_t seed, double noise_scale) {
    check_window(p, window);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Trajectory out;
    out.start = window.start;
    out.values.resize(static_cast<std::size_t>(window.length()));
    for (int t = window.start; t <= window.end; ++t) {
        const double z = normal(rng);
        out.values[static_cast<std::size_t>(t - window.start)] =
            trend_at(p, c, t) + noise_scale * scale_at(p, c, t) * z;
    }
    return out;
}

PrognosisEnsemble simulate_ensemble(const DegradationParams& p, const DegradationCoefficients& c,
                                    SampleWindow window, int n, std::uint64_t master_seed,
                                    double noise_scale) {
    if (n < 2) {
        throw std::invalid_argument("ensemble size must be >= 2, got " + std::to_string(n));
    }
    check_window(p, window);
    PrognosisEnsemble ensemble;
    ensemble.window = window;
    ensemble.trajectories.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        ensemble.trajectories.push_back(
            simulate_trajectory(p, c, window, child_seed(master_seed, static_cast<std::uint64_t>(i)),
                                noise_scale)
                .values);
    }
    return ensemble;
}

}  // namespace hiqa
