// hiqa command line: simulate degradation trajectories, fit window models,
// assess prediction quality against an ensemble, and reproduce the
// null-calibration tables.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hiqa/io.hpp"

namespace {

namespace fs = std::filesystem;
using hiqa::io::RunConfig;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitBadPrediction = 2;

std::vector<hiqa::MetricKind> parse_metric_names(const std::vector<std::string>& names) {
    std::vector<hiqa::MetricKind> metrics;
    for (const auto& name : names) {
        const auto kind = hiqa::metric_from_name(name);
        if (!kind) {
            throw std::runtime_error("unknown metric '" + name +
                                     "' (expected MSE, MAPE, SQIF, KupiecPOF or KupiecTUFF)");
        }
        metrics.push_back(*kind);
    }
    return metrics;
}

hiqa::Regime parse_regime(const std::string& name) {
    if (name == "second") return hiqa::Regime::Second;
    if (name == "third") return hiqa::Regime::Third;
    throw std::runtime_error("unknown regime '" + name + "' (expected 'second' or 'third')");
}

std::string out_path(const RunConfig& config, const std::string& name) {
    fs::create_directories(config.out_dir);
    return (fs::path(config.out_dir) / name).string();
}

hiqa::Trajectory slice_to_window(const hiqa::Trajectory& data, hiqa::SampleWindow window) {
    if (data.start > window.start || data.end() < window.end) {
        throw std::runtime_error("data covers [" + std::to_string(data.start) + "," +
                                 std::to_string(data.end()) + "] but the window [" +
                                 std::to_string(window.start) + "," + std::to_string(window.end) +
                                 "] was requested");
    }
    hiqa::Trajectory out;
    out.start = window.start;
    const auto offset = static_cast<std::size_t>(window.start - data.start);
    out.values.assign(data.values.begin() + static_cast<std::ptrdiff_t>(offset),
                      data.values.begin() + static_cast<std::ptrdiff_t>(offset) +
                          static_cast<std::ptrdiff_t>(window.length()));
    return out;
}

int run_simulate(const RunConfig& config, std::optional<hiqa::SampleWindow> window, int n) {
    if (!config.model) {
        throw std::runtime_error("simulate needs degradation model parameters (config 'model')");
    }
    const auto& params = *config.model;
    const auto coeffs = hiqa::derive_coefficients(params);
    const hiqa::SampleWindow w = window.value_or(hiqa::SampleWindow{1, params.m});
    if (n == 1) {
        const auto trajectory =
            hiqa::simulate_trajectory(params, coeffs, w, config.seed, config.noise_scale);
        const auto path = out_path(config, "trajectory.csv");
        hiqa::io::write_trajectory_csv(trajectory, path);
        std::cout << "wrote " << path << '\n';
    } else {
        const auto ensemble =
            hiqa::simulate_ensemble(params, coeffs, w, n, config.seed, config.noise_scale);
        const auto path = out_path(config, "ensemble.csv");
        hiqa::io::write_ensemble_csv(ensemble, path);
        std::cout << "wrote " << path << '\n';
    }
    return kExitOk;
}

int run_estimate(const RunConfig& config, const std::string& model_out) {
    if (!config.data_path) {
        throw std::runtime_error("estimate needs an input series (--data)");
    }
    hiqa::Trajectory data = hiqa::io::read_hi_csv(*config.data_path);
    if (config.fit_window) {
        data = slice_to_window(data, *config.fit_window);
    } else if (config.regimes) {
        // Default to the configured regime's full span.
        const auto windows =
            hiqa::regime_window(*config.regimes, parse_regime(config.regime), config.split);
        data = slice_to_window(data, {windows.train.start, windows.test.end});
    }
    hiqa::WindowModel model;
    if (config.estimate_kind == "linear") {
        model = hiqa::fit_linear_window(data);
    } else if (config.estimate_kind == "exponential") {
        model = hiqa::fit_exponential_window(data);
    } else {
        throw std::runtime_error("unknown estimate kind '" + config.estimate_kind +
                                 "' (expected 'linear' or 'exponential')");
    }
    hiqa::io::save_window_model(model, model_out);
    std::cout << "wrote " << model_out << '\n';
    return kExitOk;
}

hiqa::SampleWindow resolve_assessment_window(const RunConfig& config,
                                             const hiqa::Trajectory& data) {
    if (config.window) return *config.window;
    if (config.regimes) {
        return hiqa::regime_window(*config.regimes, parse_regime(config.regime), config.split)
            .test;
    }
    return data.window();
}

int run_assess(const RunConfig& config) {
    if (!config.data_path) {
        throw std::runtime_error("assess needs the actual series (--data)");
    }
    const hiqa::Trajectory full = hiqa::io::read_hi_csv(*config.data_path);

    hiqa::PrognosisEnsemble ensemble;
    if (config.ensemble_path) {
        ensemble = hiqa::io::read_ensemble_csv(*config.ensemble_path);
    } else {
        const hiqa::SampleWindow window = resolve_assessment_window(config, full);
        if (config.window_model_path) {
            const auto model = hiqa::io::load_window_model(*config.window_model_path);
            ensemble =
                hiqa::simulate_from_window_model(model, window, config.n_prognoses, config.seed);
        } else if (config.model) {
            const auto coeffs = hiqa::derive_coefficients(*config.model);
            ensemble = hiqa::simulate_ensemble(*config.model, coeffs, window, config.n_prognoses,
                                               config.seed, config.noise_scale);
        } else {
            throw std::runtime_error(
                "assess needs a prognosis source: --ensemble, --model or config 'model'");
        }
    }

    const hiqa::Trajectory actual = slice_to_window(full, ensemble.window);
    const std::vector<double> theta =
        config.theta_grid.empty() ? hiqa::default_theta_grid() : config.theta_grid;

    hiqa::AssessmentConfig assessment_config;
    hiqa::io::AssessmentBundle bundle;
    bundle.window = ensemble.window;
    bundle.n = ensemble.size();
    bundle.seed = config.seed;
    bundle.tau = config.tau;
    bundle.theta_grid = theta;
    bundle.actual = actual;

    bool all_good = true;
    for (hiqa::MetricKind kind : config.metrics) {
        hiqa::AssessmentReport report =
            hiqa::assess(ensemble, actual, kind, theta, assessment_config);
        report.seed = config.seed;
        const bool good = report.score > config.tau;
        all_good = all_good && good;
        std::cout << hiqa::metric_name(kind) << ": score " << hiqa::io::format_double(report.score)
                  << "% -> " << (good ? "good" : "bad") << " at tau "
                  << hiqa::io::format_double(config.tau) << '\n';

        switch (hiqa::pattern_requirement(kind)) {
            case hiqa::PatternKind::Mean:
                if (!bundle.mean) bundle.mean = hiqa::mean_pattern(ensemble);
                break;
            case hiqa::PatternKind::QuantileFan:
                if (!bundle.fan) {
                    bundle.fan = hiqa::quantile_fan(ensemble, assessment_config.fan_levels);
                }
                break;
            case hiqa::PatternKind::IncrementQuantileLine:
                if (kind == hiqa::MetricKind::KupiecPof && !bundle.pof_line) {
                    bundle.pof_line = hiqa::increment_quantile_line(
                        ensemble, assessment_config.pof_line_order);
                }
                if (kind == hiqa::MetricKind::KupiecTuff && !bundle.tuff_line) {
                    const auto order = hiqa::solve_tuff_order(ensemble.length() - 1);
                    bundle.tuff_line = hiqa::increment_quantile_line(ensemble, order.order);
                }
                break;
        }
        bundle.reports.push_back(std::move(report));
    }

    const auto report_path = out_path(config, "report.json");
    hiqa::io::write_report_json(bundle, report_path);
    const auto decisions_path = out_path(config, "decisions.csv");
    hiqa::io::write_decision_csv(bundle, decisions_path);
    const auto plots = hiqa::io::write_plot_data(bundle, config.out_dir);
    std::cout << "wrote " << report_path << '\n';
    std::cout << "wrote " << decisions_path << '\n';
    for (const auto& path : plots) std::cout << "wrote " << path << '\n';

    return all_good ? kExitOk : kExitBadPrediction;
}

int run_calibrate(const RunConfig& config) {
    if (!config.model) {
        throw std::runtime_error("calibrate needs degradation model parameters (config 'model')");
    }
    hiqa::CalibrationSpec spec;
    spec.params = *config.model;
    spec.regime = parse_regime(config.regime);
    spec.split = config.split;
    spec.n_prognoses = config.n_prognoses;
    spec.n_tests = config.n_tests;
    spec.metrics = config.metrics;
    if (!config.theta_grid.empty()) spec.theta_grid = config.theta_grid;
    spec.master_seed = config.seed;
    spec.noise_scale = config.noise_scale;
    spec.threads = config.threads;

    const hiqa::CalibrationTable table = hiqa::run_calibration(spec);
    const auto path = out_path(config, "calibration.csv");
    hiqa::io::write_calibration_csv(table, path);
    std::cout << "test window [" << table.test_window.start << "," << table.test_window.end
              << "], " << spec.n_prognoses << " prognoses, " << spec.n_tests << " replications\n";
    std::cout << "wrote " << path << '\n';
    return kExitOk;
}

int run_report(const std::string& report_path, const RunConfig& config) {
    const auto bundle = hiqa::io::read_report_json(report_path);
    const auto decisions_path = out_path(config, "decisions.csv");
    hiqa::io::write_decision_csv(bundle, decisions_path);
    const auto plots = hiqa::io::write_plot_data(bundle, config.out_dir);
    std::cout << "wrote " << decisions_path << '\n';
    for (const auto& path : plots) std::cout << "wrote " << path << '\n';
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Prediction-quality assessment for health-index prognoses"};
    app.require_subcommand(1);

    std::string config_path;
    std::string data_path;
    std::string ensemble_path;
    std::string window_model_path;
    std::string report_path;
    std::string model_out;
    std::string out_dir;
    std::string regime;
    std::string estimate_kind;
    std::vector<std::string> metric_names;
    std::vector<double> theta;
    std::vector<int> window_pair;
    std::vector<int> fit_window_pair;
    std::uint64_t seed = 0;
    double tau = -1.0, split = -1.0, noise_scale = -1.0;
    int n = -1, n_tests = -1, threads = -1;

    const auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON run configuration");
        cmd->add_option("--out", out_dir, "output directory");
        cmd->add_option("--seed", seed, "master seed");
        cmd->add_option("--metrics", metric_names, "metric subset (names)")->delimiter(',');
        cmd->add_option("--theta", theta, "threshold grid (percent)")->delimiter(',');
    };

    CLI::App* simulate = app.add_subcommand("simulate", "simulate model trajectories");
    add_common(simulate);
    simulate->add_option("--window", window_pair, "sample window start end")->expected(2);
    simulate->add_option("--n", n, "number of trajectories (1 = single CSV)");
    simulate->add_option("--noise-scale", noise_scale, "noise multiplier (0 = trend only)");

    CLI::App* estimate = app.add_subcommand("estimate", "fit a window model to a HI series");
    add_common(estimate);
    estimate->add_option("--data", data_path, "input HI CSV");
    estimate->add_option("--kind", estimate_kind, "'linear' or 'exponential'");
    estimate->add_option("--fit-window", fit_window_pair, "fit window start end")->expected(2);
    estimate->add_option("--model-out", model_out, "output model path");

    CLI::App* assess = app.add_subcommand("assess", "assess a prediction against the actual data");
    add_common(assess);
    assess->add_option("--data", data_path, "actual HI CSV");
    assess->add_option("--ensemble", ensemble_path, "prognosis ensemble CSV");
    assess->add_option("--model", window_model_path, "fitted window model JSON");
    assess->add_option("--window", window_pair, "prediction window start end")->expected(2);
    assess->add_option("--n", n, "ensemble size when simulating");
    assess->add_option("--tau", tau, "acceptance threshold for the exit code");
    assess->add_option("--regime", regime, "'second' or 'third' (with config regimes)");
    assess->add_option("--split", split, "train fraction (with config regimes)");

    CLI::App* calibrate = app.add_subcommand("calibrate", "null-calibration table for a model");
    add_common(calibrate);
    calibrate->add_option("--regime", regime, "'second' or 'third'");
    calibrate->add_option("--split", split, "train fraction");
    calibrate->add_option("--n-prognoses", n, "ensemble size");
    calibrate->add_option("--n-tests", n_tests, "number of test replications");
    calibrate->add_option("--threads", threads, "worker threads (0 = hardware)");
    calibrate->add_option("--noise-scale", noise_scale, "noise multiplier");

    CLI::App* report = app.add_subcommand("report", "re-emit tables and plot data from a report");
    add_common(report);
    report->add_option("--report", report_path, "report JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        CLI::App* active = app.get_subcommands().front();
        RunConfig config;
        if (!config_path.empty()) config = hiqa::io::load_run_config(config_path);
        if (!out_dir.empty()) config.out_dir = out_dir;
        if (active->count("--seed") > 0) config.seed = seed;
        if (!metric_names.empty()) config.metrics = parse_metric_names(metric_names);
        if (!theta.empty()) config.theta_grid = theta;
        if (!data_path.empty()) config.data_path = data_path;
        if (!ensemble_path.empty()) config.ensemble_path = ensemble_path;
        if (!window_model_path.empty()) config.window_model_path = window_model_path;
        if (!regime.empty()) config.regime = regime;
        if (!estimate_kind.empty()) config.estimate_kind = estimate_kind;
        if (window_pair.size() == 2) config.window = hiqa::SampleWindow{window_pair[0], window_pair[1]};
        if (fit_window_pair.size() == 2) {
            config.fit_window = hiqa::SampleWindow{fit_window_pair[0], fit_window_pair[1]};
        }
        if (tau >= 0.0) config.tau = tau;
        if (split >= 0.0) config.split = split;
        if (noise_scale >= 0.0) config.noise_scale = noise_scale;
        if (n >= 0) config.n_prognoses = n;
        if (n_tests >= 0) config.n_tests = n_tests;
        if (threads >= 0) config.threads = threads;

        if (simulate->parsed()) {
            std::optional<hiqa::SampleWindow> window = config.window;
            return run_simulate(config, window, n >= 0 ? n : 1);
        }
        if (estimate->parsed()) {
            const std::string path = !model_out.empty() ? model_out : out_path(config, "model.json");
            return run_estimate(config, path);
        }
        if (assess->parsed()) return run_assess(config);
        if (calibrate->parsed()) return run_calibrate(config);
        if (report->parsed()) return run_report(report_path, config);
        std::cerr << "no subcommand given\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitError;
    }
}
