#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hiqa/assessment.hpp"
#include "hiqa/calibration.hpp"
#include "hiqa/estimation.hpp"

namespace hiqa::io {

// Shortest decimal form that parses back to the same double.
std::string format_double(double value);

// Two-column file (header "t,hi": integer index, real value) or
// single-column file (header "hi", index assumed 1..len). Errors carry the
// 1-based line number; indices must advance by exactly one per row and all
// values must be finite.
Trajectory read_hi_csv(const std::string& path);
void write_trajectory_csv(const Trajectory& trajectory, const std::string& path);

// Header "t,T1,...,Tn"; one row per sample.
PrognosisEnsemble read_ensemble_csv(const std::string& path);
void write_ensemble_csv(const PrognosisEnsemble& ensemble, const std::string& path);

// Generic delimited numeric table; used to re-parse emitted tables.
struct NumericTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};
NumericTable read_table_csv(const std::string& path);

// Rows = thresholds, columns = metrics, cells = percentage good.
void write_calibration_csv(const CalibrationTable& table, const std::string& path);
std::string calibration_csv_string(const CalibrationTable& table);

// Everything one assessment run produced: per-metric reports plus the
// patterns and actual series needed to redraw the figures.
struct AssessmentBundle {
    SampleWindow window;
    int n = 0;
    std::uint64_t seed = 0;
    double tau = 50.0;
    std::vector<double> theta_grid;
    Trajectory actual;
    std::vector<AssessmentReport> reports;

    std::optional<std::vector<double>> mean;
    std::optional<QuantileFan> fan;
    std::optional<IncrementQuantileLine> pof_line;
    std::optional<IncrementQuantileLine> tuff_line;
};

void write_report_json(const AssessmentBundle& bundle, const std::string& path);
AssessmentBundle read_report_json(const std::string& path);

// Rows = thresholds, columns = metrics, cells 0/1. Throws on an empty
// threshold grid before touching the file.
void write_decision_csv(const AssessmentBundle& bundle, const std::string& path);

// Histogram of member metric values with the actual series' value marked,
// one file per metric, plus overlay series of the actual data against each
// pattern. Returns the paths written.
std::vector<std::string> write_plot_data(const AssessmentBundle& bundle,
                                         const std::string& out_dir);

void save_window_model(const WindowModel& model, const std::string& path);
WindowModel load_window_model(const std::string& path);

// Run configuration: versioned JSON, everything optional so the CLI can
// override per flag.
struct RunConfig {
    int version = 1;
    std::optional<DegradationParams> model;
    std::optional<RegimeBoundaries> regimes;
    std::optional<std::string> data_path;
    std::optional<std::string> window_model_path;
    std::optional<std::string> ensemble_path;
    std::string regime = "second";
    double split = 0.8;
    std::optional<SampleWindow> window;
    std::optional<SampleWindow> fit_window;
    std::string estimate_kind = "linear";
    std::vector<MetricKind> metrics = all_metrics();
    std::vector<double> theta_grid;  // empty = subcommand default
    double tau = 50.0;
    int n_prognoses = 1000;
    int n_tests = 1000;
    std::uint64_t seed = 0;
    double noise_scale = 1.0;
    int threads = 0;
    std::string out_dir = ".";
};

RunConfig load_run_config(const std::string& path);

}  // namespace hiqa::io
