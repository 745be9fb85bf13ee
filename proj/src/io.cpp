#include "hiqa/io.hpp"

#include <algorithm>
#include <cctype>
#include <cerrno>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace hiqa::io {

namespace {

using nlohmann::json;

std::string trim(std::string s) {
    const auto not_space = [](unsigned char c) { return !std::isspace(c); };
    s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
    s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
    return s;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream stream(line);
    while (std::getline(stream, field, ',')) fields.push_back(trim(field));
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

[[noreturn]] void parse_fail(const std::string& path, std::size_t line_no,
                             const std::string& what) {
    throw std::runtime_error(path + ": line " + std::to_string(line_no) + ": " + what);
}

double parse_double(const std::string& field, const std::string& path, std::size_t line_no) {
    const char* begin = field.c_str();
    char* end = nullptr;
    errno = 0;
    const double value = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        parse_fail(path, line_no, "cannot parse number '" + field + "'");
    }
    return value;
}

int parse_index(const std::string& field, const std::string& path, std::size_t line_no) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) {
        parse_fail(path, line_no, "cannot parse sample index '" + field + "'");
    }
    return value;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot open '" + path + "' for writing");
    }
    return out;
}

std::ifstream open_in(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open '" + path + "'");
    }
    return in;
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

json window_to_json(SampleWindow w) { return json{{"start", w.start}, {"end", w.end}}; }

SampleWindow window_from_json(const json& j) {
    return {j.at("start").get<int>(), j.at("end").get<int>()};
}

json report_to_json(const AssessmentReport& report) {
    json j;
    j["m_w"] = report.m_w;
    j["gamma1"] = report.gamma1;
    j["gamma2"] = report.gamma2;
    j["score"] = report.score;
    j["decisions"] = report.decisions;
    j["m_p"] = report.m_p;
    return j;
}

void report_from_json(const json& j, AssessmentReport& report) {
    report.m_w = j.at("m_w").get<double>();
    report.gamma1 = j.at("gamma1").get<double>();
    report.gamma2 = j.at("gamma2").get<double>();
    report.score = j.at("score").get<double>();
    report.decisions = j.at("decisions").get<std::vector<int>>();
    report.m_p = j.at("m_p").get<std::vector<double>>();
}

json load_json_file(const std::string& path) {
    auto in = open_in(path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    return j;
}

}  // namespace

std::string format_double(double value) {
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
    if (ec != std::errc{}) {
        throw std::runtime_error("failed to format double");
    }
    return std::string(buffer, ptr);
}

Trajectory read_hi_csv(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) {
        throw std::runtime_error(path + ": empty file");
    }
    ++line_no;
    const auto header = split_fields(strip_cr(line));
    bool has_index = false;
    if (header.size() == 2 && header[0] == "t" && header[1] == "hi") {
        has_index = true;
    } else if (header.size() == 1 && header[0] == "hi") {
        has_index = false;
    } else {
        parse_fail(path, line_no, "expected header 't,hi' or 'hi'");
    }

    Trajectory trajectory;
    bool first_row = true;
    int previous_index = 0;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        const std::size_t expected = has_index ? 2 : 1;
        if (fields.size() != expected) {
            parse_fail(path, line_no, "expected " + std::to_string(expected) + " column(s), got " +
                                          std::to_string(fields.size()));
        }
        if (has_index) {
            const int index = parse_index(fields[0], path, line_no);
            if (first_row) {
                trajectory.start = index;
            } else if (index != previous_index + 1) {
                parse_fail(path, line_no, "sample index " + std::to_string(index) +
                                              " does not follow " +
                                              std::to_string(previous_index));
            }
            previous_index = index;
        }
        const double value = parse_double(fields[has_index ? 1 : 0], path, line_no);
        if (!std::isfinite(value)) {
            parse_fail(path, line_no, "non-finite value '" + fields[has_index ? 1 : 0] + "'");
        }
        trajectory.values.push_back(value);
        first_row = false;
    }
    if (trajectory.values.empty()) {
        throw std::runtime_error(path + ": no data rows");
    }
    if (!has_index) trajectory.start = 1;
    return trajectory;
}

void write_trajectory_csv(const Trajectory& trajectory, const std::string& path) {
    auto out = open_out(path);
    out << "t,hi\n";
    for (std::size_t i = 0; i < trajectory.values.size(); ++i) {
        out << trajectory.start + static_cast<int>(i) << ',' << format_double(trajectory.values[i])
            << '\n';
    }
    if (!out) {
        throw std::runtime_error("write failed for '" + path + "'");
    }
}

PrognosisEnsemble read_ensemble_csv(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    std::size_t line_no = 0;

    if (!std::getline(in, line)) {
        throw std::runtime_error(path + ": empty file");
    }
    ++line_no;
    const auto header = split_fields(strip_cr(line));
    if (header.size() < 3 || header[0] != "t") {
        parse_fail(path, line_no, "expected header 't,T1,...,Tn' with n >= 2");
    }
    const std::size_t n = header.size() - 1;

    std::vector<std::vector<double>> columns(n);
    int start = 0, previous_index = 0;
    bool first_row = true;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (trim(line).empty()) continue;
        const auto fields = split_fields(line);
        if (fields.size() != n + 1) {
            parse_fail(path, line_no, "expected " + std::to_string(n + 1) + " columns, got " +
                                          std::to_string(fields.size()));
        }
        const int index = parse_index(fields[0], path, line_no);
        if (first_row) {
            start = index;
        } else if (index != previous_index + 1) {
            parse_fail(path, line_no, "sample index " + std::to_string(index) +
                                          " does not follow " + std::to_string(previous_index));
        }
        previous_index = index;
        for (std::size_t i = 0; i < n; ++i) {
            const double value = parse_double(fields[i + 1], path, line_no);
            if (!std::isfinite(value)) {
                parse_fail(path, line_no, "non-finite value '" + fields[i + 1] + "'");
            }
            columns[i].push_back(value);
        }
        first_row = false;
    }
    if (first_row) {
        throw std::runtime_error(path + ": no data rows");
    }

    PrognosisEnsemble ensemble;
    ensemble.window = {start, previous_index};
    ensemble.trajectories = std::move(columns);
    validate(ensemble);
    return ensemble;
}

void write_ensemble_csv(const PrognosisEnsemble& ensemble, const std::string& path) {
    validate(ensemble);
    auto out = open_out(path);
    out << 't';
    for (int i = 1; i <= ensemble.size(); ++i) out << ",T" << i;
    out << '\n';
    const std::size_t len = ensemble.trajectories.front().size();
    for (std::size_t t = 0; t < len; ++t) {
        out << ensemble.window.start + static_cast<int>(t);
        for (const auto& trajectory : ensemble.trajectories) {
            out << ',' << format_double(trajectory[t]);
        }
        out << '\n';
    }
    if (!out) {
        throw std::runtime_error("write failed for '" + path + "'");
    }
}

NumericTable read_table_csv(const std::string& path) {
    auto in = open_in(path);
    std::string line;
    std::size_t line_no = 0;
    NumericTable table;
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (trim(line).empty() || line.front() == '#') continue;
        const auto fields = split_fields(line);
        if (table.columns.empty()) {
            table.columns = fields;
            continue;
        }
        if (fields.size() != table.columns.size()) {
            parse_fail(path, line_no, "expected " + std::to_string(table.columns.size()) +
                                          " columns, got " + std::to_string(fields.size()));
        }
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& field : fields) row.push_back(parse_double(field, path, line_no));
        table.rows.push_back(std::move(row));
    }
    if (table.columns.empty()) {
        throw std::runtime_error(path + ": empty table");
    }
    return table;
}

std::string calibration_csv_string(const CalibrationTable& table) {
    std::string out = "theta";
    for (MetricKind kind : table.metrics) {
        out += ',';
        out += metric_name(kind);
    }
    out += '\n';
    for (std::size_t ti = 0; ti < table.theta_grid.size(); ++ti) {
        out += format_double(table.theta_grid[ti]);
        for (std::size_t mi = 0; mi < table.metrics.size(); ++mi) {
            out += ',';
            out += format_double(table.good_percent[mi][ti]);
        }
        out += '\n';
    }
    return out;
}

void write_calibration_csv(const CalibrationTable& table, const std::string& path) {
    auto out = open_out(path);
    out << calibration_csv_string(table);
    if (!out) {
        throw std::runtime_error("write failed for '" + path + "'");
    }
}

void write_decision_csv(const AssessmentBundle& bundle, const std::string& path) {
    if (bundle.theta_grid.empty()) {
        throw std::invalid_argument("decision table needs a non-empty threshold grid");
    }
    for (const auto& report : bundle.reports) {
        if (report.decisions.size() != bundle.theta_grid.size()) {
            throw std::invalid_argument("report decision count does not match the threshold grid");
        }
    }
    auto out = open_out(path);
    out << "theta";
    for (const auto& report : bundle.reports) out << ',' << metric_name(report.metric);
    out << '\n';
    for (std::size_t ti = 0; ti < bundle.theta_grid.size(); ++ti) {
        out << format_double(bundle.theta_grid[ti]);
        for (const auto& report : bundle.reports) out << ',' << report.decisions[ti];
        out << '\n';
    }
    if (!out) {
        throw std::runtime_error("write failed for '" + path + "'");
    }
}

void write_report_json(const AssessmentBundle& bundle, const std::string& path) {
    json j;
    j["version"] = 1;
    j["kind"] = "assessment_report";
    j["window"] = window_to_json(bundle.window);
    j["n"] = bundle.n;
    j["seed"] = bundle.seed;
    j["tau"] = bundle.tau;
    j["theta_grid"] = bundle.theta_grid;
    j["actual"] = json{{"start", bundle.actual.start}, {"values", bundle.actual.values}};
    json metrics = json::object();
    for (const auto& report : bundle.reports) {
        metrics[std::string(metric_name(report.metric))] = report_to_json(report);
    }
    j["metrics"] = metrics;
    json patterns = json::object();
    if (bundle.mean) patterns["mean"] = *bundle.mean;
    if (bundle.fan) {
        patterns["fan"] = json{{"levels", bundle.fan->levels}, {"lines", bundle.fan->lines}};
    }
    if (bundle.pof_line) {
        patterns["pof_line"] =
            json{{"order", bundle.pof_line->order}, {"values", bundle.pof_line->values}};
    }
    if (bundle.tuff_line) {
        patterns["tuff_line"] =
            json{{"order", bundle.tuff_line->order}, {"values", bundle.tuff_line->values}};
    }
    j["patterns"] = patterns;

    auto out = open_out(path);
    out << j.dump(2) << '\n';
    if (!out) {
        throw std::runtime_error("write failed for '" + path + "'");
    }
}

AssessmentBundle read_report_json(const std::string& path) {
    const json j = load_json_file(path);
    AssessmentBundle bundle;
    try {
        if (j.at("kind").get<std::string>() != "assessment_report") {
            throw std::runtime_error(path + ": not an assessment report");
        }
        bundle.window = window_from_json(j.at("window"));
        bundle.n = j.at("n").get<int>();
        bundle.seed = j.at("seed").get<std::uint64_t>();
        bundle.tau = j.at("tau").get<double>();
        bundle.theta_grid = j.at("theta_grid").get<std::vector<double>>();
        bundle.actual.start = j.at("actual").at("start").get<int>();
        bundle.actual.values = j.at("actual").at("values").get<std::vector<double>>();
        for (const auto& [name, value] : j.at("metrics").items()) {
            const auto kind = metric_from_name(name);
            if (!kind) {
                throw std::runtime_error(path + ": unknown metric '" + name + "'");
            }
            AssessmentReport report;
            report.metric = *kind;
            report.window = bundle.window;
            report.n = bundle.n;
            report.seed = bundle.seed;
            report.theta_grid = bundle.theta_grid;
            report_from_json(value, report);
            bundle.reports.push_back(std::move(report));
        }
        const json& patterns = j.at("patterns");
        if (patterns.contains("mean")) {
            bundle.mean = patterns.at("mean").get<std::vector<double>>();
        }
        if (patterns.contains("fan")) {
            QuantileFan fan;
            fan.levels = patterns.at("fan").at("levels").get<std::vector<double>>();
            fan.lines = patterns.at("fan").at("lines").get<std::vector<std::vector<double>>>();
            bundle.fan = std::move(fan);
        }
        if (patterns.contains("pof_line")) {
            IncrementQuantileLine line;
            line.order = patterns.at("pof_line").at("order").get<double>();
            line.values = patterns.at("pof_line").at("values").get<std::vector<double>>();
            bundle.pof_line = std::move(line);
        }
        if (patterns.contains("tuff_line")) {
            IncrementQuantileLine line;
            line.order = patterns.at("tuff_line").at("order").get<double>();
            line.values = patterns.at("tuff_line").at("values").get<std::vector<double>>();
            bundle.tuff_line = std::move(line);
        }
    } catch (const json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    // Keep the metric order stable regardless of JSON object ordering.
    std::sort(bundle.reports.begin(), bundle.reports.end(),
              [](const AssessmentReport& a, const AssessmentReport& b) {
                  return static_cast<int>(a.metric) < static_cast<int>(b.metric);
              });
    return bundle;
}

std::vector<std::string> write_plot_data(const AssessmentBundle& bundle,
                                         const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    std::vector<std::string> written;

    for (const auto& report : bundle.reports) {
        const std::string path =
            (std::filesystem::path(out_dir) / ("hist_" + std::string(metric_name(report.metric)) +
                                               ".csv"))
                .string();
        auto out = open_out(path);
        double lo = report.m_w, hi = report.m_w;
        for (double v : report.m_p) {
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (hi <= lo) hi = lo + 1.0;
        const int bins = std::max(10, static_cast<int>(std::ceil(
                                          std::sqrt(static_cast<double>(report.m_p.size())))));
        std::vector<int> counts(static_cast<std::size_t>(bins), 0);
        const double width = (hi - lo) / bins;
        for (double v : report.m_p) {
            int b = static_cast<int>((v - lo) / width);
            b = std::clamp(b, 0, bins - 1);
            ++counts[static_cast<std::size_t>(b)];
        }
        out << "# metric=" << metric_name(report.metric) << " m_w=" << format_double(report.m_w)
            << " score=" << format_double(report.score) << '\n';
        out << "bin_lo,bin_hi,count\n";
        for (int b = 0; b < bins; ++b) {
            out << format_double(lo + b * width) << ',' << format_double(lo + (b + 1) * width)
                << ',' << counts[static_cast<std::size_t>(b)] << '\n';
        }
        written.push_back(path);
    }

    const auto& actual = bundle.actual.values;
    if (bundle.mean && bundle.mean->size() == actual.size()) {
        const std::string path = (std::filesystem::path(out_dir) / "overlay_mean.csv").string();
        auto out = open_out(path);
        out << "t,actual,pattern\n";
        for (std::size_t t = 0; t < actual.size(); ++t) {
            out << bundle.window.start + static_cast<int>(t) << ',' << format_double(actual[t])
                << ',' << format_double((*bundle.mean)[t]) << '\n';
        }
        written.push_back(path);
    }
    if (bundle.fan && !bundle.fan->lines.empty() && bundle.fan->lines.front().size() == actual.size()) {
        const std::string path = (std::filesystem::path(out_dir) / "overlay_fan.csv").string();
        auto out = open_out(path);
        out << "t,actual";
        for (double level : bundle.fan->levels) out << ",q" << format_double(level);
        out << '\n';
        for (std::size_t t = 0; t < actual.size(); ++t) {
            out << bundle.window.start + static_cast<int>(t) << ',' << format_double(actual[t]);
            for (const auto& line : bundle.fan->lines) out << ',' << format_double(line[t]);
            out << '\n';
        }
        written.push_back(path);
    }
    if ((bundle.pof_line || bundle.tuff_line) && actual.size() >= 2) {
        const std::string path =
            (std::filesystem::path(out_dir) / "overlay_increments.csv").string();
        auto out = open_out(path);
        out << "t,actual_increment";
        if (bundle.pof_line) out << ",pof_line";
        if (bundle.tuff_line) out << ",tuff_line";
        out << '\n';
        for (std::size_t t = 0; t + 1 < actual.size(); ++t) {
            out << bundle.window.start + static_cast<int>(t) + 1 << ','
                << format_double(actual[t + 1] - actual[t]);
            if (bundle.pof_line && t < bundle.pof_line->values.size()) {
                out << ',' << format_double(bundle.pof_line->values[t]);
            }
            if (bundle.tuff_line && t < bundle.tuff_line->values.size()) {
                out << ',' << format_double(bundle.tuff_line->values[t]);
            }
            out << '\n';
        }
        written.push_back(path);
    }
    return written;
}

void save_window_model(const WindowModel& model, const std::string& path) {
    json j;
    j["version"] = 1;
    j["kind"] = model.kind == WindowModel::Kind::Linear ? "linear" : "exponential";
    j["t_ref"] = model.t_ref;
    if (model.kind == WindowModel::Kind::Linear) {
        j["trend"] = json{{"slope", model.trend_slope}, {"intercept", model.trend_intercept}};
        j["scale"] = json{{"slope", model.scale_slope},
                          {"intercept", model.scale_intercept},
                          {"floor", model.scale_floor}};
    } else {
        j["trend"] = json{{"amp", model.trend_amp},
                          {"rate", model.trend_rate},
                          {"offset", model.trend_offset}};
        j["scale"] = json{{"amp", model.scale_amp},
                          {"rate", model.scale_rate},
                          {"floor", model.scale_floor}};
    }
    auto out = open_out(path);
    out << j.dump(2) << '\n';
    if (!out) {
        throw std::runtime_error("write failed for '" + path + "'");
    }
}

WindowModel load_window_model(const std::string& path) {
    const json j = load_json_file(path);
    WindowModel model;
    try {
        const auto kind = j.at("kind").get<std::string>();
        if (kind == "linear") {
            model.kind = WindowModel::Kind::Linear;
        } else if (kind == "exponential") {
            model.kind = WindowModel::Kind::Exponential;
        } else {
            throw std::runtime_error(path + ": unknown window model kind '" + kind + "'");
        }
        model.t_ref = j.at("t_ref").get<double>();
        const json& trend = j.at("trend");
        const json& scale = j.at("scale");
        if (model.kind == WindowModel::Kind::Linear) {
            model.trend_slope = trend.at("slope").get<double>();
            model.trend_intercept = trend.at("intercept").get<double>();
            model.scale_slope = scale.at("slope").get<double>();
            model.scale_intercept = scale.at("intercept").get<double>();
        } else {
            model.trend_amp = trend.at("amp").get<double>();
            model.trend_rate = trend.at("rate").get<double>();
            model.trend_offset = trend.at("offset").get<double>();
            model.scale_amp = scale.at("amp").get<double>();
            model.scale_rate = scale.at("rate").get<double>();
        }
        model.scale_floor = scale.at("floor").get<double>();
    } catch (const json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    return model;
}

RunConfig load_run_config(const std::string& path) {
    const json j = load_json_file(path);
    RunConfig config;
    try {
        config.version = j.value("version", 1);
        if (j.contains("model")) {
            const json& m = j.at("model");
            DegradationParams params;
            params.t1_star = m.at("t1_star").get<int>();
            params.t2_star = m.at("t2_star").get<int>();
            params.m = m.at("m").get<int>();
            params.sigma1 = m.at("sigma1").get<double>();
            params.sigma2 = m.at("sigma2").get<double>();
            params.sigma3 = m.at("sigma3").get<double>();
            params.sigma4 = m.at("sigma4").get<double>();
            params.c1 = m.at("c1").get<double>();
            config.model = params;
        }
        if (j.contains("regimes")) {
            const json& r = j.at("regimes");
            config.regimes = RegimeBoundaries{r.at("t1_star").get<int>(),
                                              r.at("t2_star").get<int>(), r.at("m").get<int>()};
        }
        if (j.contains("data")) config.data_path = j.at("data").get<std::string>();
        if (j.contains("window_model")) {
            config.window_model_path = j.at("window_model").get<std::string>();
        }
        if (j.contains("ensemble")) config.ensemble_path = j.at("ensemble").get<std::string>();
        config.regime = j.value("regime", config.regime);
        config.split = j.value("split", config.split);
        if (j.contains("window")) {
            const auto w = j.at("window").get<std::vector<int>>();
            if (w.size() != 2) throw std::runtime_error(path + ": window must be [start, end]");
            config.window = SampleWindow{w[0], w[1]};
        }
        if (j.contains("fit_window")) {
            const auto w = j.at("fit_window").get<std::vector<int>>();
            if (w.size() != 2) {
                throw std::runtime_error(path + ": fit_window must be [start, end]");
            }
            config.fit_window = SampleWindow{w[0], w[1]};
        }
        config.estimate_kind = j.value("estimate_kind", config.estimate_kind);
        if (j.contains("metrics")) {
            config.metrics.clear();
            for (const auto& name : j.at("metrics")) {
                const auto kind = metric_from_name(name.get<std::string>());
                if (!kind) {
                    throw std::runtime_error(path + ": unknown metric '" +
                                             name.get<std::string>() + "'");
                }
                config.metrics.push_back(*kind);
            }
        }
        if (j.contains("theta")) config.theta_grid = j.at("theta").get<std::vector<double>>();
        config.tau = j.value("tau", config.tau);
        config.n_prognoses = j.value("n_prognoses", config.n_prognoses);
        config.n_tests = j.value("n_tests", config.n_tests);
        config.seed = j.value("seed", config.seed);
        config.noise_scale = j.value("noise_scale", config.noise_scale);
        config.threads = j.value("threads", config.threads);
        config.out_dir = j.value("out", config.out_dir);
    } catch (const json::exception& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    return config;
}

}  // namespace hiqa::io
