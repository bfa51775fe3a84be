#include <cstdio>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "pcmwall/config.hpp"
#include "pcmwall/csv.hpp"
#include "pcmwall/metrics.hpp"
#include "pcmwall/runner.hpp"
#include "pcmwall/sweep.hpp"
#include "pcmwall/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1; // failed verification or solver hard error
constexpr int kExitUsage = 2;   // bad input: config, file, arguments

std::string stem_of(const std::string& ref) {
    size_t start = ref.find_last_of("/\\");
    start = start == std::string::npos ? 0 : start + 1;
    size_t end = ref.rfind('.');
    if (end == std::string::npos || end <= start) end = ref.size();
    return ref.substr(start, end - start);
}

int cmd_simulate(const std::string& ref, const std::string& presets_dir,
                 std::string out_table, std::string out_summary) {
    const std::string path = pcmwall::resolve_scenario_reference(ref, presets_dir);
    const pcmwall::ScenarioConfig config = pcmwall::load_scenario_file(path);
    const pcmwall::SimulationArtifacts artifacts = pcmwall::simulate_scenario(config);

    if (out_table.empty()) out_table = stem_of(ref) + "_table.csv";
    if (out_summary.empty()) out_summary = stem_of(ref) + "_summary.txt";
    pcmwall::write_text_file(out_table, artifacts.table_csv);
    pcmwall::write_text_file(out_summary, artifacts.summary_text);

    std::cout << artifacts.summary_text;
    std::cout << "table " << out_table << "\n";
    std::cout << "summary " << out_summary << "\n";
    return kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& presets_dir) {
    const pcmwall::SweepConfig config =
        pcmwall::parse_sweep(pcmwall::read_text_file(config_path), presets_dir);
    const std::string csv = pcmwall::run_sweep_csv(config);
    pcmwall::write_text_file(config.output_csv, csv);

    size_t rows = 0;
    for (char c : csv) rows += c == '\n';
    std::cout << "rows " << (rows > 0 ? rows - 1 : 0) << "\n";
    std::cout << "table " << config.output_csv << "\n";
    return kExitOk;
}

int cmd_metrics(const std::string& csv_path, const std::string& window_text,
                double period) {
    const pcmwall::CsvTable table =
        pcmwall::read_csv(pcmwall::read_text_file(csv_path));
    if (table.header.size() < 3)
        throw std::invalid_argument(
            "metrics: table needs time, input and at least one probe column");
    if (table.rows.empty()) throw std::invalid_argument("metrics: table has no rows");

    const size_t columns = table.header.size();
    std::vector<double> time, input, output;
    for (const auto& row : table.rows) {
        time.push_back(row[0]);
        input.push_back(row[1]);
        output.push_back(row[columns - 2]); // last probe; the flux column is last
    }

    double lo = time.front(), hi = time.back();
    if (!window_text.empty()) {
        const size_t comma = window_text.find(',');
        if (comma == std::string::npos)
            throw std::invalid_argument("metrics: --window expects lo,hi");
        try {
            lo = std::stod(window_text.substr(0, comma));
            hi = std::stod(window_text.substr(comma + 1));
        } catch (const std::exception&) {
            throw std::invalid_argument("metrics: --window expects numbers lo,hi");
        }
    }

    const pcmwall::ExtremumInfo in = pcmwall::extrema(time, input, lo, hi);
    const pcmwall::ExtremumInfo out = pcmwall::extrema(time, output, lo, hi);
    auto line = [](const char* key, double v) {
        std::cout << key << ' ' << pcmwall::format_double(v) << '\n';
    };
    line("window_lo_h", lo);
    line("window_hi_h", hi);
    line("period_h", period);
    line("input_max_c", in.max_value);
    line("input_max_time_h", in.max_time);
    line("input_min_c", in.min_value);
    line("input_min_time_h", in.min_time);
    line("output_max_c", out.max_value);
    line("output_max_time_h", out.max_time);
    line("output_min_c", out.min_value);
    line("output_min_time_h", out.min_time);
    line("decrement_factor", pcmwall::decrement_factor(in, out));
    line("time_lag_h", pcmwall::time_lag(in.max_time, out.max_time, period));
    return kExitOk;
}

int cmd_verify(bool list, const std::string& only, const std::string& presets_dir,
               double perturbation) {
    if (list) {
        for (const pcmwall::CheckInfo& check : pcmwall::verify_checks())
            std::cout << check.id << " — " << check.description << "\n";
        return kExitOk;
    }
    pcmwall::VerifyOptions options;
    options.presets_dir = presets_dir;
    options.only = only;
    options.oracle_perturbation = perturbation;
    const std::vector<pcmwall::CheckResult> results =
        pcmwall::run_verification(options);

    bool all_passed = true;
    for (const pcmwall::CheckResult& r : results) {
        all_passed = all_passed && r.passed;
        std::cout << (r.passed ? "PASS" : "FAIL") << ' ' << r.id << " — " << r.detail
                  << "\n";
    }
    std::cout << (all_passed ? "all checks passed" : "verification FAILED") << " ("
              << results.size() << " run)\n";
    return all_passed ? kExitOk : kExitFailure;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Transient heat conduction through layered walls with "
                 "phase-change cavity fill"};
    app.require_subcommand(1);

    std::string presets_dir = pcmwall::default_presets_dir();

    auto* simulate = app.add_subcommand(
        "simulate", "Run one scenario; write the probe table and the metrics summary");
    std::string scenario_ref, out_table, out_summary;
    simulate->add_option("config", scenario_ref, "Scenario config file or preset id")
        ->required();
    simulate->add_option("--out-table", out_table, "Probe table path (CSV)");
    simulate->add_option("--out-summary", out_summary, "Summary record path");
    simulate->add_option("--presets-dir", presets_dir, "Preset directory");

    auto* sweep = app.add_subcommand(
        "sweep", "Run a parameter sweep; write one CSV row per combination");
    std::string sweep_path;
    sweep->add_option("config", sweep_path, "Sweep config file")->required();
    sweep->add_option("--presets-dir", presets_dir, "Preset directory");

    auto* metrics = app.add_subcommand(
        "metrics", "Recompute decrement factor and time lag from a probe table");
    std::string csv_path, window_text;
    double period = 24.0;
    metrics->add_option("csv", csv_path, "Probe table written by simulate")
        ->required();
    metrics->add_option("--window", window_text, "Evaluation window, hours: lo,hi");
    metrics->add_option("--period", period, "Forcing period, hours");

    auto* verify = app.add_subcommand(
        "verify", "Run the built-in verification suite against the analytic oracles");
    bool list = false;
    std::string only;
    double perturbation = 0.0;
    verify->add_flag("--list", list, "List checks without running them");
    verify->add_option("--only", only, "Run a single check by id");
    verify->add_option("--presets-dir", presets_dir, "Preset directory");
    verify->add_option("--perturb-oracle", perturbation,
                       "Skew the oracle fixture's conductivity (suite self-test)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed())
            return cmd_simulate(scenario_ref, presets_dir, out_table, out_summary);
        if (sweep->parsed()) return cmd_sweep(sweep_path, presets_dir);
        if (metrics->parsed()) return cmd_metrics(csv_path, window_text, period);
        if (verify->parsed()) return cmd_verify(list, only, presets_dir, perturbation);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}
