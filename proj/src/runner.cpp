#include "pcmwall/runner.hpp"

#include <sstream>

#include "pcmwall/csv.hpp"

namespace pcmwall {

std::string render_table_csv(const RunResult& result) {
    std::vector<std::string> header{"time_h", "input_C"};
    for (double fraction : result.probe_fractions)
        header.push_back("probe_" + format_double(fraction) + "_C");
    header.push_back("flux_W_m2");

    std::ostringstream out;
    out << csv_join(header) << '\n';
    for (size_t i = 0; i < result.time.size(); ++i) {
        std::vector<std::string> row;
        row.reserve(header.size());
        row.push_back(format_double(result.time[i]));
        row.push_back(format_double(result.input[i]));
        for (const auto& series : result.probes)
            row.push_back(format_double(series[i]));
        row.push_back(format_double(result.flux[i]));
        out << csv_join(row) << '\n';
    }
    return out.str();
}

std::string render_summary(const MetricsReport& m) {
    std::ostringstream out;
    auto line = [&](const char* key, const std::string& value) {
        out << key << ' ' << value << '\n';
    };
    line("window_lo_h", format_double(m.window_lo));
    line("window_hi_h", format_double(m.window_hi));
    line("period_h", format_double(m.period));
    line("input_max_c", format_double(m.input.max_value));
    line("input_max_time_h", format_double(m.input.max_time));
    line("input_min_c", format_double(m.input.min_value));
    line("input_min_time_h", format_double(m.input.min_time));
    line("output_max_c", format_double(m.output.max_value));
    line("output_max_time_h", format_double(m.output.max_time));
    line("output_min_c", format_double(m.output.min_value));
    line("output_min_time_h", format_double(m.output.min_time));
    line("decrement_factor", format_double(m.decrement_factor));
    line("time_lag_h", format_double(m.time_lag));
    line("energy_residual", format_double(m.energy_residual));
    line("cycle_checked", m.cycle_checked ? "1" : "0");
    line("cycle_converged", m.cycle_converged ? "1" : "0");
    line("latent_capacity_j_per_m2", format_double(m.latent_capacity));
    return out.str();
}

SimulationArtifacts simulate_scenario(const ScenarioConfig& config) {
    SimulationArtifacts artifacts;
    const LayerStack stack = build_stack(config);
    artifacts.result = run(stack, config.boundary, config.probes, config.solver,
                           config.duration, config.output_interval,
                           config.effective_initial_temperature());
    artifacts.metrics = compute_metrics(artifacts.result, config.metrics_window_lo(),
                                        config.metrics_window_hi(),
                                        config.effective_metrics_period(),
                                        config.cycle_tolerance);
    artifacts.table_csv = render_table_csv(artifacts.result);
    artifacts.summary_text = render_summary(artifacts.metrics);
    return artifacts;
}

} // namespace pcmwall
