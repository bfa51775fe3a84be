#pragma once

#include <string>

#include "pcmwall/config.hpp"
#include "pcmwall/metrics.hpp"
#include "pcmwall/solver.hpp"

namespace pcmwall {

// Everything one scenario run produces: the raw trace, the derived
// metrics, and the two text artifacts ready to be written to disk.
struct SimulationArtifacts {
    RunResult result;
    MetricsReport metrics;
    std::string table_csv;    // time/input/probe/flux table
    std::string summary_text; // "key value" lines
};

// Runs the scenario end to end. Deterministic: identical configs
// produce byte-identical artifacts.
SimulationArtifacts simulate_scenario(const ScenarioConfig& config);

// Renders the probe table for an existing run.
std::string render_table_csv(const RunResult& result);

// Renders the metrics summary.
std::string render_summary(const MetricsReport& metrics);

} // namespace pcmwall
