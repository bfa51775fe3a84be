#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pcmwall/assembly.hpp"
#include "pcmwall/solver.hpp"

namespace pcmwall {

// Declarative wall geometry, kept in the form the config stated so sweeps
// can override the generating parameters.
struct HollowBrickSpec {
    double shell = 0.010; // m
    double cavity = 0.030;
    double skin = 0.005;
    std::string fill;
    std::string shell_material = "brick";
    std::string skin_material = "cement";
};

struct ExplicitLayerSpec {
    std::string material;
    double thickness = 0.0; // m
};

using StackSpec = std::variant<HollowBrickSpec, std::vector<ExplicitLayerSpec>>;

struct ScenarioConfig {
    std::string description;
    // Every material the stack references, fully resolved (inline definitions
    // plus built-in presets pulled in by name).
    std::map<std::string, AnyMaterial> materials;
    StackSpec stack;
    BoundaryCondition boundary = SinusoidalBc{};
    ProbeSet probes;
    SolverConfig solver;
    std::optional<double> initial_temperature; // degC; default: input at t = 0
    double duration = 30.0;                    // h
    double output_interval = 0.1;              // h
    std::optional<std::array<double, 2>> metrics_window; // h; default [0, duration]
    std::optional<double> metrics_period;                // h; default: forcing period
    double cycle_tolerance = 0.01;                       // K

    double metrics_window_lo() const { return metrics_window ? (*metrics_window)[0] : 0.0; }
    double metrics_window_hi() const { return metrics_window ? (*metrics_window)[1] : duration; }
    double effective_metrics_period() const;
    double effective_initial_temperature() const;
};

// Strict parser: unknown keys, malformed values and dangling material
// references are errors; syntax errors name the line and column.
ScenarioConfig parse_scenario(const std::string& text);

// Canonical form: sorted keys, defaults materialized, shortest round-trip
// numbers. parse(serialize(parse(text))) == parse(text).
std::string serialize_scenario(const ScenarioConfig& config);

LayerStack build_stack(const ScenarioConfig& config);

ScenarioConfig load_scenario_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

// Scenario presets ship as plain config files named <id>.json.
std::string default_presets_dir();
bool looks_like_preset_id(const std::string& ref);
// Accepts either a preset id or a config file path; returns the file path.
std::string resolve_scenario_reference(const std::string& ref,
                                       const std::string& presets_dir);
// Sorted preset ids found in the directory.
std::vector<std::string> available_presets(const std::string& presets_dir);

} // namespace pcmwall
