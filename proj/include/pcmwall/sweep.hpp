#pragma once

#include <string>
#include <variant>
#include <vector>

namespace pcmwall {

// One swept parameter: a dotted path into the scenario document and the
// values it takes. Paths are replace-only; they must already exist in the
// base scenario. Values may be numbers or strings (e.g. a material id).
struct SweepAxis {
    std::string path;
    std::vector<std::variant<double, std::string>> values;
};

struct SweepConfig {
    // Base scenario in canonical serialized form.
    std::string base_scenario;
    std::vector<SweepAxis> axes;
    std::string output_csv = "sweep.csv";
    int workers = 0; // 0: pick from hardware concurrency
};

// Strict parser for sweep documents:
//   {"base": <scenario object | preset id | config path>,
//    "axes": [{"path": "stack.hollow_brick.cavity_m", "values": [...]}, ...],
//    "output_csv"?: "...", "workers"?: n}
// The base is normalized to canonical form and every axis path is validated
// against it up front.
SweepConfig parse_sweep(const std::string& text, const std::string& presets_dir);

// Runs the full cartesian product (last axis fastest) and renders one CSV:
// axis columns, then the metric columns, then an error column that carries
// per-row failures instead of aborting the sweep. Byte-deterministic for a
// given config regardless of worker count.
std::string run_sweep_csv(const SweepConfig& config);

} // namespace pcmwall
