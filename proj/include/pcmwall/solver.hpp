#pragma once

#include <optional>
#include <vector>

#include "pcmwall/assembly.hpp"

namespace pcmwall {

struct SolverConfig {
    double dt = 1.0 / 60.0;         // h
    double newton_tolerance = 1e-10;
    int max_newton_iterations = 50;
    // Grid control: cells_per_layer wins when positive, otherwise each layer
    // is split into cells no wider than target_cell_size.
    int cells_per_layer = 0;
    double target_cell_size = 5e-4; // m
    double volumetric_source = 0.0; // W/m3, applied uniformly
    // Extra thermal resistance at faces where the material changes.
    double contact_resistance = 0.0; // m2 K / W

    void validate() const;
};

// Cell-centered finite-volume grid; cell edges coincide with layer
// interfaces and cells are uniform within a layer.
struct Grid {
    LayerStack stack;
    std::vector<double> edges;         // cells + 1
    std::vector<double> centers;       // per cell
    std::vector<double> widths;        // per cell
    std::vector<int> layer_of_cell;    // per cell

    int cells() const { return static_cast<int>(widths.size()); }
    const AnyMaterial& material_of(int cell) const {
        return stack.layers[layer_of_cell[cell]].material;
    }
};

Grid build_grid(const LayerStack& stack, const SolverConfig& config);

struct SimulationState {
    double time = 0.0;                 // h
    std::vector<double> temperature;   // degC per cell
    std::vector<double> enthalpy;      // J/m3 per cell (volumetric)
    std::vector<PhaseState> phase;     // per cell; meaningful for PCM cells
};

// Uniform-temperature state; PCM cells start on the heating branch with the
// fraction the melt ramp assigns to that temperature.
SimulationState initial_state(const Grid& grid, double temperature);

struct StepResult {
    SimulationState state;
    // Heat admitted through the heated face during the step, J/m2, measured
    // with the same implicit flux the update used, so storage and boundary
    // transfer balance exactly.
    double boundary_heat = 0.0;
    double source_heat = 0.0; // J/m2 from the volumetric source
};

// One backward-Euler step of length dt hours. Conserved cell enthalpies are
// solved by Newton iteration with the hysteresis branch and mixture frozen;
// afterwards each PCM cell's branch follows the realized temperature
// direction and its temperature is re-read from the new branch curve at
// unchanged enthalpy. A step that fails to converge is retried as two half
// steps, up to 10 halvings, then reported as a hard error naming the cell.
StepResult step(const Grid& grid, const SolverConfig& config,
                const BoundaryCondition& bc, const SimulationState& state, double dt);

struct RunResult {
    Grid grid;
    std::vector<double> probe_fractions; // as requested, 0..1
    std::vector<double> probe_positions; // m
    std::vector<double> time;            // h, one entry per recorded sample
    std::vector<double> input;           // degC
    std::vector<std::vector<double>> probes; // [probe][sample], degC
    std::vector<double> flux;            // W/m2 into the heated face
    SimulationState final_state;
    double boundary_heat = 0.0;    // J/m2 over the whole run
    double source_heat = 0.0;      // J/m2
    double initial_enthalpy = 0.0; // J/m2
    double final_enthalpy = 0.0;   // J/m2
};

// March the assembly from a uniform start through `duration` hours,
// recording probe temperatures, the driving temperature and the heated-face
// flux every `output_interval` hours. Steps are clipped so records land on
// exact times; a zero duration returns the initial state and no samples.
RunResult run(const LayerStack& stack, const BoundaryCondition& bc,
              const ProbeSet& probes, const SolverConfig& config, double duration,
              double output_interval,
              std::optional<double> initial_temperature = std::nullopt);

} // namespace pcmwall
