#include "pcmwall/solver.hpp"

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

namespace pcmwall {

namespace {

constexpr double kSecondsPerHour = 3600.0;
constexpr int kMaxStepHalvings = 10;

// Per-cell constitutive data frozen for the duration of one implicit step:
// the hysteresis branch, the carried-over fraction (through the enthalpy
// curve) and the blended conductivity.
struct CellModel {
    double width = 0.0;
    double rho = 0.0;
    double conductivity = 0.0;
    double rho_cp = 0.0; // plain cells only
    std::unique_ptr<EnthalpyCurve> curve; // set for PCM cells
    double u_scale = 1.0; // volumetric enthalpy scale for convergence checks

    double temperature_of(double u) const {
        if (curve) return curve->temperature_extrapolated(u / rho);
        return u / rho_cp;
    }
    double dT_du(double u) const {
        if (curve) return 1.0 / (rho * curve->slope_at_enthalpy(u / rho));
        return 1.0 / rho_cp;
    }
};

std::vector<CellModel> freeze_models(const Grid& grid, const SimulationState& state) {
    std::vector<CellModel> models(grid.cells());
    for (int i = 0; i < grid.cells(); ++i) {
        CellModel& cm = models[i];
        const AnyMaterial& mat = grid.material_of(i);
        cm.width = grid.widths[i];
        cm.rho = material_density(mat);
        if (const auto* pcm = std::get_if<PcmMaterial>(&mat)) {
            cm.curve = std::make_unique<EnthalpyCurve>(*pcm, state.phase[i]);
            cm.conductivity =
                material_conductivity(mat, state.phase[i].liquid_fraction);
            cm.u_scale = cm.rho * pcm->cp_semicrystalline * 10.0;
        } else {
            const auto& plain = std::get<Material>(mat);
            cm.rho_cp = plain.density * plain.specific_heat;
            cm.conductivity = plain.conductivity;
            cm.u_scale = cm.rho_cp * 10.0;
        }
    }
    return models;
}

// Face conductances, W/(m2 K). Index f sits between cells f-1 and f; face 0
// is the heated boundary (ghost half-cell), face n the adiabatic back.
std::vector<double> face_conductances(const Grid& grid, const SolverConfig& config,
                                      const std::vector<CellModel>& models) {
    const int n = grid.cells();
    std::vector<double> g(n + 1, 0.0);
    g[0] = 2.0 * models[0].conductivity / models[0].width;
    for (int f = 1; f < n; ++f) {
        double resistance = 0.5 * models[f - 1].width / models[f - 1].conductivity +
                            0.5 * models[f].width / models[f].conductivity;
        if (grid.layer_of_cell[f - 1] != grid.layer_of_cell[f])
            resistance += config.contact_resistance;
        g[f] = 1.0 / resistance;
    }
    return g;
}

struct NewtonOutcome {
    bool converged = false;
    int worst_cell = 0;
    double worst_residual = 0.0;
};

// Backward-Euler residual solve on volumetric enthalpies. The map T(u) is
// piecewise linear, so Newton lands exactly once every cell settles on its
// final segment; the tridiagonal Jacobian is solved by the Thomas algorithm.
NewtonOutcome newton_solve(const std::vector<CellModel>& models,
                           const std::vector<double>& g, const SolverConfig& config,
                           const std::vector<double>& u_old, double t_bc,
                           double dt_seconds, std::vector<double>& u,
                           std::vector<double>& temp) {
    const int n = static_cast<int>(models.size());
    std::vector<double> residual(n), diag(n), lower(n), upper(n), slope(n), work(n);

    u = u_old;
    NewtonOutcome outcome;
    for (int iter = 0; iter < config.max_newton_iterations; ++iter) {
        for (int i = 0; i < n; ++i) {
            temp[i] = models[i].temperature_of(u[i]);
            slope[i] = models[i].dT_du(u[i]);
        }
        outcome.worst_residual = 0.0;
        outcome.worst_cell = 0;
        for (int i = 0; i < n; ++i) {
            const double mass = models[i].width / dt_seconds;
            const double t_left = i == 0 ? t_bc : temp[i - 1];
            const double flux_in = g[i] * (t_left - temp[i]);
            const double flux_out = i + 1 < n ? g[i + 1] * (temp[i] - temp[i + 1]) : 0.0;
            residual[i] = (u[i] - u_old[i]) * mass - (flux_in - flux_out) -
                          config.volumetric_source * models[i].width;
            if (std::abs(residual[i]) > std::abs(outcome.worst_residual)) {
                outcome.worst_residual = residual[i];
                outcome.worst_cell = i;
            }
            diag[i] = mass + (g[i] + (i + 1 < n ? g[i + 1] : 0.0)) * slope[i];
            lower[i] = i > 0 ? -g[i] * slope[i - 1] : 0.0;
            upper[i] = i + 1 < n ? -g[i + 1] * slope[i + 1] : 0.0;
        }

        // Thomas solve of J * delta = -residual.
        work[0] = upper[0] / diag[0];
        residual[0] = -residual[0] / diag[0];
        for (int i = 1; i < n; ++i) {
            const double denom = diag[i] - lower[i] * work[i - 1];
            work[i] = upper[i] / denom;
            residual[i] = (-residual[i] - lower[i] * residual[i - 1]) / denom;
        }
        for (int i = n - 2; i >= 0; --i) residual[i] -= work[i] * residual[i + 1];

        double max_rel_update = 0.0;
        for (int i = 0; i < n; ++i) {
            u[i] += residual[i];
            const double scale = std::max(std::abs(u[i]), models[i].u_scale);
            max_rel_update = std::max(max_rel_update, std::abs(residual[i]) / scale);
        }
        if (max_rel_update < config.newton_tolerance) {
            for (int i = 0; i < n; ++i) temp[i] = models[i].temperature_of(u[i]);
            outcome.converged = true;
            return outcome;
        }
    }
    return outcome;
}

void advance(const Grid& grid, const SolverConfig& config, const BoundaryCondition& bc,
             SimulationState& state, double dt, double& boundary_heat,
             double& source_heat, int depth) {
    const int n = grid.cells();
    const double dt_seconds = dt * kSecondsPerHour;
    const double t_end = state.time + dt;
    const double t_bc = input_temperature(bc, t_end);

    auto models = freeze_models(grid, state);
    auto g = face_conductances(grid, config, models);

    std::vector<double> u(n), temp(n);
    NewtonOutcome outcome =
        newton_solve(models, g, config, state.enthalpy, t_bc, dt_seconds, u, temp);
    if (!outcome.converged) {
        if (depth >= kMaxStepHalvings)
            throw std::runtime_error(
                "solver: Newton failed to converge at cell " +
                std::to_string(outcome.worst_cell) + " (residual " +
                std::to_string(outcome.worst_residual) + " W/m2) after " +
                std::to_string(kMaxStepHalvings) + " step halvings");
        advance(grid, config, bc, state, 0.5 * dt, boundary_heat, source_heat, depth + 1);
        advance(grid, config, bc, state, 0.5 * dt, boundary_heat, source_heat, depth + 1);
        return;
    }

    boundary_heat += g[0] * (t_bc - temp[0]) * dt_seconds;
    source_heat +=
        config.volumetric_source * grid.stack.total_thickness() * dt_seconds;

    for (int i = 0; i < n; ++i) {
        const double t_before = state.temperature[i];
        state.enthalpy[i] = u[i];
        if (!models[i].curve) {
            state.temperature[i] = temp[i];
            continue;
        }
        const auto& pcm = std::get<PcmMaterial>(grid.material_of(i));
        const double direction = temp[i] - t_before;
        PhaseState next = state.phase[i];
        if (direction > 0)
            next.branch = PhaseBranch::Heating;
        else if (direction < 0)
            next.branch = PhaseBranch::Cooling;
        if (next.branch != state.phase[i].branch) {
            // Branch switch: the cell keeps its enthalpy (nothing was
            // exchanged) and re-reads its temperature off the new branch
            // curve built around the carried fraction.
            EnthalpyCurve switched(pcm, next);
            state.temperature[i] = switched.temperature_extrapolated(u[i] / models[i].rho);
            next.liquid_fraction = switched.effective_fraction(state.temperature[i]);
        } else {
            state.temperature[i] = temp[i];
            next.liquid_fraction = models[i].curve->effective_fraction(temp[i]);
        }
        state.phase[i] = next;
    }
    state.time = t_end;
}

double total_enthalpy(const Grid& grid, const SimulationState& state) {
    double sum = 0.0;
    for (int i = 0; i < grid.cells(); ++i) sum += state.enthalpy[i] * grid.widths[i];
    return sum;
}

// Piecewise-linear sampling of the temperature profile through the face
// value, the cell centers and the back face (zero gradient there, so the
// last cell's value holds to second order).
struct ProfileSampler {
    struct Node {
        int left;      // composite index
        double weight; // toward the right node
    };
    std::vector<double> xs; // 0, centers..., L
    std::vector<Node> nodes;

    ProfileSampler(const Grid& grid, const std::vector<double>& positions) {
        xs.push_back(0.0);
        xs.insert(xs.end(), grid.centers.begin(), grid.centers.end());
        xs.push_back(grid.stack.total_thickness());
        for (double x : positions) {
            Node node{0, 0.0};
            if (x <= xs.front()) {
                node.left = 0;
            } else if (x >= xs.back()) {
                node.left = static_cast<int>(xs.size()) - 1;
            } else {
                int j = 0;
                while (xs[j + 1] < x) ++j;
                node.left = j;
                node.weight = (x - xs[j]) / (xs[j + 1] - xs[j]);
            }
            nodes.push_back(node);
        }
    }

    double value(size_t probe, double face_value, const SimulationState& state) const {
        const Node& node = nodes[probe];
        auto at = [&](int idx) {
            if (idx == 0) return face_value;
            if (idx == static_cast<int>(xs.size()) - 1)
                return state.temperature.back();
            return state.temperature[idx - 1];
        };
        if (node.weight == 0.0) return at(node.left);
        return at(node.left) * (1.0 - node.weight) + at(node.left + 1) * node.weight;
    }
};

} // namespace

void SolverConfig::validate() const {
    if (!std::isfinite(dt) || dt <= 0)
        throw std::invalid_argument("solver: dt must be positive");
    if (!std::isfinite(newton_tolerance) || newton_tolerance <= 0)
        throw std::invalid_argument("solver: newton_tolerance must be positive");
    if (max_newton_iterations < 1)
        throw std::invalid_argument("solver: max_newton_iterations must be at least 1");
    if (cells_per_layer < 0)
        throw std::invalid_argument("solver: cells_per_layer must be at least 1");
    if (cells_per_layer == 0 &&
        (!std::isfinite(target_cell_size) || target_cell_size <= 0))
        throw std::invalid_argument("solver: target_cell_size must be positive");
    if (!std::isfinite(volumetric_source))
        throw std::invalid_argument("solver: volumetric_source must be finite");
    if (!std::isfinite(contact_resistance) || contact_resistance < 0)
        throw std::invalid_argument("solver: contact_resistance must be non-negative");
}

Grid build_grid(const LayerStack& stack, const SolverConfig& config) {
    stack.validate();
    config.validate();

    Grid grid;
    grid.stack = stack;
    grid.edges.push_back(0.0);
    double layer_start = 0.0;
    for (size_t layer = 0; layer < stack.layers.size(); ++layer) {
        const double thickness = stack.layers[layer].thickness;
        const double layer_end = layer_start + thickness;
        const int cells =
            config.cells_per_layer > 0
                ? config.cells_per_layer
                : static_cast<int>(
                      std::max<long long>(1, std::llround(thickness / config.target_cell_size)));
        const double width = thickness / cells;
        for (int j = 0; j < cells; ++j) {
            const double right = j + 1 == cells ? layer_end : layer_start + (j + 1) * width;
            grid.centers.push_back(0.5 * (grid.edges.back() + right));
            grid.widths.push_back(right - grid.edges.back());
            grid.layer_of_cell.push_back(static_cast<int>(layer));
            grid.edges.push_back(right);
        }
        layer_start = layer_end;
    }
    return grid;
}

SimulationState initial_state(const Grid& grid, double temperature) {
    if (!std::isfinite(temperature))
        throw std::invalid_argument("initial temperature must be finite");
    SimulationState state;
    state.time = 0.0;
    state.temperature.assign(grid.cells(), temperature);
    state.phase.assign(grid.cells(), PhaseState{});
    state.enthalpy.resize(grid.cells());
    for (int i = 0; i < grid.cells(); ++i) {
        const AnyMaterial& mat = grid.material_of(i);
        if (const auto* pcm = std::get_if<PcmMaterial>(&mat)) {
            PhaseState ps;
            ps.branch = PhaseBranch::Heating;
            ps.liquid_fraction =
                EnthalpyCurve(*pcm, ps).effective_fraction(temperature);
            state.phase[i] = ps;
            state.enthalpy[i] = pcm->density * enthalpy(*pcm, temperature, ps);
        } else {
            const auto& plain = std::get<Material>(mat);
            state.enthalpy[i] = plain.density * plain.specific_heat * temperature;
        }
    }
    return state;
}

StepResult step(const Grid& grid, const SolverConfig& config, const BoundaryCondition& bc,
                const SimulationState& state, double dt) {
    config.validate();
    validate_boundary(bc);
    if (!std::isfinite(dt) || dt <= 0)
        throw std::invalid_argument("step: dt must be positive");
    if (static_cast<int>(state.enthalpy.size()) != grid.cells() ||
        static_cast<int>(state.temperature.size()) != grid.cells() ||
        static_cast<int>(state.phase.size()) != grid.cells())
        throw std::invalid_argument("step: state size does not match the grid");

    StepResult result;
    result.state = state;
    advance(grid, config, bc, result.state, dt, result.boundary_heat,
            result.source_heat, 0);
    return result;
}

RunResult run(const LayerStack& stack, const BoundaryCondition& bc,
              const ProbeSet& probes, const SolverConfig& config, double duration,
              double output_interval, std::optional<double> initial_temperature) {
    config.validate();
    validate_boundary(bc);
    probes.validate();
    if (!std::isfinite(duration) || duration < 0)
        throw std::invalid_argument("run: duration must be non-negative");
    if (!std::isfinite(output_interval) || output_interval <= 0)
        throw std::invalid_argument("run: output interval must be positive");
    if (duration > 0 && duration < output_interval)
        throw std::invalid_argument("run: duration must cover one output interval");

    RunResult result;
    result.grid = build_grid(stack, config);
    result.probe_fractions = probes.fractions;
    result.probe_positions = probe_locations(stack, probes);

    const double t0_temperature =
        initial_temperature ? *initial_temperature : input_temperature(bc, 0.0);
    SimulationState state = initial_state(result.grid, t0_temperature);
    result.initial_enthalpy = total_enthalpy(result.grid, state);

    if (duration == 0) {
        result.final_state = std::move(state);
        result.final_enthalpy = result.initial_enthalpy;
        result.probes.resize(probes.fractions.size());
        return result;
    }

    ProfileSampler sampler(result.grid, result.probe_positions);
    result.probes.resize(probes.fractions.size());

    auto record = [&](double t) {
        const double face = input_temperature(bc, t);
        result.time.push_back(t);
        result.input.push_back(face);
        for (size_t p = 0; p < result.probes.size(); ++p)
            result.probes[p].push_back(sampler.value(p, face, state));
        const double k0 = material_conductivity(
            result.grid.material_of(0), state.phase[0].liquid_fraction);
        const double g0 = 2.0 * k0 / result.grid.widths[0];
        result.flux.push_back(g0 * (face - state.temperature[0]));
    };

    record(0.0);
    const int n_records =
        static_cast<int>(std::ceil(duration / output_interval - 1e-12));
    for (int r = 1; r <= n_records; ++r) {
        const double target = std::min(r * output_interval, duration);
        const double span = target - state.time;
        const int n_steps =
            std::max(1, static_cast<int>(std::ceil(span / config.dt - 1e-12)));
        const double dt_eff = span / n_steps;
        for (int s = 0; s < n_steps; ++s)
            advance(result.grid, config, bc, state, dt_eff, result.boundary_heat,
                    result.source_heat, 0);
        state.time = target; // pin the record instant against drift
        record(target);
    }

    result.final_enthalpy = total_enthalpy(result.grid, state);
    result.final_state = std::move(state);
    return result;
}

} // namespace pcmwall
