#include "pcmwall/verify.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "pcmwall/config.hpp"
#include "pcmwall/metrics.hpp"
#include "pcmwall/oracles.hpp"
#include "pcmwall/runner.hpp"

namespace pcmwall {

namespace {

std::string num(double v) {
    char buffer[48];
    std::snprintf(buffer, sizeof buffer, "%.6g", v);
    return buffer;
}

// Collects requirements and their outcomes into one detail line.
struct Gate {
    bool ok = true;
    std::ostringstream detail;
    bool first = true;

    void note(const std::string& text) {
        if (!first) detail << "; ";
        first = false;
        detail << text;
    }
    void require(bool condition, const std::string& text) {
        if (!condition) ok = false;
        note(text + (condition ? " [ok]" : " [FAIL]"));
    }
};

// ---------------------------------------------------------------------------
// Shared fixtures

constexpr double kPi = 3.14159265358979323846;

SinusoidalBc reference_sinusoid() { return SinusoidalBc{32.5, 17.5, 24.0, -kPi / 2.0}; }

// Calibration of the wall section: the skins and the brick budget are fixed,
// the cavity share of the 50 mm brick core is tuned so the air-filled wall
// best matches the reference response (f = 0.39, lag = 4.5 h), then the PCM
// wall reuses the winning geometry.
struct Calibration {
    double cavity = 0.0; // m
    MetricsReport air;
    MetricsReport pcm;
    RunResult pcm_cycle_one; // same wall, one 24 h cycle
};

constexpr double kBrickBudget = 0.050;   // m, 2*shell + cavity
constexpr double kSkin = 0.005;          // m
constexpr double kCavityMin = 0.010;     // m
constexpr double kCavityMax = 0.040;     // m
constexpr double kCavityStep = 0.001;    // m
constexpr double kTargetF = 0.39;
constexpr double kTargetLag = 4.5;       // h
// The wall starts uniform at the overnight minimum, so the first half
// period only records spin-up; metrics are read from the crest-to-second-rise
// window that the reference numbers correspond to (first crest, first
// trough).
constexpr double kWindowLo = 12.0;       // h
constexpr double kWindowHi = 30.0;       // h

ScenarioConfig calibration_scenario(double cavity, const std::string& fill) {
    ScenarioConfig config;
    HollowBrickSpec geometry;
    geometry.shell = 0.5 * (kBrickBudget - cavity);
    geometry.cavity = cavity;
    geometry.skin = kSkin;
    geometry.fill = fill;
    config.stack = geometry;
    config.materials.emplace(fill, material_preset(fill));
    config.materials.emplace("brick", material_preset("brick"));
    config.materials.emplace("cement", material_preset("cement"));
    config.boundary = reference_sinusoid();
    config.solver.dt = 1.0 / 60.0;
    config.solver.target_cell_size = 5e-4;
    config.duration = 30.0;
    config.output_interval = 0.05;
    config.metrics_window = {{kWindowLo, kWindowHi}};
    config.metrics_period = 24.0;
    return config;
}

const Calibration& calibrate(std::optional<Calibration>& cache) {
    if (cache) return *cache;

    Calibration result;
    double best_objective = 0.0;
    bool have_best = false;
    for (double cavity = kCavityMin; cavity <= kCavityMax + 1e-12;
         cavity += kCavityStep) {
        const SimulationArtifacts air =
            simulate_scenario(calibration_scenario(cavity, "air"));
        const double df = (air.metrics.decrement_factor - kTargetF) / kTargetF;
        const double dl = (air.metrics.time_lag - kTargetLag) / kTargetLag;
        const double objective = df * df + dl * dl;
        if (!have_best || objective < best_objective) {
            have_best = true;
            best_objective = objective;
            result.cavity = cavity;
            result.air = air.metrics;
        }
    }

    const SimulationArtifacts pcm =
        simulate_scenario(calibration_scenario(result.cavity, "pux-1500-20"));
    result.pcm = pcm.metrics;

    ScenarioConfig cycle_one = calibration_scenario(result.cavity, "pux-1500-20");
    cycle_one.duration = 24.0;
    cycle_one.metrics_window = {{0.0, 24.0}};
    result.pcm_cycle_one = simulate_scenario(cycle_one).result;

    cache = std::move(result);
    return *cache;
}

// ---------------------------------------------------------------------------
// Individual checks

CheckResult check_sinusoid_fidelity() {
    Gate gate;
    const SinusoidalBc bc = reference_sinusoid();
    const double times[] = {0.0, 6.0, 12.0, 18.0, 24.0};
    const double expected[] = {15.0, 32.5, 50.0, 32.5, 15.0};
    double worst = 0.0;
    for (int i = 0; i < 5; ++i)
        worst = std::max(worst,
                         std::abs(input_temperature(bc, times[i]) - expected[i]));
    gate.require(worst <= 1e-9,
                 "max deviation at the quarter points " + num(worst) + " K <= 1e-9");
    return {"", "", gate.ok, gate.detail.str()};
}

CheckResult check_periodic_oracle(double perturbation) {
    Gate gate;

    // The analytic side sees the nominal brick; the numeric side may be
    // deliberately perturbed to prove this comparison has teeth.
    const AnyMaterial nominal = material_preset("brick");
    AnyMaterial perturbed = nominal;
    std::get<Material>(perturbed).conductivity *= 1.0 + perturbation;

    const double thickness = 0.05;
    const double period = 24.0;
    const PeriodicSlabSolution oracle(make_stack({{nominal, thickness}}), period);

    LayerStack stack = make_stack({{perturbed, thickness}});
    SolverConfig cfg;
    cfg.target_cell_size = 1e-4;      // 0.1 mm
    cfg.dt = 10.0 / 3600.0;           // 10 s
    ProbeSet probes{{1.0}};
    const double duration = 10.0 * period;
    RunResult r = run(stack, reference_sinusoid(), probes, cfg, duration, 0.05);
    const MetricsReport m =
        compute_metrics(r, duration - period, duration, period);

    const double f_err =
        std::abs(m.decrement_factor - oracle.decrement_factor()) /
        oracle.decrement_factor();
    const double lag_err =
        std::abs(m.time_lag - oracle.time_lag()) / oracle.time_lag();
    gate.note("closed form f=" + num(oracle.decrement_factor()) +
              " lag=" + num(oracle.time_lag()) + " h; numeric f=" +
              num(m.decrement_factor) + " lag=" + num(m.time_lag) + " h");
    gate.require(f_err <= 5e-3, "decrement factor off by " + num(f_err) + " <= 0.5%");
    gate.require(lag_err <= 5e-3, "time lag off by " + num(lag_err) + " <= 0.5%");
    return {"", "", gate.ok, gate.detail.str()};
}

CheckResult check_stefan_front() {
    Gate gate;
    const ConvergenceStudy study = convergence_study(StudyProblem::StefanFront, 3);
    const double target = 0.04; // m, mid-domain
    const double finest_rel = study.front_errors.back() / target;
    gate.note("front errors " + num(study.front_errors[0]) + " / " +
              num(study.front_errors[1]) + " / " + num(study.front_errors[2]) + " m");
    gate.require(finest_rel <= 0.01,
                 "finest front error " + num(100.0 * finest_rel) + "% <= 1%");
    gate.require(study.monotone, "errors shrink under refinement");
    gate.require(study.front_order > 0.0,
                 "observed order " + num(study.front_order) + " > 0");
    return {"", "", gate.ok, gate.detail.str()};
}

CheckResult check_energy_conservation(const std::string& presets_dir) {
    Gate gate;
    const std::vector<std::string> ids = available_presets(presets_dir);
    if (ids.empty()) {
        gate.require(false, "no presets found in " + presets_dir);
        return {"", "", gate.ok, gate.detail.str()};
    }
    double worst = 0.0;
    std::string worst_id;
    for (const std::string& id : ids) {
        const ScenarioConfig config = load_scenario_file(
            resolve_scenario_reference(id, presets_dir));
        const SimulationArtifacts artifacts = simulate_scenario(config);
        if (artifacts.metrics.energy_residual >= worst) {
            worst = artifacts.metrics.energy_residual;
            worst_id = id;
        }
    }
    gate.require(worst < 1e-4, "worst residual " + num(worst) + " (" + worst_id +
                                   ") over " + std::to_string(ids.size()) +
                                   " presets < 1e-4");
    return {"", "", gate.ok, gate.detail.str()};
}

CheckResult check_calibrated_metrics(std::optional<Calibration>& cache) {
    Gate gate;
    const Calibration& cal = calibrate(cache);
    gate.note("calibrated cavity " + num(1e3 * cal.cavity) + " mm");
    gate.note("air f=" + num(cal.air.decrement_factor) + " lag=" +
              num(cal.air.time_lag) + " h; pcm f=" + num(cal.pcm.decrement_factor) +
              " lag=" + num(cal.pcm.time_lag) + " h peak=" +
              num(cal.pcm.output.max_value) + " C");
    gate.require(cal.air.decrement_factor >= 0.36 && cal.air.decrement_factor <= 0.42,
                 "air f in [0.36, 0.42]");
    gate.require(cal.air.time_lag >= 3.5 && cal.air.time_lag <= 5.5,
                 "air lag in [3.5, 5.5] h");
    gate.require(cal.pcm.time_lag >= 5.5 && cal.pcm.time_lag <= 8.5,
                 "pcm lag in [5.5, 8.5] h");
    gate.require(cal.pcm.time_lag - cal.air.time_lag >= 1.5,
                 "lag gain " + num(cal.pcm.time_lag - cal.air.time_lag) + " h >= 1.5");
    gate.require(cal.pcm.output.max_value <= 38.5,
                 "pcm output peak <= 38.5 C");
    gate.require(cal.pcm.decrement_factor <= cal.air.decrement_factor,
                 "pcm f <= air f");
    return {"", "", gate.ok, gate.detail.str()};
}

CheckResult check_incomplete_crystallization(std::optional<Calibration>& cache) {
    Gate gate;
    const Calibration& cal = calibrate(cache);
    const RunResult& r = cal.pcm_cycle_one;
    int pcm_cells = 0, amorphous_cells = 0;
    double max_fraction = 0.0;
    for (int i = 0; i < r.grid.cells(); ++i) {
        if (!is_pcm(r.grid.material_of(i))) continue;
        ++pcm_cells;
        const double fraction = r.final_state.phase[i].liquid_fraction;
        if (fraction > 0.0) ++amorphous_cells;
        max_fraction = std::max(max_fraction, fraction);
    }
    gate.note(std::to_string(amorphous_cells) + " of " + std::to_string(pcm_cells) +
              " PCM cells still partly amorphous at t=24 h, max fraction " +
              num(max_fraction));
    gate.require(amorphous_cells > 0, "some amorphous fraction survives cycle one");
    return {"", "", gate.ok, gate.detail.str()};
}

// Heating-rate plateau scan: the rate minimum among samples whose
// temperature lies in [lo, hi] must sit well below the rates seen both
// before and after it (factor 1.5), i.e. the trace slows down and then
// recovers. A monotonically decaying approach to equilibrium never recovers
// and is reported as plateau-free.
struct PlateauScan {
    bool crossed = false;
    bool plateau = false;
    double min_rate = 0.0;   // K/h
    double at_temperature = 0.0;
};

PlateauScan scan_plateau(const std::vector<double>& time,
                         const std::vector<double>& temp, double lo, double hi) {
    PlateauScan scan;
    const size_t n = time.size();
    if (n < 3) return scan;
    std::vector<double> rate(n);
    for (size_t i = 1; i + 1 < n; ++i)
        rate[i] = (temp[i + 1] - temp[i - 1]) / (time[i + 1] - time[i - 1]);
    rate[0] = rate[1];
    rate[n - 1] = rate[n - 2];

    bool reached_lo = false, reached_hi = false;
    size_t arg_min = n;
    for (size_t i = 0; i < n; ++i) {
        if (temp[i] >= lo) reached_lo = true;
        if (temp[i] >= hi) reached_hi = true;
        if (temp[i] < lo || temp[i] > hi) continue;
        if (arg_min == n || rate[i] < rate[arg_min]) arg_min = i;
    }
    scan.crossed = reached_lo && reached_hi;
    if (arg_min == n) return scan;
    scan.min_rate = rate[arg_min];
    scan.at_temperature = temp[arg_min];

    double before = 0.0, after = 0.0;
    for (size_t i = 0; i < arg_min; ++i) before = std::max(before, rate[i]);
    for (size_t i = arg_min + 1; i < n; ++i) after = std::max(after, rate[i]);
    scan.plateau = scan.crossed && before >= 1.5 * scan.min_rate &&
                   after >= 1.5 * scan.min_rate;
    return scan;
}

CheckResult check_hotplate_plateau(const std::string& presets_dir) {
    Gate gate;
    auto mid_series = [&](const std::string& id, PlateauScan& scan) {
        const ScenarioConfig config =
            load_scenario_file(resolve_scenario_reference(id, presets_dir));
        const SimulationArtifacts artifacts = simulate_scenario(config);
        const RunResult& r = artifacts.result;
        size_t mid = 0;
        double best = 2.0;
        for (size_t i = 0; i < r.probe_fractions.size(); ++i) {
            const double d = std::abs(r.probe_fractions[i] - 0.5);
            if (d < best) {
                best = d;
                mid = i;
            }
        }
        scan = scan_plateau(r.time, r.probes[mid], 33.0, 39.0);
    };

    PlateauScan pcm, air;
    mid_series("paper-hotplate-80c", pcm);
    mid_series("paper-hotplate-80c-air", air);
    gate.note("pcm min rate " + num(pcm.min_rate) + " K/h at " +
              num(pcm.at_temperature) + " C; air min rate " + num(air.min_rate) +
              " K/h");
    gate.require(pcm.crossed && air.crossed,
                 "mid-depth probes traverse the 33-39 C band");
    gate.require(pcm.plateau, "PCM fill slows and recovers inside the band");
    gate.require(!air.plateau, "air fill shows no such plateau");
    return {"", "", gate.ok, gate.detail.str()};
}

CheckResult check_determinism_roundtrip(const std::string& presets_dir) {
    Gate gate;
    const std::vector<std::string> ids = available_presets(presets_dir);
    if (ids.empty()) {
        gate.require(false, "no presets found in " + presets_dir);
        return {"", "", gate.ok, gate.detail.str()};
    }
    bool bitwise = true, fixed_point = true;
    for (const std::string& id : ids) {
        const std::string path = resolve_scenario_reference(id, presets_dir);
        const std::string text = read_text_file(path);
        const std::string once = serialize_scenario(parse_scenario(text));
        const std::string twice = serialize_scenario(parse_scenario(once));
        if (once != twice) fixed_point = false;

        const ScenarioConfig config = parse_scenario(text);
        const SimulationArtifacts a = simulate_scenario(config);
        const SimulationArtifacts b = simulate_scenario(config);
        if (a.table_csv != b.table_csv || a.summary_text != b.summary_text)
            bitwise = false;
    }
    gate.require(bitwise, "repeated runs byte-identical across " +
                              std::to_string(ids.size()) + " presets");
    gate.require(fixed_point, "parse/serialize is a fixed point");
    return {"", "", gate.ok, gate.detail.str()};
}

CheckResult check_convergence_orders() {
    Gate gate;
    const ConvergenceStudy study =
        convergence_study(StudyProblem::SmoothPeriodic, 3);
    gate.require(study.spatial_order >= 1.8 && study.spatial_order <= 2.2,
                 "spatial order " + num(study.spatial_order) + " in 2.0 +/- 0.2");
    gate.require(study.temporal_order >= 0.8 && study.temporal_order <= 1.2,
                 "temporal order " + num(study.temporal_order) + " in 1.0 +/- 0.2");
    gate.require(study.monotone && !study.failed, "differences shrink monotonically");
    return {"", "", gate.ok, gate.detail.str()};
}

const std::vector<CheckInfo>& check_list() {
    static const std::vector<CheckInfo> checks = {
        {"sinusoid-fidelity",
         "driving sinusoid hits 15 / 32.5 / 50 C at the quarter points"},
        {"periodic-oracle",
         "homogeneous slab response matches the transfer-matrix closed form to 0.5%"},
        {"stefan-front",
         "sharp-transition melt front tracks the similarity solution to 1% at mid-domain"},
        {"energy-conservation",
         "every preset run closes its heat balance below 1e-4 relative"},
        {"calibrated-metrics",
         "calibrated wall lands in the reference decrement-factor and time-lag bands"},
        {"incomplete-crystallization",
         "PCM wall ends cycle one with amorphous material left"},
        {"hotplate-plateau",
         "80 C drive shows a mid-depth heating plateau with PCM fill and none with air"},
        {"determinism-roundtrip",
         "repeated runs are byte-identical and configs round-trip"},
        {"convergence-orders",
         "smooth problem converges at second order in space, first order in time"},
    };
    return checks;
}

} // namespace

std::vector<CheckInfo> verify_checks() { return check_list(); }

std::vector<CheckResult> run_verification(const VerifyOptions& options) {
    const std::string presets_dir =
        options.presets_dir.empty() ? default_presets_dir() : options.presets_dir;

    std::optional<Calibration> calibration;
    std::vector<std::pair<std::string, std::function<CheckResult()>>> runners = {
        {"sinusoid-fidelity", [&] { return check_sinusoid_fidelity(); }},
        {"periodic-oracle",
         [&] { return check_periodic_oracle(options.oracle_perturbation); }},
        {"stefan-front", [&] { return check_stefan_front(); }},
        {"energy-conservation", [&] { return check_energy_conservation(presets_dir); }},
        {"calibrated-metrics", [&] { return check_calibrated_metrics(calibration); }},
        {"incomplete-crystallization",
         [&] { return check_incomplete_crystallization(calibration); }},
        {"hotplate-plateau", [&] { return check_hotplate_plateau(presets_dir); }},
        {"determinism-roundtrip",
         [&] { return check_determinism_roundtrip(presets_dir); }},
        {"convergence-orders", [&] { return check_convergence_orders(); }},
    };

    bool matched = false;
    std::vector<CheckResult> results;
    for (size_t i = 0; i < runners.size(); ++i) {
        const CheckInfo& info = check_list()[i];
        if (!options.only.empty() && options.only != info.id) continue;
        matched = true;
        CheckResult result;
        try {
            result = runners[i].second();
        } catch (const std::exception& e) {
            result.passed = false;
            result.detail = std::string("exception: ") + e.what();
        }
        result.id = info.id;
        result.description = info.description;
        results.push_back(std::move(result));
    }
    if (!options.only.empty() && !matched)
        throw std::invalid_argument("verify: no check named '" + options.only + "'");
    return results;
}

} // namespace pcmwall
