#include "pcmwall/oracles.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "pcmwall/solver.hpp"

namespace pcmwall {

namespace {

constexpr double kSecondsPerHour = 3600.0;

using Mat2 = std::array<std::complex<double>, 4>; // row-major m11 m12 m21 m22

Mat2 multiply(const Mat2& a, const Mat2& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

} // namespace

PeriodicSlabSolution::PeriodicSlabSolution(const LayerStack& stack, double period)
    : period_(period) {
    stack.validate();
    if (!std::isfinite(period) || period <= 0)
        throw std::invalid_argument("periodic slab: period must be positive");
    omega_ = 2.0 * M_PI / (period * kSecondsPerHour);

    for (const auto& layer : stack.layers) {
        if (is_pcm(layer.material))
            throw std::invalid_argument(
                "periodic slab: closed form requires linear materials, layer '" +
                material_name(layer.material) + "' is a PCM");
        const auto& m = std::get<Material>(layer.material);
        const double alpha = m.conductivity / (m.density * m.specific_heat);
        LayerWave lw;
        lw.thickness = layer.thickness;
        lw.conductivity = m.conductivity;
        lw.sigma = std::sqrt(std::complex<double>(0.0, omega_ / alpha));
        layers_.push_back(lw);
    }

    m11_total_ = m11_from(0.0);
}

std::array<std::complex<double>, 4> PeriodicSlabSolution::layer_matrix(
    const LayerWave& lw, double thickness) {
    const std::complex<double> sl = lw.sigma * thickness;
    const std::complex<double> ch = std::cosh(sl);
    const std::complex<double> sh = std::sinh(sl);
    const std::complex<double> ks = lw.conductivity * lw.sigma;
    return {ch, sh / ks, ks * sh, ch};
}

// m11 of the transfer matrix from depth x to the back face; with the back
// adiabatic this is the temperature-amplitude ratio theta(x) / theta(back).
std::complex<double> PeriodicSlabSolution::m11_from(double x) const {
    Mat2 total{1.0, 0.0, 0.0, 1.0};
    double layer_start = 0.0;
    for (const auto& lw : layers_) {
        const double layer_end = layer_start + lw.thickness;
        if (layer_end > x) {
            const double covered = std::max(x, layer_start);
            total = multiply(total, layer_matrix(lw, layer_end - covered));
        }
        layer_start = layer_end;
    }
    return total[0];
}

double PeriodicSlabSolution::decrement_factor() const { return 1.0 / std::abs(m11_total_); }

double PeriodicSlabSolution::time_lag() const {
    double arg = std::arg(m11_total_);
    if (arg < 0) arg += 2.0 * M_PI;
    return arg / omega_ / kSecondsPerHour;
}

std::complex<double> PeriodicSlabSolution::ratio_at(double x) const {
    const double total = [&] {
        double sum = 0.0;
        for (const auto& lw : layers_) sum += lw.thickness;
        return sum;
    }();
    if (!std::isfinite(x) || x < 0 || x > total)
        throw std::invalid_argument("periodic slab: depth outside the stack");
    return m11_from(x) / m11_total_;
}

double PeriodicSlabSolution::amplitude_at(double x) const { return std::abs(ratio_at(x)); }

double PeriodicSlabSolution::phase_lag_at(double x) const {
    double arg = -std::arg(ratio_at(x));
    if (arg < 0) arg += 2.0 * M_PI;
    return arg;
}

PeriodicSlabSolution periodic_slab(const LayerStack& stack, double period) {
    return PeriodicSlabSolution(stack, period);
}

double stefan_lambda(double stefan_number) {
    if (!std::isfinite(stefan_number) || stefan_number <= 0)
        throw std::invalid_argument("stefan_lambda: Stefan number must be positive");
    const double rhs = stefan_number / std::sqrt(M_PI);
    auto g = [&](double lam) {
        return lam * std::exp(lam * lam) * std::erf(lam) - rhs;
    };
    double lo = 0.0;
    double hi = 1.0;
    while (g(hi) < 0) {
        hi *= 2.0;
        if (hi > 64.0)
            throw std::invalid_argument("stefan_lambda: Stefan number too large");
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (g(mid) < 0)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

double stefan_front(double lambda, double alpha, double t_seconds) {
    if (!std::isfinite(lambda) || lambda <= 0)
        throw std::invalid_argument("stefan_front: lambda must be positive");
    if (!std::isfinite(alpha) || alpha <= 0)
        throw std::invalid_argument("stefan_front: diffusivity must be positive");
    if (!std::isfinite(t_seconds) || t_seconds < 0)
        throw std::invalid_argument("stefan_front: time must be non-negative");
    return 2.0 * lambda * std::sqrt(alpha * t_seconds);
}

namespace {

// Shared fixtures for the refinement studies.

double smooth_functional(int cells_per_layer, double dt) {
    LayerStack stack = make_stack({{material_preset("brick"), 0.05}});
    SinusoidalBc bc{32.5, 17.5, 24.0, -M_PI / 2.0};
    SolverConfig cfg;
    cfg.cells_per_layer = cells_per_layer;
    cfg.dt = dt;
    ProbeSet probes{{1.0}};
    // Mid-transient back-face temperature; the start-up phase carries the
    // steepest gradients and exposes the truncation errors of both axes.
    RunResult r = run(stack, bc, probes, cfg, 6.0, 6.0);
    return r.probes[0].back();
}

struct StefanFixture {
    PcmMaterial material;
    double wall_temperature = 88.0;
    double initial_temperature;
    double alpha;
    double lambda;
    double domain = 0.08;      // m
    double target_front;       // m, mid-domain
    double time_hours;         // instant the exact front reaches the target

    StefanFixture() {
        material = std::get<PcmMaterial>(material_preset("pux-1500-20"));
        material.name = "pux-sharp";
        material.transition_half_width = 0.05;
        material.cp_amorphous = material.cp_semicrystalline;
        material.latent_heat_crystallization = material.latent_heat_fusion;
        initial_temperature = material.t_fusion - material.transition_half_width;
        alpha = material.conductivity_semicrystalline /
                (material.density * material.cp_semicrystalline);
        const double stefan_number = material.cp_semicrystalline *
                                     (wall_temperature - material.t_fusion) /
                                     material.latent_heat_fusion;
        lambda = stefan_lambda(stefan_number);
        target_front = 0.5 * domain;
        const double t_seconds = std::pow(target_front / (2.0 * lambda), 2) / alpha;
        time_hours = t_seconds / kSecondsPerHour;
    }

    RunResult solve(double cell_size, double dt) const {
        LayerStack stack = make_stack({{material, domain}});
        ConstantTemperatureBc bc{wall_temperature, 2.0 * time_hours, wall_temperature};
        SolverConfig cfg;
        cfg.target_cell_size = cell_size;
        cfg.dt = dt;
        ProbeSet probes{{1.0}};
        return run(stack, bc, probes, cfg, time_hours, time_hours, initial_temperature);
    }
};

// Melting front as the half-liquid isoline, interpolated linearly between
// cell centers.
double extract_front(const RunResult& r) {
    const auto& phase = r.final_state.phase;
    const auto& centers = r.grid.centers;
    for (size_t i = 0; i + 1 < phase.size(); ++i) {
        const double f0 = phase[i].liquid_fraction;
        const double f1 = phase[i + 1].liquid_fraction;
        if (f0 >= 0.5 && f1 < 0.5) {
            return centers[i] +
                   (f0 - 0.5) / (f0 - f1) * (centers[i + 1] - centers[i]);
        }
    }
    throw std::runtime_error("stefan study: melting front not inside the domain");
}

// Order estimate from the last pair of successive differences, plus a
// monotonicity verdict across the whole sequence.
void estimate_order(const std::vector<double>& diffs, double& order, bool& monotone) {
    monotone = true;
    for (size_t i = 1; i < diffs.size(); ++i)
        if (diffs[i] >= diffs[i - 1]) monotone = false;
    const size_t n = diffs.size();
    order = (n >= 2 && diffs[n - 1] > 0) ? std::log2(diffs[n - 2] / diffs[n - 1]) : 0.0;
}

} // namespace

ConvergenceStudy convergence_study(StudyProblem problem, int levels) {
    if (levels < 3)
        throw std::invalid_argument("convergence_study: at least 3 levels required");

    ConvergenceStudy study;
    study.problem = problem;
    study.levels = levels;

    if (problem == StudyProblem::SmoothPeriodic) {
        // Space: nested grids under a fixed small time step. The unchanged
        // temporal error cancels in the successive differences.
        std::vector<double> f_space;
        for (int j = 0; j < levels; ++j)
            f_space.push_back(smooth_functional(16 << j, 0.005));
        for (int j = 0; j + 1 < levels; ++j)
            study.spatial_diffs.push_back(std::abs(f_space[j] - f_space[j + 1]));

        // Time: halved steps on one fine grid.
        std::vector<double> f_time;
        for (int j = 0; j < levels; ++j)
            f_time.push_back(smooth_functional(128, 0.1 / (1 << j)));
        for (int j = 0; j + 1 < levels; ++j)
            study.temporal_diffs.push_back(std::abs(f_time[j] - f_time[j + 1]));

        bool mono_space = false, mono_time = false;
        estimate_order(study.spatial_diffs, study.spatial_order, mono_space);
        estimate_order(study.temporal_diffs, study.temporal_order, mono_time);
        study.monotone = mono_space && mono_time;
        study.failed = !study.monotone;
        return study;
    }

    StefanFixture fixture;
    for (int j = 0; j < levels; ++j) {
        const double cell = 1.6e-3 / (1 << j);
        const double dt = 16.0 / (1 << j) / kSecondsPerHour;
        RunResult r = fixture.solve(cell, dt);
        const double exact = stefan_front(fixture.lambda, fixture.alpha,
                                          r.final_state.time * kSecondsPerHour);
        study.front_errors.push_back(std::abs(extract_front(r) - exact));
    }
    estimate_order(study.front_errors, study.front_order, study.monotone);
    study.failed = !study.monotone;
    return study;
}

} // namespace pcmwall
