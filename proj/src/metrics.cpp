#include "pcmwall/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pcmwall {

namespace {

// Parabolic vertex through three uniformly spaced samples around an interior
// extremum. Returns false when the points are collinear (a flat tie, where
// the earliest discrete sample stands).
bool refine_peak(double t_mid, double dt, double v_prev, double v_mid, double v_next,
                 double& t_out, double& v_out) {
    const double curvature = v_prev - 2.0 * v_mid + v_next;
    if (curvature == 0.0) return false;
    double offset = 0.5 * (v_prev - v_next) / curvature;
    offset = std::clamp(offset, -0.5, 0.5);
    t_out = t_mid + offset * dt;
    v_out = v_mid - 0.25 * (v_prev - v_next) * offset;
    return true;
}

double interpolate(const std::vector<double>& time, const std::vector<double>& value,
                   double t) {
    auto it = std::lower_bound(time.begin(), time.end(), t);
    if (it == time.end()) return value.back();
    size_t j = static_cast<size_t>(it - time.begin());
    if (time[j] == t || j == 0) return value[j];
    const double w = (t - time[j - 1]) / (time[j] - time[j - 1]);
    return value[j - 1] * (1.0 - w) + value[j] * w;
}

} // namespace

ExtremumInfo extrema(const std::vector<double>& time, const std::vector<double>& value,
                     double window_lo, double window_hi) {
    if (time.size() != value.size())
        throw std::invalid_argument("extrema: time and value sizes differ");
    if (time.empty()) throw std::invalid_argument("extrema: empty series");
    if (!std::isfinite(window_lo) || !std::isfinite(window_hi) || window_lo > window_hi)
        throw std::invalid_argument("extrema: invalid window");

    size_t first = time.size(), last = 0;
    for (size_t i = 0; i < time.size(); ++i) {
        if (time[i] >= window_lo && time[i] <= window_hi) {
            first = std::min(first, i);
            last = i;
        }
    }
    if (first == time.size())
        throw std::invalid_argument("extrema: window contains no samples");

    size_t max_i = first, min_i = first;
    for (size_t i = first; i <= last; ++i) {
        if (value[i] > value[max_i]) max_i = i;
        if (value[i] < value[min_i]) min_i = i;
    }

    ExtremumInfo info;
    info.max_value = value[max_i];
    info.max_time = time[max_i];
    info.min_value = value[min_i];
    info.min_time = time[min_i];

    if (max_i > first && max_i < last) {
        const double dt = time[max_i + 1] - time[max_i];
        refine_peak(time[max_i], dt, value[max_i - 1], value[max_i], value[max_i + 1],
                    info.max_time, info.max_value);
    }
    if (min_i > first && min_i < last) {
        const double dt = time[min_i + 1] - time[min_i];
        double t_ref, v_ref;
        if (refine_peak(time[min_i], dt, -value[min_i - 1], -value[min_i],
                        -value[min_i + 1], t_ref, v_ref)) {
            info.min_time = t_ref;
            info.min_value = -v_ref;
        }
    }
    return info;
}

double decrement_factor(const ExtremumInfo& input, const ExtremumInfo& output) {
    const double input_amplitude = input.max_value - input.min_value;
    if (input_amplitude <= 0.0)
        throw std::invalid_argument("decrement_factor: input amplitude must be positive");
    return (output.max_value - output.min_value) / input_amplitude;
}

double time_lag(double input_peak_time, double output_peak_time, double period) {
    if (!std::isfinite(period) || period <= 0)
        throw std::invalid_argument("time_lag: period must be positive");
    double lag = std::fmod(output_peak_time - input_peak_time, period);
    if (lag < 0) lag += period;
    return lag;
}

double energy_audit(const RunResult& result) {
    const double stored = result.final_enthalpy - result.initial_enthalpy;
    const double supplied = result.boundary_heat + result.source_heat;
    return std::abs(supplied - stored) / std::max(std::abs(stored), 1.0);
}

bool cycle_convergence(const RunResult& result, double period, double tolerance) {
    if (!std::isfinite(period) || period <= 0)
        throw std::invalid_argument("cycle_convergence: period must be positive");
    if (!std::isfinite(tolerance) || tolerance <= 0)
        throw std::invalid_argument("cycle_convergence: tolerance must be positive");
    if (result.time.empty() || result.time.back() < 2.0 * period)
        throw std::invalid_argument("cycle_convergence: run must span two periods");

    const double t_end = result.time.back();
    for (const auto& series : result.probes) {
        for (size_t i = 0; i < result.time.size(); ++i) {
            const double t = result.time[i];
            if (t <= t_end - period) continue;
            const double previous = interpolate(result.time, series, t - period);
            if (std::abs(series[i] - previous) > tolerance) return false;
        }
    }
    return true;
}

MetricsReport compute_metrics(const RunResult& result, double window_lo,
                              double window_hi, double period, double cycle_tolerance) {
    if (result.probes.empty() || result.time.empty())
        throw std::invalid_argument("compute_metrics: run holds no recorded series");

    MetricsReport report;
    report.window_lo = window_lo;
    report.window_hi = window_hi;
    report.period = period;
    report.input = extrema(result.time, result.input, window_lo, window_hi);
    report.output = extrema(result.time, result.probes.back(), window_lo, window_hi);
    // A flat drive (constant-temperature scenarios) has no amplitude to
    // compare against; the periodic metrics are reported as zero.
    if (report.input.max_value > report.input.min_value) {
        report.decrement_factor = decrement_factor(report.input, report.output);
        report.time_lag =
            time_lag(report.input.max_time, report.output.max_time, period);
    }
    report.energy_residual = energy_audit(result);

    report.cycle_checked = result.time.back() >= 2.0 * period;
    report.cycle_converged =
        report.cycle_checked ? cycle_convergence(result, period, cycle_tolerance) : false;

    for (int i = 0; i < result.grid.cells(); ++i) {
        if (const auto* pcm = std::get_if<PcmMaterial>(&result.grid.material_of(i)))
            report.latent_capacity +=
                pcm->density * pcm->latent_heat_fusion * result.grid.widths[i];
    }
    return report;
}

} // namespace pcmwall
