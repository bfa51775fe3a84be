#pragma once

#include <vector>

#include "pcmwall/solver.hpp"

namespace pcmwall {

struct ExtremumInfo {
    double max_value = 0.0;
    double max_time = 0.0; // h
    double min_value = 0.0;
    double min_time = 0.0;
};

// Extrema of a regularly sampled series restricted to [window_lo, window_hi]
// hours. Peak instants are sharpened with a three-point parabolic fit when
// the extremum is interior to the window; exact ties keep the earliest
// sample. A window containing no samples is an error.
ExtremumInfo extrema(const std::vector<double>& time, const std::vector<double>& value,
                     double window_lo, double window_hi);

// Output peak-to-peak amplitude over input peak-to-peak amplitude. A zero
// input amplitude is an error.
double decrement_factor(const ExtremumInfo& input, const ExtremumInfo& output);

// Positive delay of the output peak behind the input peak, folded into
// [0, period) hours.
double time_lag(double input_peak_time, double output_peak_time, double period);

// Relative closure of the heat balance: |boundary heat + source heat -
// enthalpy change| / max(|enthalpy change|, 1 J/m2).
double energy_audit(const RunResult& result);

// True when every probe's final full period matches the one before it within
// tolerance (K), sampled on the last period and compared against the
// previous one by linear interpolation. The run must span two periods.
bool cycle_convergence(const RunResult& result, double period, double tolerance);

struct MetricsReport {
    double window_lo = 0.0; // h
    double window_hi = 0.0;
    double period = 0.0;

    ExtremumInfo input;
    ExtremumInfo output; // last probe, the output face in the standard sets

    double decrement_factor = 0.0;
    double time_lag = 0.0; // h
    double energy_residual = 0.0;

    bool cycle_checked = false; // run long enough to compare two periods
    bool cycle_converged = false;

    // Latent storage available per wall area, J/m2; zero without PCM.
    double latent_capacity = 0.0;
};

MetricsReport compute_metrics(const RunResult& result, double window_lo,
                              double window_hi, double period,
                              double cycle_tolerance = 0.01);

} // namespace pcmwall
