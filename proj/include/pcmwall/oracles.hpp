#pragma once

#include <array>
#include <complex>
#include <vector>

#include "pcmwall/assembly.hpp"

namespace pcmwall {

// Closed-form periodic response of a linear (no phase change) layer stack to
// a surface temperature oscillating at the given period, with the output
// face adiabatic. Built from per-layer 2x2 transfer matrices in the complex
// amplitude domain.
class PeriodicSlabSolution {
  public:
    PeriodicSlabSolution(const LayerStack& stack, double period);

    double period() const { return period_; }
    // Output-face amplitude over input amplitude, in (0, 1] for any passive
    // stack.
    double decrement_factor() const;
    // Output-face delay behind the input, hours, reported within one period.
    double time_lag() const;

    // Complex amplitude ratio (input = 1) at a depth x meters from the
    // heated face.
    std::complex<double> ratio_at(double x) const;
    double amplitude_at(double x) const;
    double phase_lag_at(double x) const; // rad, >= 0

  private:
    struct LayerWave {
        double thickness;
        double conductivity;
        std::complex<double> sigma; // sqrt(i omega / alpha)
    };

    std::vector<LayerWave> layers_;
    double period_;
    double omega_; // rad/s
    std::complex<double> m11_total_;

    static std::array<std::complex<double>, 4> layer_matrix(const LayerWave& lw,
                                                            double thickness);
    std::complex<double> m11_from(double x) const;
};

PeriodicSlabSolution periodic_slab(const LayerStack& stack, double period);

// Root of lambda * exp(lambda^2) * erf(lambda) = Ste / sqrt(pi), the growth
// constant of the one-phase melting similarity solution. Bisection to a
// residual below 1e-12.
double stefan_lambda(double stefan_number);

// Front position 2 * lambda * sqrt(alpha * t) in meters; t in seconds.
double stefan_front(double lambda, double alpha, double t_seconds);

enum class StudyProblem {
    SmoothPeriodic, // sinusoidally driven homogeneous brick slab
    StefanFront,    // melting front against the similarity solution
};

// Observed convergence orders from successive refinements. For the smooth
// problem both axes are probed independently: space on nested grids with a
// fixed small time step, time on a fixed fine grid; the order is estimated
// from the ratios of successive differences of a scalar functional, so any
// error contribution from the frozen axis cancels. For the Stefan problem
// space and time are refined together against the closed-form front.
struct ConvergenceStudy {
    StudyProblem problem;
    int levels = 0;
    std::vector<double> spatial_diffs;  // successive functional differences
    std::vector<double> temporal_diffs;
    std::vector<double> front_errors;   // Stefan: per-level error vs oracle
    double spatial_order = 0.0;
    double temporal_order = 0.0;
    double front_order = 0.0;
    bool monotone = false; // every refinement reduced the error
    bool failed = false;   // non-monotone sequence; orders not trustworthy
};

ConvergenceStudy convergence_study(StudyProblem problem, int levels);

} // namespace pcmwall
