#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "pcmwall/material.hpp"

namespace pcmwall {

struct Layer {
    AnyMaterial material;
    double thickness = 0.0; // m
};

// One-dimensional stack of layers, heated face first. Zero-thickness layers
// are dropped and adjacent layers of the same material are merged, so the
// stored layout is canonical.
struct LayerStack {
    std::vector<Layer> layers;

    double total_thickness() const;
    void validate() const;
};

LayerStack make_stack(std::vector<Layer> layers);

// The hollow-brick wall section used throughout: coating, shell, cavity
// fill, shell, coating. Thicknesses in meters; zero thicknesses drop the
// layer.
LayerStack hollow_brick_stack(double shell_thickness, double cavity_thickness,
                              double skin_thickness, const AnyMaterial& fill,
                              const AnyMaterial& shell_material,
                              const AnyMaterial& skin_material);

// Fixed surface temperature held for a duration, then a constant ambient.
struct ConstantTemperatureBc {
    double value = 0.0;     // degC
    double duration = 0.0;  // h; the ambient applies for t > duration
    double then_ambient = 20.0;
};

// offset + amplitude * sin(2 pi t / period + phase)
struct SinusoidalBc {
    double offset = 0.0;    // degC
    double amplitude = 0.0; // K
    double period = 24.0;   // h
    double phase = 0.0;     // rad
};

// Piecewise-linear interpolation through (time, temperature) samples; holds
// the last value beyond the final sample. Times must be strictly increasing.
struct TimeSeriesBc {
    std::vector<std::pair<double, double>> samples; // (h, degC)
};

using BoundaryCondition = std::variant<ConstantTemperatureBc, SinusoidalBc, TimeSeriesBc>;

void validate_boundary(const BoundaryCondition& bc);

// Driving temperature at the heated face at time t (hours).
double input_temperature(const BoundaryCondition& bc, double t);

// Probe positions as fractions of total thickness, 0 = heated face,
// 1 = output face. Must be sorted and within [0, 1].
struct ProbeSet {
    std::vector<double> fractions{0.0, 0.25, 0.5, 0.75, 1.0};

    void validate() const;
};

// Absolute probe depths in meters for the given stack.
std::vector<double> probe_locations(const LayerStack& stack, const ProbeSet& probes);

} // namespace pcmwall
