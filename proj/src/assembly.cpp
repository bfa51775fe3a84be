#include "pcmwall/assembly.hpp"

#include <cmath>
#include <stdexcept>

namespace pcmwall {

namespace {

void validate_material(const AnyMaterial& m) {
    std::visit([](const auto& v) { v.validate(); }, m);
}

bool same_material(const AnyMaterial& a, const AnyMaterial& b) {
    return a.index() == b.index() && material_name(a) == material_name(b);
}

} // namespace

double LayerStack::total_thickness() const {
    double sum = 0.0;
    for (const auto& layer : layers) sum += layer.thickness;
    return sum;
}

void LayerStack::validate() const {
    if (layers.empty())
        throw std::invalid_argument("layer stack must contain at least one layer");
    for (const auto& layer : layers) {
        validate_material(layer.material);
        if (!std::isfinite(layer.thickness) || layer.thickness <= 0)
            throw std::invalid_argument("layer '" + material_name(layer.material) +
                                        "': thickness must be positive");
    }
}

LayerStack make_stack(std::vector<Layer> layers) {
    LayerStack stack;
    for (auto& layer : layers) {
        if (!std::isfinite(layer.thickness) || layer.thickness < 0)
            throw std::invalid_argument("layer '" + material_name(layer.material) +
                                        "': thickness must be non-negative");
        if (layer.thickness == 0) continue;
        if (!stack.layers.empty() &&
            same_material(stack.layers.back().material, layer.material)) {
            stack.layers.back().thickness += layer.thickness;
        } else {
            stack.layers.push_back(std::move(layer));
        }
    }
    stack.validate();
    return stack;
}

LayerStack hollow_brick_stack(double shell_thickness, double cavity_thickness,
                              double skin_thickness, const AnyMaterial& fill,
                              const AnyMaterial& shell_material,
                              const AnyMaterial& skin_material) {
    return make_stack({
        {skin_material, skin_thickness},
        {shell_material, shell_thickness},
        {fill, cavity_thickness},
        {shell_material, shell_thickness},
        {skin_material, skin_thickness},
    });
}

void validate_boundary(const BoundaryCondition& bc) {
    if (const auto* c = std::get_if<ConstantTemperatureBc>(&bc)) {
        if (!std::isfinite(c->value) || !std::isfinite(c->then_ambient))
            throw std::invalid_argument("constant boundary: temperatures must be finite");
        if (!std::isfinite(c->duration) || c->duration < 0)
            throw std::invalid_argument("constant boundary: duration must be non-negative");
    } else if (const auto* s = std::get_if<SinusoidalBc>(&bc)) {
        if (!std::isfinite(s->offset) || !std::isfinite(s->amplitude) ||
            !std::isfinite(s->phase))
            throw std::invalid_argument("sinusoidal boundary: parameters must be finite");
        if (!std::isfinite(s->period) || s->period <= 0)
            throw std::invalid_argument("sinusoidal boundary: period must be positive");
    } else {
        const auto& ts = std::get<TimeSeriesBc>(bc);
        if (ts.samples.empty())
            throw std::invalid_argument("time-series boundary: needs at least one sample");
        double prev = -HUGE_VAL;
        for (const auto& [t, v] : ts.samples) {
            if (!std::isfinite(t) || !std::isfinite(v))
                throw std::invalid_argument("time-series boundary: samples must be finite");
            if (t <= prev)
                throw std::invalid_argument(
                    "time-series boundary: sample times must be strictly increasing");
            prev = t;
        }
    }
}

double input_temperature(const BoundaryCondition& bc, double t) {
    if (!std::isfinite(t) || t < 0)
        throw std::invalid_argument("input_temperature: time must be finite and non-negative");
    if (const auto* c = std::get_if<ConstantTemperatureBc>(&bc)) {
        return t <= c->duration ? c->value : c->then_ambient;
    }
    if (const auto* s = std::get_if<SinusoidalBc>(&bc)) {
        return s->offset + s->amplitude * std::sin(2.0 * M_PI * t / s->period + s->phase);
    }
    const auto& samples = std::get<TimeSeriesBc>(bc).samples;
    if (t < samples.front().first)
        throw std::invalid_argument("time-series boundary: time precedes the first sample");
    if (t >= samples.back().first) return samples.back().second;
    // Linear interpolation on the bracketing pair.
    for (size_t i = 1; i < samples.size(); ++i) {
        if (t <= samples[i].first) {
            const auto& [t0, v0] = samples[i - 1];
            const auto& [t1, v1] = samples[i];
            return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
        }
    }
    return samples.back().second; // unreachable
}

void ProbeSet::validate() const {
    if (fractions.empty())
        throw std::invalid_argument("probe set must contain at least one position");
    double prev = -1.0;
    for (double f : fractions) {
        if (!std::isfinite(f) || f < 0.0 || f > 1.0)
            throw std::invalid_argument("probe positions must lie in [0, 1]");
        if (f <= prev)
            throw std::invalid_argument("probe positions must be strictly increasing");
        prev = f;
    }
}

std::vector<double> probe_locations(const LayerStack& stack, const ProbeSet& probes) {
    stack.validate();
    probes.validate();
    const double total = stack.total_thickness();
    std::vector<double> xs;
    xs.reserve(probes.fractions.size());
    for (double f : probes.fractions) xs.push_back(f * total);
    return xs;
}

} // namespace pcmwall
