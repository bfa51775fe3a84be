#include "pcmwall/material.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pcmwall {

namespace {

void require(bool ok, const std::string& what) {
    if (!ok) throw std::invalid_argument(what);
}

void require_finite(double v, const char* what) {
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be finite");
}

} // namespace

void Material::validate() const {
    require(std::isfinite(conductivity) && conductivity > 0,
            "material '" + name + "': conductivity must be positive");
    require(std::isfinite(density) && density > 0,
            "material '" + name + "': density must be positive");
    require(std::isfinite(specific_heat) && specific_heat > 0,
            "material '" + name + "': specific heat must be positive");
}

void PcmMaterial::validate() const {
    auto positive = [&](double v, const char* field) {
        require(std::isfinite(v) && v > 0, "pcm '" + name + "': " + field + " must be positive");
    };
    positive(conductivity_semicrystalline, "conductivity_semicrystalline");
    positive(conductivity_amorphous, "conductivity_amorphous");
    positive(density, "density");
    positive(cp_semicrystalline, "cp_semicrystalline");
    positive(cp_amorphous, "cp_amorphous");
    positive(latent_heat_fusion, "latent_heat_fusion");
    positive(latent_heat_crystallization, "latent_heat_crystallization");
    positive(transition_half_width, "transition_half_width");
    require_finite(t_fusion, "t_fusion");
    require_finite(t_crystallization, "t_crystallization");
    require(t_crystallization < t_fusion,
            "pcm '" + name + "': t_crystallization must lie below t_fusion");
}

void PhaseState::validate() const {
    require(std::isfinite(liquid_fraction) && liquid_fraction >= 0.0 && liquid_fraction <= 1.0,
            "phase state: liquid_fraction must lie in [0, 1]");
}

bool is_pcm(const AnyMaterial& m) { return std::holds_alternative<PcmMaterial>(m); }

const std::string& material_name(const AnyMaterial& m) {
    return std::visit([](const auto& v) -> const std::string& { return v.name; }, m);
}

double material_density(const AnyMaterial& m) {
    return std::visit([](const auto& v) { return v.density; }, m);
}

double material_conductivity(const AnyMaterial& m, double liquid_fraction) {
    if (const auto* pcm = std::get_if<PcmMaterial>(&m)) {
        return pcm->conductivity_semicrystalline +
               liquid_fraction *
                   (pcm->conductivity_amorphous - pcm->conductivity_semicrystalline);
    }
    return std::get<Material>(m).conductivity;
}

EnthalpyCurve::EnthalpyCurve(const PcmMaterial& m, const PhaseState& state) {
    m.validate();
    state.validate();

    const double half = m.transition_half_width;
    const double cp_s = m.cp_semicrystalline;
    const double cp_a = m.cp_amorphous;
    const double cp_avg = 0.5 * (cp_s + cp_a);
    const double phi0 = state.liquid_fraction;
    const double cp_mix = cp_s + phi0 * (cp_a - cp_s);

    heating_ = state.branch == PhaseBranch::Heating;
    phi0_ = phi0;

    const double center = heating_ ? m.t_fusion : m.t_crystallization;
    const double latent =
        heating_ ? m.latent_heat_fusion : m.latent_heat_crystallization;
    const double a = center - half;
    const double b = center + half;
    const double ramp = cp_avg + latent / (2.0 * half);
    const double t_resume = a + phi0 * 2.0 * half;

    win_lo_ = a;
    inv_width_ = 1.0 / (2.0 * half);
    n_breaks_ = 2;

    if (heating_) {
        // Mixture line up to the resume point, then the melt ramp, then the
        // amorphous line. The ramp is anchored on the semicrystalline line
        // extended to the window's lower edge.
        t_break_[0] = t_resume;
        t_break_[1] = b;
        slope_[0] = cp_mix;
        slope_[1] = ramp;
        slope_[2] = cp_a;
        h_break_[0] = cp_s * a + ramp * (t_resume - a);
    } else {
        t_break_[0] = a;
        t_break_[1] = t_resume;
        slope_[0] = cp_s;
        slope_[1] = ramp;
        slope_[2] = cp_mix;
        h_break_[0] = cp_s * a;
    }
    h_break_[1] = h_break_[0] + slope_[1] * (t_break_[1] - t_break_[0]);
    t_anchor_ = t_break_[0];
    h_anchor_ = h_break_[0];

    floor_ = enthalpy(-50.0);
    ceiling_ = enthalpy(150.0);
}

int EnthalpyCurve::segment_by_temperature(double t) const {
    if (t < t_break_[0]) return 0;
    if (t < t_break_[1]) return 1;
    return 2;
}

int EnthalpyCurve::segment_by_enthalpy(double h) const {
    if (h < h_break_[0]) return 0;
    if (h < h_break_[1]) return 1;
    return 2;
}

double EnthalpyCurve::enthalpy(double t) const {
    switch (segment_by_temperature(t)) {
    case 0: return h_break_[0] - slope_[0] * (t_break_[0] - t);
    case 1: return h_break_[0] + slope_[1] * (t - t_break_[0]);
    default: return h_break_[1] + slope_[2] * (t - t_break_[1]);
    }
}

double EnthalpyCurve::temperature(double h) const {
    if (h < floor_ || h > ceiling_)
        throw std::out_of_range("enthalpy outside the curve image for [-50, 150] degC");
    return temperature_extrapolated(h);
}

double EnthalpyCurve::temperature_extrapolated(double h) const {
    switch (segment_by_enthalpy(h)) {
    case 0: return t_break_[0] - (h_break_[0] - h) / slope_[0];
    case 1: return t_break_[0] + (h - h_break_[0]) / slope_[1];
    default: return t_break_[1] + (h - h_break_[1]) / slope_[2];
    }
}

double EnthalpyCurve::slope_at_temperature(double t) const {
    // On a kink the steeper side wins; the ramp slope therefore holds on the
    // closed window, and integrating the capacity across it recovers the
    // latent heat exactly.
    if (t == t_break_[0]) return std::max(slope_[0], slope_[1]);
    if (t == t_break_[1]) return std::max(slope_[1], slope_[2]);
    return slope_[segment_by_temperature(t)];
}

double EnthalpyCurve::slope_at_enthalpy(double h) const {
    return slope_[segment_by_enthalpy(h)];
}

double EnthalpyCurve::effective_fraction(double t) const {
    const double f = std::clamp((t - win_lo_) * inv_width_, 0.0, 1.0);
    return heating_ ? std::max(phi0_, f) : std::min(phi0_, f);
}

double enthalpy(const PcmMaterial& m, double temperature, const PhaseState& state) {
    require_finite(temperature, "temperature");
    return EnthalpyCurve(m, state).enthalpy(temperature);
}

double temperature_from_enthalpy(const PcmMaterial& m, double h, const PhaseState& state) {
    require_finite(h, "enthalpy");
    return EnthalpyCurve(m, state).temperature(h);
}

double apparent_heat_capacity(const PcmMaterial& m, double temperature, const PhaseState& state) {
    require_finite(temperature, "temperature");
    return EnthalpyCurve(m, state).slope_at_temperature(temperature);
}

PhaseState update_phase_state(const PcmMaterial& m, const PhaseState& state,
                              double t_old, double t_new) {
    require_finite(t_old, "temperature");
    require_finite(t_new, "temperature");
    state.validate();
    if (t_new == t_old) return state;

    PhaseState next = state;
    next.branch = t_new > t_old ? PhaseBranch::Heating : PhaseBranch::Cooling;
    next.liquid_fraction = EnthalpyCurve(m, next).effective_fraction(t_new);
    return next;
}

double cycle_nonclosure(const PcmMaterial& m) {
    const double t_ref =
        std::max(m.t_fusion, m.t_crystallization) + m.transition_half_width + 1.0;
    const double h_heat = enthalpy(m, t_ref, {PhaseBranch::Heating, 0.0});
    const double h_cool = enthalpy(m, t_ref, {PhaseBranch::Cooling, 1.0});
    return h_cool - h_heat;
}

AnyMaterial material_preset(const std::string& id) {
    if (id == "pux-1500-20") {
        PcmMaterial m;
        m.name = id;
        m.conductivity_semicrystalline = 0.231;
        m.conductivity_amorphous = 0.231;
        m.density = 1140.0;
        m.cp_semicrystalline = 1310.0;
        m.cp_amorphous = 1510.0;
        m.t_fusion = 38.0;
        m.t_crystallization = 22.3;
        m.latent_heat_fusion = 91000.0;
        m.latent_heat_crystallization = 89000.0;
        m.transition_half_width = 2.0;
        return m;
    }
    if (id == "brick") return Material{id, 1.15, 2300.0, 920.0};
    if (id == "air") return Material{id, 0.03, 1.20, 1000.0};
    // Generic mortar values; not tied to any measured sample.
    if (id == "cement") return Material{id, 1.0, 2000.0, 900.0};
    throw std::invalid_argument("unknown material preset '" + id + "'");
}

bool is_material_preset(const std::string& id) {
    return id == "pux-1500-20" || id == "brick" || id == "air" || id == "cement";
}

} // namespace pcmwall
