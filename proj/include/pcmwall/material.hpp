#pragma once

#include <string>
#include <variant>

namespace pcmwall {

// Ordinary solid with temperature-independent properties.
// Units: W/(m K), kg/m3, J/(kg K). Temperatures are degrees Celsius throughout.
struct Material {
    std::string name;
    double conductivity = 0.0;
    double density = 0.0;
    double specific_heat = 0.0;

    void validate() const;
};

// Solid-solid phase change material. The low-temperature phase is called
// "semicrystalline", the high-temperature one "amorphous". The transition is
// hysteretic: melting is centered on t_fusion, crystallization on the lower
// t_crystallization, each smeared over a window of half-width
// transition_half_width. Latent heats may differ per direction.
struct PcmMaterial {
    std::string name;
    double conductivity_semicrystalline = 0.0;
    double conductivity_amorphous = 0.0;
    double density = 0.0;
    double cp_semicrystalline = 0.0;
    double cp_amorphous = 0.0;
    double t_fusion = 0.0;
    double t_crystallization = 0.0;
    double latent_heat_fusion = 0.0;          // J/kg, absorbed on melting
    double latent_heat_crystallization = 0.0; // J/kg, released on freezing
    double transition_half_width = 2.0;       // K

    void validate() const;
};

using AnyMaterial = std::variant<Material, PcmMaterial>;

bool is_pcm(const AnyMaterial& m);
const std::string& material_name(const AnyMaterial& m);
double material_density(const AnyMaterial& m);
// Conductivity blended linearly between phases by amorphous fraction.
double material_conductivity(const AnyMaterial& m, double liquid_fraction = 0.0);

// Which branch of the hysteresis loop the material is tracking. The branch
// follows the sign of the last temperature change.
enum class PhaseBranch { Heating, Cooling };

struct PhaseState {
    PhaseBranch branch = PhaseBranch::Heating;
    double liquid_fraction = 0.0; // amorphous mass fraction, in [0, 1]

    void validate() const;
};

// Piecewise-linear specific enthalpy map H(T) for one branch of the loop,
// with the amorphous fraction carried over from the previous branch frozen
// in. Segments (low to high T):
//
//   Heating: [frozen-mixture sensible] [melt ramp] [amorphous sensible]
//   Cooling: [semicrystalline sensible] [freeze ramp] [frozen-mixture sensible]
//
// The ramp segment has slope cp_avg + latent / (2 * half_width) so that the
// latent heat is spread uniformly over the transition window. While the
// carried-over fraction exceeds (heating) or undercuts (cooling) the ramp's
// own value, the state moves along a latent-free mixture line; the ramp takes
// over at the temperature where its fraction matches the carried one.
// Reference point: H = 0 at 0 degrees C for the fully semicrystalline solid.
class EnthalpyCurve {
  public:
    EnthalpyCurve(const PcmMaterial& m, const PhaseState& state);

    double enthalpy(double temperature) const;      // J/kg
    double temperature(double enthalpy) const;      // inverse map
    // Inverse without the [-50, 150] degC gate, the outer segments extended;
    // iterative solvers pass through out-of-range trial values.
    double temperature_extrapolated(double enthalpy) const;
    double slope_at_temperature(double t) const;    // dH/dT, J/(kg K)
    double slope_at_enthalpy(double h) const;
    double effective_fraction(double temperature) const;

    // Image of [-50, 150] degC; enthalpies outside are rejected by
    // temperature().
    double enthalpy_floor() const { return floor_; }
    double enthalpy_ceiling() const { return ceiling_; }

  private:
    // Interior breakpoints (at most 2) separating up to 3 linear segments.
    int n_breaks_ = 0;
    double t_break_[2] = {0, 0};
    double h_break_[2] = {0, 0};
    double slope_[3] = {0, 0, 0};
    double t_anchor_ = 0.0; // a point with known enthalpy on segment 0
    double h_anchor_ = 0.0;
    double floor_ = 0.0;
    double ceiling_ = 0.0;
    // Transition window and carried fraction, for effective_fraction().
    double win_lo_ = 0.0;
    double inv_width_ = 0.0;
    double phi0_ = 0.0;
    bool heating_ = true;

    int segment_by_temperature(double t) const;
    int segment_by_enthalpy(double h) const;
};

// Specific enthalpy of the PCM at the given temperature and phase state, J/kg.
double enthalpy(const PcmMaterial& m, double temperature, const PhaseState& state);

// Exact inverse of enthalpy() for the same state. Rejects enthalpies outside
// the image of [-50, 150] degC.
double temperature_from_enthalpy(const PcmMaterial& m, double h, const PhaseState& state);

// dH/dT at the given point: mixture cp outside the transition window,
// mixture cp plus latent / (2 * half_width) inside it. At a kink the steeper
// side wins, so the value integrates exactly across the window.
double apparent_heat_capacity(const PcmMaterial& m, double temperature, const PhaseState& state);

// Advance the hysteresis state across one temperature move. Falling
// temperature selects the Cooling branch, rising selects Heating, equal
// leaves the state untouched. The fraction never jumps at a branch switch:
// it stays at the carried value until the new branch's ramp reaches it.
PhaseState update_phase_state(const PcmMaterial& m, const PhaseState& state,
                              double t_old, double t_new);

// Enthalpy gap between the heating and cooling curves for the fully
// amorphous material, J/kg. This is the loop non-closure caused by the
// per-branch latent heats and mixture paths; it is reported, never silently
// rebalanced.
double cycle_nonclosure(const PcmMaterial& m);

// Built-in material presets: "pux-1500-20", "brick", "air", "cement".
// Unknown ids raise std::invalid_argument.
AnyMaterial material_preset(const std::string& id);
bool is_material_preset(const std::string& id);

} // namespace pcmwall
