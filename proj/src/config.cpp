#include "pcmwall/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#ifndef PCMWALL_PRESET_DIR
#define PCMWALL_PRESET_DIR "presets"
#endif

namespace pcmwall {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) {
    throw std::invalid_argument("config: " + message);
}

void check_keys(const json& obj, const std::string& context,
                std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) {
                return it.key() == k;
            }) == allowed.end())
            fail(context + ": unknown key '" + it.key() + "'");
    }
}

const json& require_key(const json& obj, const char* key, const std::string& context) {
    auto it = obj.find(key);
    if (it == obj.end()) fail(context + ": missing required key '" + std::string(key) + "'");
    return *it;
}

double as_number(const json& v, const std::string& context) {
    if (!v.is_number()) fail(context + ": expected a number");
    return v.get<double>();
}

double get_number(const json& obj, const char* key, const std::string& context) {
    return as_number(require_key(obj, key, context), context + "." + key);
}

double get_number_or(const json& obj, const char* key, const std::string& context,
                     double fallback) {
    auto it = obj.find(key);
    return it == obj.end() ? fallback : as_number(*it, context + "." + key);
}

int get_int(const json& obj, const char* key, const std::string& context) {
    const json& v = require_key(obj, key, context);
    if (!v.is_number_integer()) fail(context + "." + key + ": expected an integer");
    return v.get<int>();
}

std::string get_string(const json& obj, const char* key, const std::string& context) {
    const json& v = require_key(obj, key, context);
    if (!v.is_string()) fail(context + "." + key + ": expected a string");
    return v.get<std::string>();
}

std::string get_string_or(const json& obj, const char* key, const std::string& context,
                          const std::string& fallback) {
    auto it = obj.find(key);
    if (it == obj.end()) return fallback;
    if (!it->is_string()) fail(context + "." + key + ": expected a string");
    return it->get<std::string>();
}

AnyMaterial material_from_json(const std::string& id, const json& v) {
    const std::string context = "materials." + id;
    if (!v.is_object()) fail(context + ": expected an object");
    const std::string kind = get_string(v, "kind", context);
    if (kind == "solid") {
        check_keys(v, context, {"kind", "k", "rho", "cp"});
        Material m;
        m.name = id;
        m.conductivity = get_number(v, "k", context);
        m.density = get_number(v, "rho", context);
        m.specific_heat = get_number(v, "cp", context);
        m.validate();
        return m;
    }
    if (kind == "pcm") {
        check_keys(v, context,
                   {"kind", "k_semicrystalline", "k_amorphous", "rho",
                    "cp_semicrystalline", "cp_amorphous", "t_fusion_c",
                    "t_crystallization_c", "h_fusion_j_per_kg",
                    "h_crystallization_j_per_kg", "transition_half_width_k"});
        PcmMaterial m;
        m.name = id;
        m.conductivity_semicrystalline = get_number(v, "k_semicrystalline", context);
        m.conductivity_amorphous = get_number(v, "k_amorphous", context);
        m.density = get_number(v, "rho", context);
        m.cp_semicrystalline = get_number(v, "cp_semicrystalline", context);
        m.cp_amorphous = get_number(v, "cp_amorphous", context);
        m.t_fusion = get_number(v, "t_fusion_c", context);
        m.t_crystallization = get_number(v, "t_crystallization_c", context);
        m.latent_heat_fusion = get_number(v, "h_fusion_j_per_kg", context);
        m.latent_heat_crystallization = get_number(v, "h_crystallization_j_per_kg", context);
        m.transition_half_width = get_number_or(v, "transition_half_width_k", context, 2.0);
        m.validate();
        return m;
    }
    fail(context + ".kind: expected 'solid' or 'pcm'");
}

json material_to_json(const AnyMaterial& mat) {
    json v;
    if (const auto* pcm = std::get_if<PcmMaterial>(&mat)) {
        v["kind"] = "pcm";
        v["k_semicrystalline"] = pcm->conductivity_semicrystalline;
        v["k_amorphous"] = pcm->conductivity_amorphous;
        v["rho"] = pcm->density;
        v["cp_semicrystalline"] = pcm->cp_semicrystalline;
        v["cp_amorphous"] = pcm->cp_amorphous;
        v["t_fusion_c"] = pcm->t_fusion;
        v["t_crystallization_c"] = pcm->t_crystallization;
        v["h_fusion_j_per_kg"] = pcm->latent_heat_fusion;
        v["h_crystallization_j_per_kg"] = pcm->latent_heat_crystallization;
        v["transition_half_width_k"] = pcm->transition_half_width;
    } else {
        const auto& plain = std::get<Material>(mat);
        v["kind"] = "solid";
        v["k"] = plain.conductivity;
        v["rho"] = plain.density;
        v["cp"] = plain.specific_heat;
    }
    return v;
}

StackSpec stack_from_json(const json& v) {
    const std::string context = "stack";
    if (!v.is_object()) fail(context + ": expected an object");
    check_keys(v, context, {"hollow_brick", "layers"});
    const bool has_brick = v.contains("hollow_brick");
    const bool has_layers = v.contains("layers");
    if (has_brick == has_layers)
        fail(context + ": provide exactly one of 'hollow_brick' or 'layers'");

    if (has_brick) {
        const json& hb = v["hollow_brick"];
        const std::string hb_context = context + ".hollow_brick";
        if (!hb.is_object()) fail(hb_context + ": expected an object");
        check_keys(hb, hb_context,
                   {"shell_m", "cavity_m", "skin_m", "fill", "shell_material",
                    "skin_material"});
        HollowBrickSpec spec;
        spec.shell = get_number(hb, "shell_m", hb_context);
        spec.cavity = get_number(hb, "cavity_m", hb_context);
        spec.skin = get_number(hb, "skin_m", hb_context);
        spec.fill = get_string(hb, "fill", hb_context);
        spec.shell_material = get_string_or(hb, "shell_material", hb_context, "brick");
        spec.skin_material = get_string_or(hb, "skin_material", hb_context, "cement");
        return spec;
    }

    const json& layers = v["layers"];
    if (!layers.is_array() || layers.empty())
        fail(context + ".layers: expected a non-empty array");
    std::vector<ExplicitLayerSpec> specs;
    for (size_t i = 0; i < layers.size(); ++i) {
        const std::string layer_context = context + ".layers[" + std::to_string(i) + "]";
        const json& layer = layers[i];
        if (!layer.is_object()) fail(layer_context + ": expected an object");
        check_keys(layer, layer_context, {"material", "thickness_m"});
        ExplicitLayerSpec spec;
        spec.material = get_string(layer, "material", layer_context);
        spec.thickness = get_number(layer, "thickness_m", layer_context);
        specs.push_back(std::move(spec));
    }
    return specs;
}

json stack_to_json(const StackSpec& spec) {
    json v;
    if (const auto* hb = std::get_if<HollowBrickSpec>(&spec)) {
        json inner;
        inner["shell_m"] = hb->shell;
        inner["cavity_m"] = hb->cavity;
        inner["skin_m"] = hb->skin;
        inner["fill"] = hb->fill;
        inner["shell_material"] = hb->shell_material;
        inner["skin_material"] = hb->skin_material;
        v["hollow_brick"] = inner;
    } else {
        json arr = json::array();
        for (const auto& layer : std::get<std::vector<ExplicitLayerSpec>>(spec)) {
            json item;
            item["material"] = layer.material;
            item["thickness_m"] = layer.thickness;
            arr.push_back(item);
        }
        v["layers"] = arr;
    }
    return v;
}

BoundaryCondition boundary_from_json(const json& v) {
    const std::string context = "boundary";
    if (!v.is_object()) fail(context + ": expected an object");
    const std::string kind = get_string(v, "kind", context);
    if (kind == "constant") {
        check_keys(v, context, {"kind", "value_c", "duration_h", "then_ambient_c"});
        ConstantTemperatureBc bc;
        bc.value = get_number(v, "value_c", context);
        bc.duration = get_number(v, "duration_h", context);
        bc.then_ambient = get_number_or(v, "then_ambient_c", context, 20.0);
        return bc;
    }
    if (kind == "sinusoidal") {
        check_keys(v, context, {"kind", "offset_c", "amplitude_c", "period_h", "phase_rad"});
        SinusoidalBc bc;
        bc.offset = get_number(v, "offset_c", context);
        bc.amplitude = get_number(v, "amplitude_c", context);
        bc.period = get_number(v, "period_h", context);
        bc.phase = get_number_or(v, "phase_rad", context, 0.0);
        return bc;
    }
    if (kind == "time_series") {
        check_keys(v, context, {"kind", "samples_h_c"});
        const json& samples = require_key(v, "samples_h_c", context);
        if (!samples.is_array() || samples.empty())
            fail(context + ".samples_h_c: expected a non-empty array");
        TimeSeriesBc bc;
        for (size_t i = 0; i < samples.size(); ++i) {
            const json& pair = samples[i];
            const std::string pair_context =
                context + ".samples_h_c[" + std::to_string(i) + "]";
            if (!pair.is_array() || pair.size() != 2)
                fail(pair_context + ": expected a [time_h, value_c] pair");
            bc.samples.emplace_back(as_number(pair[0], pair_context),
                                    as_number(pair[1], pair_context));
        }
        return bc;
    }
    fail(context + ".kind: expected 'constant', 'sinusoidal' or 'time_series'");
}

json boundary_to_json(const BoundaryCondition& bc) {
    json v;
    if (const auto* c = std::get_if<ConstantTemperatureBc>(&bc)) {
        v["kind"] = "constant";
        v["value_c"] = c->value;
        v["duration_h"] = c->duration;
        v["then_ambient_c"] = c->then_ambient;
    } else if (const auto* s = std::get_if<SinusoidalBc>(&bc)) {
        v["kind"] = "sinusoidal";
        v["offset_c"] = s->offset;
        v["amplitude_c"] = s->amplitude;
        v["period_h"] = s->period;
        v["phase_rad"] = s->phase;
    } else {
        const auto& ts = std::get<TimeSeriesBc>(bc);
        v["kind"] = "time_series";
        json arr = json::array();
        for (const auto& [t, value] : ts.samples) arr.push_back(json::array({t, value}));
        v["samples_h_c"] = arr;
    }
    return v;
}

SolverConfig solver_from_json(const json& v) {
    const std::string context = "solver";
    if (!v.is_object()) fail(context + ": expected an object");
    check_keys(v, context,
               {"dt_h", "newton_tolerance", "max_newton_iterations", "cells_per_layer",
                "cell_size_m", "volumetric_source_w_per_m3", "contact_resistance_m2k_per_w"});
    SolverConfig cfg;
    cfg.dt = get_number_or(v, "dt_h", context, cfg.dt);
    cfg.newton_tolerance = get_number_or(v, "newton_tolerance", context, cfg.newton_tolerance);
    if (v.contains("max_newton_iterations"))
        cfg.max_newton_iterations = get_int(v, "max_newton_iterations", context);
    if (v.contains("cells_per_layer") && v.contains("cell_size_m"))
        fail(context + ": 'cells_per_layer' and 'cell_size_m' are mutually exclusive");
    if (v.contains("cells_per_layer")) {
        cfg.cells_per_layer = get_int(v, "cells_per_layer", context);
        if (cfg.cells_per_layer < 1)
            fail(context + ".cells_per_layer: must be at least 1");
    } else {
        cfg.target_cell_size = get_number_or(v, "cell_size_m", context, cfg.target_cell_size);
    }
    cfg.volumetric_source =
        get_number_or(v, "volumetric_source_w_per_m3", context, cfg.volumetric_source);
    cfg.contact_resistance =
        get_number_or(v, "contact_resistance_m2k_per_w", context, cfg.contact_resistance);
    cfg.validate();
    return cfg;
}

json solver_to_json(const SolverConfig& cfg) {
    json v;
    v["dt_h"] = cfg.dt;
    v["newton_tolerance"] = cfg.newton_tolerance;
    v["max_newton_iterations"] = cfg.max_newton_iterations;
    if (cfg.cells_per_layer > 0)
        v["cells_per_layer"] = cfg.cells_per_layer;
    else
        v["cell_size_m"] = cfg.target_cell_size;
    v["volumetric_source_w_per_m3"] = cfg.volumetric_source;
    v["contact_resistance_m2k_per_w"] = cfg.contact_resistance;
    return v;
}

std::vector<std::string> referenced_material_ids(const StackSpec& spec) {
    std::vector<std::string> ids;
    if (const auto* hb = std::get_if<HollowBrickSpec>(&spec)) {
        ids = {hb->skin_material, hb->shell_material, hb->fill};
    } else {
        for (const auto& layer : std::get<std::vector<ExplicitLayerSpec>>(spec))
            ids.push_back(layer.material);
    }
    return ids;
}

ScenarioConfig scenario_from_json(const json& root) {
    if (!root.is_object()) fail("top level: expected an object");
    check_keys(root, "top level",
               {"description", "materials", "stack", "boundary", "probes", "solver",
                "initial_temperature_c", "duration_h", "output_interval_h",
                "metrics_window_h", "metrics_period_h", "cycle_tolerance_k"});

    ScenarioConfig config;
    config.description = get_string_or(root, "description", "top level", "");

    if (root.contains("materials")) {
        const json& materials = root["materials"];
        if (!materials.is_object()) fail("materials: expected an object");
        for (auto it = materials.begin(); it != materials.end(); ++it)
            config.materials.emplace(it.key(), material_from_json(it.key(), it.value()));
    }

    config.stack = stack_from_json(require_key(root, "stack", "top level"));
    config.boundary = boundary_from_json(require_key(root, "boundary", "top level"));
    validate_boundary(config.boundary);

    if (root.contains("probes")) {
        const json& probes = root["probes"];
        if (!probes.is_array()) fail("probes: expected an array");
        config.probes.fractions.clear();
        for (const auto& p : probes)
            config.probes.fractions.push_back(as_number(p, "probes"));
        config.probes.validate();
    }

    if (root.contains("solver")) config.solver = solver_from_json(root["solver"]);

    if (root.contains("initial_temperature_c"))
        config.initial_temperature =
            get_number(root, "initial_temperature_c", "top level");
    config.duration = get_number_or(root, "duration_h", "top level", config.duration);
    config.output_interval =
        get_number_or(root, "output_interval_h", "top level", config.output_interval);
    config.cycle_tolerance =
        get_number_or(root, "cycle_tolerance_k", "top level", config.cycle_tolerance);
    if (!std::isfinite(config.cycle_tolerance) || config.cycle_tolerance <= 0)
        fail("cycle_tolerance_k: must be positive");

    if (root.contains("metrics_window_h")) {
        const json& window = root["metrics_window_h"];
        if (!window.is_array() || window.size() != 2)
            fail("metrics_window_h: expected [lo, hi]");
        config.metrics_window = {{as_number(window[0], "metrics_window_h"),
                                  as_number(window[1], "metrics_window_h")}};
    }
    if (root.contains("metrics_period_h")) {
        config.metrics_period = get_number(root, "metrics_period_h", "top level");
        if (!std::isfinite(*config.metrics_period) || *config.metrics_period <= 0)
            fail("metrics_period_h: must be positive");
    }

    if (!std::isfinite(config.duration) || config.duration < 0)
        fail("duration_h: must be non-negative");
    if (!std::isfinite(config.output_interval) || config.output_interval <= 0)
        fail("output_interval_h: must be positive");
    if (config.duration > 0 && config.duration < config.output_interval)
        fail("duration_h: must cover at least one output interval");
    if (config.metrics_window) {
        const auto& [lo, hi] = *config.metrics_window;
        if (!std::isfinite(lo) || !std::isfinite(hi) || lo < 0 || hi <= lo ||
            hi > config.duration)
            fail("metrics_window_h: expected 0 <= lo < hi <= duration_h");
    }
    if (config.initial_temperature && !std::isfinite(*config.initial_temperature))
        fail("initial_temperature_c: must be finite");

    // Resolve every referenced material, pulling built-ins in by name.
    for (const std::string& id : referenced_material_ids(config.stack)) {
        if (config.materials.count(id)) continue;
        if (!is_material_preset(id))
            fail("stack references unknown material '" + id +
                 "' (not defined inline, not a built-in preset)");
        config.materials.emplace(id, material_preset(id));
    }

    // The geometry must be constructible; surfaces errors (all-zero
    // thicknesses, negative values) at parse time.
    build_stack(config);
    return config;
}

json scenario_to_json(const ScenarioConfig& config) {
    json root;
    if (!config.description.empty()) root["description"] = config.description;
    json materials = json::object();
    for (const auto& [id, material] : config.materials)
        materials[id] = material_to_json(material);
    root["materials"] = materials;
    root["stack"] = stack_to_json(config.stack);
    root["boundary"] = boundary_to_json(config.boundary);
    root["probes"] = config.probes.fractions;
    root["solver"] = solver_to_json(config.solver);
    if (config.initial_temperature)
        root["initial_temperature_c"] = *config.initial_temperature;
    root["duration_h"] = config.duration;
    root["output_interval_h"] = config.output_interval;
    if (config.metrics_window)
        root["metrics_window_h"] =
            json::array({(*config.metrics_window)[0], (*config.metrics_window)[1]});
    if (config.metrics_period) root["metrics_period_h"] = *config.metrics_period;
    root["cycle_tolerance_k"] = config.cycle_tolerance;
    return root;
}

} // namespace

double ScenarioConfig::effective_metrics_period() const {
    if (metrics_period) return *metrics_period;
    if (const auto* s = std::get_if<SinusoidalBc>(&boundary)) return s->period;
    return 24.0;
}

double ScenarioConfig::effective_initial_temperature() const {
    return initial_temperature ? *initial_temperature
                               : input_temperature(boundary, 0.0);
}

ScenarioConfig parse_scenario(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        // Translate the byte offset into line and column.
        size_t line = 1, column = 1;
        const size_t stop = std::min(text.size(), e.byte > 0 ? e.byte - 1 : 0);
        for (size_t i = 0; i < stop; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        fail("syntax error at line " + std::to_string(line) + ", column " +
             std::to_string(column) + ": " + e.what());
    }
    return scenario_from_json(root);
}

std::string serialize_scenario(const ScenarioConfig& config) {
    return scenario_to_json(config).dump(2) + "\n";
}

LayerStack build_stack(const ScenarioConfig& config) {
    auto resolve = [&](const std::string& id) -> AnyMaterial {
        auto it = config.materials.find(id);
        if (it != config.materials.end()) return it->second;
        if (is_material_preset(id)) return material_preset(id);
        fail("stack references unknown material '" + id + "'");
    };

    if (const auto* hb = std::get_if<HollowBrickSpec>(&config.stack)) {
        if (hb->shell < 0 || hb->cavity < 0 || hb->skin < 0)
            fail("stack.hollow_brick: thicknesses must be non-negative");
        return hollow_brick_stack(hb->shell, hb->cavity, hb->skin, resolve(hb->fill),
                                  resolve(hb->shell_material), resolve(hb->skin_material));
    }
    std::vector<Layer> layers;
    for (const auto& spec : std::get<std::vector<ExplicitLayerSpec>>(config.stack))
        layers.push_back({resolve(spec.material), spec.thickness});
    return make_stack(std::move(layers));
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open file: " + path);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::invalid_argument("cannot write file: " + path);
    out << content;
    if (!out) throw std::runtime_error("short write: " + path);
}

ScenarioConfig load_scenario_file(const std::string& path) {
    try {
        return parse_scenario(read_text_file(path));
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path + ": " + e.what());
    }
}

std::string default_presets_dir() { return PCMWALL_PRESET_DIR; }

bool looks_like_preset_id(const std::string& ref) {
    if (ref.empty()) return false;
    return ref.find('/') == std::string::npos &&
           ref.find('\\') == std::string::npos && ref.find('.') == std::string::npos;
}

std::string resolve_scenario_reference(const std::string& ref,
                                       const std::string& presets_dir) {
    namespace fs = std::filesystem;
    if (fs::exists(ref) && fs::is_regular_file(ref)) return ref;
    if (looks_like_preset_id(ref)) {
        const fs::path candidate = fs::path(presets_dir) / (ref + ".json");
        if (fs::exists(candidate)) return candidate.string();
        throw std::invalid_argument("unknown scenario preset '" + ref +
                                    "' (searched " + presets_dir + ")");
    }
    throw std::invalid_argument("no such config file: " + ref);
}

std::vector<std::string> available_presets(const std::string& presets_dir) {
    namespace fs = std::filesystem;
    std::vector<std::string> ids;
    if (!fs::is_directory(presets_dir)) return ids;
    for (const auto& entry : fs::directory_iterator(presets_dir)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json")
            ids.push_back(entry.path().stem().string());
    }
    std::sort(ids.begin(), ids.end());
    return ids;
}

} // namespace pcmwall
