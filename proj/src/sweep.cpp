#include "pcmwall/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "pcmwall/csv.hpp"
#include "pcmwall/runner.hpp"

namespace pcmwall {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) {
    throw std::invalid_argument("sweep: " + message);
}

std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> segments;
    std::string current;
    for (char c : path) {
        if (c == '.') {
            if (current.empty()) fail("empty segment in path '" + path + "'");
            segments.push_back(current);
            current.clear();
        } else {
            current += c;
        }
    }
    if (current.empty()) fail("empty segment in path '" + path + "'");
    segments.push_back(current);
    return segments;
}

// Walks to the addressed node, requiring every step to already exist.
json* navigate(json& root, const std::string& path) {
    json* node = &root;
    for (const std::string& segment : split_path(path)) {
        if (node->is_object()) {
            auto it = node->find(segment);
            if (it == node->end())
                fail("path '" + path + "' does not exist in the base scenario (no key '" +
                     segment + "')");
            node = &*it;
        } else if (node->is_array()) {
            size_t index = 0;
            try {
                index = std::stoul(segment);
            } catch (const std::exception&) {
                fail("path '" + path + "': '" + segment + "' is not an array index");
            }
            if (index >= node->size())
                fail("path '" + path + "': index " + segment + " out of range");
            node = &(*node)[index];
        } else {
            fail("path '" + path + "' descends through a scalar at '" + segment + "'");
        }
    }
    return node;
}

void apply_value(json& root, const std::string& path,
                 const std::variant<double, std::string>& value) {
    json* node = navigate(root, path);
    if (const auto* number = std::get_if<double>(&value))
        *node = *number;
    else
        *node = std::get<std::string>(value);
}

std::string value_to_field(const std::variant<double, std::string>& value) {
    if (const auto* number = std::get_if<double>(&value)) return format_double(*number);
    return std::get<std::string>(value);
}

std::string sanitize_error(std::string message) {
    for (char& c : message)
        if (c == ',' || c == '\n' || c == '\r') c = ';';
    return message;
}

} // namespace

SweepConfig parse_sweep(const std::string& text, const std::string& presets_dir) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(std::string("syntax error: ") + e.what());
    }
    if (!root.is_object()) fail("top level: expected an object");
    for (auto it = root.begin(); it != root.end(); ++it) {
        const std::string& key = it.key();
        if (key != "base" && key != "axes" && key != "output_csv" && key != "workers")
            fail("unknown key '" + key + "'");
    }
    if (!root.contains("base")) fail("missing required key 'base'");
    if (!root.contains("axes")) fail("missing required key 'axes'");

    SweepConfig config;

    // The base is either an inline scenario or a reference to one.
    const json& base = root["base"];
    std::string base_text;
    if (base.is_string()) {
        const std::string path =
            resolve_scenario_reference(base.get<std::string>(), presets_dir);
        base_text = read_text_file(path);
    } else if (base.is_object()) {
        base_text = base.dump();
    } else {
        fail("base: expected a scenario object or a preset id / file path");
    }
    config.base_scenario = serialize_scenario(parse_scenario(base_text));

    const json& axes = root["axes"];
    if (!axes.is_array() || axes.empty()) fail("axes: expected a non-empty array");
    json base_doc = json::parse(config.base_scenario);
    for (size_t i = 0; i < axes.size(); ++i) {
        const std::string context = "axes[" + std::to_string(i) + "]";
        const json& axis = axes[i];
        if (!axis.is_object()) fail(context + ": expected an object");
        for (auto it = axis.begin(); it != axis.end(); ++it)
            if (it.key() != "path" && it.key() != "values")
                fail(context + ": unknown key '" + it.key() + "'");
        if (!axis.contains("path") || !axis["path"].is_string())
            fail(context + ": missing string 'path'");
        if (!axis.contains("values") || !axis["values"].is_array() ||
            axis["values"].empty())
            fail(context + ": missing non-empty array 'values'");

        SweepAxis out;
        out.path = axis["path"].get<std::string>();
        for (const auto& existing : config.axes)
            if (existing.path == out.path)
                fail(context + ": duplicate path '" + out.path + "'");
        navigate(base_doc, out.path); // replace-only: must already exist
        for (const json& v : axis["values"]) {
            if (v.is_number()) {
                out.values.emplace_back(v.get<double>());
            } else if (v.is_string()) {
                const std::string s = v.get<std::string>();
                if (s.find(',') != std::string::npos)
                    fail(context + ": string values must not contain commas");
                out.values.emplace_back(s);
            } else {
                fail(context + ".values: entries must be numbers or strings");
            }
        }
        config.axes.push_back(std::move(out));
    }

    if (root.contains("output_csv")) {
        if (!root["output_csv"].is_string()) fail("output_csv: expected a string");
        config.output_csv = root["output_csv"].get<std::string>();
    }
    if (root.contains("workers")) {
        if (!root["workers"].is_number_integer() || root["workers"].get<int>() < 0)
            fail("workers: expected a non-negative integer");
        config.workers = root["workers"].get<int>();
    }
    return config;
}

std::string run_sweep_csv(const SweepConfig& config) {
    const size_t axis_count = config.axes.size();
    size_t total = 1;
    for (const auto& axis : config.axes) total *= axis.values.size();

    // Row index -> per-axis value index, last axis fastest.
    auto indices_of = [&](size_t row) {
        std::vector<size_t> indices(axis_count);
        for (size_t a = axis_count; a-- > 0;) {
            const size_t len = config.axes[a].values.size();
            indices[a] = row % len;
            row /= len;
        }
        return indices;
    };

    const json base_doc = json::parse(config.base_scenario);

    std::vector<std::string> rows(total);
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const size_t row = next.fetch_add(1);
            if (row >= total) return;
            const std::vector<size_t> indices = indices_of(row);

            std::vector<std::string> fields;
            fields.reserve(axis_count + 10);
            for (size_t a = 0; a < axis_count; ++a)
                fields.push_back(value_to_field(config.axes[a].values[indices[a]]));

            try {
                json doc = base_doc;
                for (size_t a = 0; a < axis_count; ++a)
                    apply_value(doc, config.axes[a].path,
                                config.axes[a].values[indices[a]]);
                const ScenarioConfig scenario = parse_scenario(doc.dump());
                const SimulationArtifacts artifacts = simulate_scenario(scenario);
                const MetricsReport& m = artifacts.metrics;
                fields.push_back(format_double(m.decrement_factor));
                fields.push_back(format_double(m.time_lag));
                fields.push_back(format_double(m.output.max_value));
                fields.push_back(format_double(m.output.max_time));
                fields.push_back(format_double(m.output.min_value));
                fields.push_back(format_double(m.output.min_time));
                fields.push_back(format_double(m.energy_residual));
                fields.push_back(m.cycle_converged ? "1" : "0");
                fields.push_back(format_double(m.latent_capacity));
                fields.emplace_back(); // no error
            } catch (const std::exception& e) {
                for (int i = 0; i < 9; ++i) fields.emplace_back();
                fields.push_back(sanitize_error(e.what()));
            }
            rows[row] = csv_join(fields);
        }
    };

    unsigned workers = config.workers > 0
                           ? static_cast<unsigned>(config.workers)
                           : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(
        std::min<size_t>(workers, std::max<size_t>(total, 1)));
    std::vector<std::thread> pool;
    for (unsigned i = 1; i < workers; ++i) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    std::vector<std::string> header;
    for (const auto& axis : config.axes) header.push_back(axis.path);
    for (const char* name :
         {"decrement_factor", "time_lag_h", "output_max_c", "output_max_time_h",
          "output_min_c", "output_min_time_h", "energy_residual", "cycle_converged",
          "latent_capacity_j_per_m2", "error"})
        header.emplace_back(name);

    std::ostringstream out;
    out << csv_join(header) << '\n';
    for (const std::string& row : rows) out << row << '\n';
    return out.str();
}

} // namespace pcmwall
