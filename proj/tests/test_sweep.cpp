#include "doctest.h"

#include <stdexcept>
#include <string>
#include <vector>

#include "pcmwall/config.hpp"
#include "pcmwall/sweep.hpp"

using namespace pcmwall;

namespace {

// Cheap base scenario: a thin brick slab under a fast sinusoid.
const char* kInlineBase = R"({
  "stack": {"layers": [{"material": "brick", "thickness_m": 0.02}]},
  "boundary": {"kind": "sinusoidal", "offset_c": 30, "amplitude_c": 10,
               "period_h": 2, "phase_rad": 0},
  "solver": {"dt_h": 0.05, "cells_per_layer": 8},
  "duration_h": 4,
  "output_interval_h": 0.25,
  "initial_temperature_c": 30
})";

std::string wrap_sweep(const std::string& axes_json) {
    return std::string("{\"base\": ") + kInlineBase + ", \"axes\": " + axes_json + "}";
}

// The sweep table mixes numbers with free-text error cells, so split it
// verbatim instead of going through the strict numeric reader.
std::vector<std::vector<std::string>> split_rows(const std::string& csv) {
    std::vector<std::vector<std::string>> rows;
    size_t pos = 0;
    while (pos < csv.size()) {
        size_t end = csv.find('\n', pos);
        if (end == std::string::npos) end = csv.size();
        std::vector<std::string> fields;
        size_t start = pos;
        while (start <= end) {
            size_t comma = csv.find(',', start);
            if (comma == std::string::npos || comma > end) {
                fields.emplace_back(csv.substr(start, end - start));
                break;
            }
            fields.emplace_back(csv.substr(start, comma - start));
            start = comma + 1;
        }
        rows.push_back(std::move(fields));
        pos = end + 1;
    }
    return rows;
}

} // namespace

TEST_CASE("the cartesian product runs last axis fastest") {
    const std::string text = wrap_sweep(
        R"([{"path": "duration_h", "values": [2, 4]},
            {"path": "boundary.amplitude_c", "values": [5, 10]}])");
    const SweepConfig cfg = parse_sweep(text, default_presets_dir());
    CHECK(cfg.output_csv == "sweep.csv");
    const auto rows = split_rows(run_sweep_csv(cfg));
    REQUIRE(rows.size() == 5);
    REQUIRE(rows[0].size() == 12);
    CHECK(rows[0][0] == "duration_h");
    CHECK(rows[0][1] == "boundary.amplitude_c");
    CHECK(rows[0][2] == "decrement_factor");
    CHECK(rows[0].back() == "error");
    CHECK(rows[1][0] == "2");
    CHECK(rows[1][1] == "5");
    CHECK(rows[2][0] == "2");
    CHECK(rows[2][1] == "10");
    CHECK(rows[3][0] == "4");
    CHECK(rows[3][1] == "5");
    CHECK(rows[4][0] == "4");
    CHECK(rows[4][1] == "10");
    for (size_t r = 1; r < rows.size(); ++r) CHECK(rows[r].back().empty());
    // Same damping regardless of the driving amplitude: linear wall.
    CHECK(std::stod(rows[3][2]) == doctest::Approx(std::stod(rows[4][2])).epsilon(1e-9));
}

TEST_CASE("worker count never changes the bytes") {
    const std::string text = wrap_sweep(
        R"([{"path": "boundary.amplitude_c", "values": [5, 10, 15]}])");
    SweepConfig cfg = parse_sweep(text, default_presets_dir());
    cfg.workers = 1;
    const std::string serial = run_sweep_csv(cfg);
    cfg.workers = 3;
    const std::string parallel = run_sweep_csv(cfg);
    CHECK(serial == parallel);
}

TEST_CASE("a failing point reports its error without aborting the sweep") {
    const std::string text = wrap_sweep(
        R"([{"path": "duration_h", "values": [2, -1]}])");
    const SweepConfig cfg = parse_sweep(text, default_presets_dir());
    const std::string csv = run_sweep_csv(cfg);
    // Manual split: the error column is free text the numeric reader rejects.
    const size_t line1 = csv.find('\n');
    const size_t line2 = csv.find('\n', line1 + 1);
    const std::string good_row = csv.substr(line1 + 1, line2 - line1 - 1);
    const std::string bad_row = csv.substr(line2 + 1, csv.find('\n', line2 + 1) - line2 - 1);
    CHECK(good_row.back() == ','); // empty error cell
    CHECK(bad_row.find("duration") != std::string::npos);
    // The failed row keeps its axis value and exactly nine empty metric cells.
    CHECK(bad_row.substr(0, 3) == "-1,");
    CHECK(bad_row.find(",,,,,,,,,") != std::string::npos);
}

TEST_CASE("material ids sweep as strings") {
    const std::string text = R"({
  "base": {
    "stack": {"hollow_brick": {"shell_m": 0.005, "cavity_m": 0.03, "skin_m": 0,
                                "fill": "air"}},
    "boundary": {"kind": "sinusoidal", "offset_c": 30, "amplitude_c": 10,
                 "period_h": 2, "phase_rad": 0},
    "solver": {"dt_h": 0.25, "cells_per_layer": 2},
    "duration_h": 1,
    "output_interval_h": 0.5,
    "initial_temperature_c": 30
  },
  "axes": [{"path": "stack.hollow_brick.fill", "values": ["air", "pux-1500-20"]}]
})";
    const SweepConfig cfg = parse_sweep(text, default_presets_dir());
    const auto rows = split_rows(run_sweep_csv(cfg));
    REQUIRE(rows.size() == 3);
    const size_t latent_col = rows[0].size() - 2;
    REQUIRE(rows[0][latent_col] == "latent_capacity_j_per_m2");
    // Latent capacity: zero for the air fill, rho * L * cavity for the pcm.
    CHECK(rows[1][0] == "air");
    CHECK(std::stod(rows[1][latent_col]) == doctest::Approx(0.0));
    CHECK(rows[2][0] == "pux-1500-20");
    CHECK(std::stod(rows[2][latent_col]) ==
          doctest::Approx(1140.0 * 91000.0 * 0.03).epsilon(1e-12));
}

TEST_CASE("more cavity stores more latent heat") {
    const std::string text = R"({
  "base": {
    "stack": {"hollow_brick": {"shell_m": 0.005, "cavity_m": 0.01, "skin_m": 0,
                                "fill": "pux-1500-20"}},
    "boundary": {"kind": "sinusoidal", "offset_c": 30, "amplitude_c": 10,
                 "period_h": 2, "phase_rad": 0},
    "solver": {"dt_h": 0.25, "cells_per_layer": 2},
    "duration_h": 1,
    "output_interval_h": 0.5,
    "initial_temperature_c": 30
  },
  "axes": [{"path": "stack.hollow_brick.cavity_m",
            "values": [0.01, 0.02, 0.03, 0.04]}]
})";
    const SweepConfig cfg = parse_sweep(text, default_presets_dir());
    const auto rows = split_rows(run_sweep_csv(cfg));
    REQUIRE(rows.size() == 5);
    const size_t latent_col = rows[0].size() - 2;
    REQUIRE(rows[0][latent_col] == "latent_capacity_j_per_m2");
    double prev = 0.0;
    for (size_t r = 1; r < rows.size(); ++r) {
        const double latent = std::stod(rows[r][latent_col]);
        CHECK(latent > prev);
        prev = latent;
    }
    CHECK(std::stod(rows[1][latent_col]) == doctest::Approx(1140.0 * 91000.0 * 0.01));
}

TEST_CASE("sweep documents are validated up front") {
    SUBCASE("unknown key") {
        CHECK_THROWS_AS(parse_sweep(wrap_sweep("[]").insert(1, "\"extra\": 1, "),
                                    default_presets_dir()),
                        std::invalid_argument);
    }
    SUBCASE("axis path missing from the base") {
        const std::string text = wrap_sweep(
            R"([{"path": "stack.hollow_brick.cavity_m", "values": [0.01]}])");
        CHECK_THROWS_AS(parse_sweep(text, default_presets_dir()), std::invalid_argument);
    }
    SUBCASE("duplicate axis paths") {
        const std::string text = wrap_sweep(
            R"([{"path": "duration_h", "values": [2]},
                {"path": "duration_h", "values": [4]}])");
        CHECK_THROWS_AS(parse_sweep(text, default_presets_dir()), std::invalid_argument);
    }
    SUBCASE("empty axis") {
        const std::string text = wrap_sweep(R"([{"path": "duration_h", "values": []}])");
        CHECK_THROWS_AS(parse_sweep(text, default_presets_dir()), std::invalid_argument);
    }
    SUBCASE("string value with a comma") {
        const std::string text = wrap_sweep(
            R"([{"path": "stack.layers.0.material", "values": ["a,b"]}])");
        CHECK_THROWS_AS(parse_sweep(text, default_presets_dir()), std::invalid_argument);
    }
}

TEST_CASE("a preset id can seed the base scenario") {
    const std::string text = R"({
  "base": "paper-sinusoid-nopcm",
  "axes": [{"path": "stack.hollow_brick.cavity_m", "values": [0.02]}]
})";
    const SweepConfig cfg = parse_sweep(text, default_presets_dir());
    CHECK(cfg.base_scenario.find("hollow_brick") != std::string::npos);
    CHECK(cfg.axes.size() == 1);
}
