#include "doctest.h"

#include <sstream>
#include <stdexcept>
#include <string>

#include "pcmwall/csv.hpp"
#include "pcmwall/runner.hpp"

using namespace pcmwall;

namespace {

ScenarioConfig tiny_scenario() {
    return parse_scenario(R"({
  "stack": {"layers": [{"material": "brick", "thickness_m": 0.02}]},
  "boundary": {"kind": "sinusoidal", "offset_c": 30, "amplitude_c": 10,
               "period_h": 2, "phase_rad": 0},
  "solver": {"dt_h": 0.05, "cells_per_layer": 8},
  "duration_h": 6,
  "output_interval_h": 0.25,
  "initial_temperature_c": 30
})");
}

} // namespace

TEST_CASE("doubles render in their shortest exact decimal form") {
    CHECK(format_double(0.25) == "0.25");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(-3.5) == "-3.5");
    CHECK(format_double(0.1) == "0.1");
    // Round-trips exactly even when the short form needs 17 digits.
    const double v = 1.0 / 3.0;
    CHECK(std::stod(format_double(v)) == v);
}

TEST_CASE("csv primitives are strict") {
    CHECK(csv_join({"a", "b", "c"}) == "a,b,c");
    CHECK_THROWS_AS(csv_join({"a,b"}), std::invalid_argument);
    const CsvTable t = read_csv("x,y\n1,2\n3,4.5\n");
    REQUIRE(t.header.size() == 2);
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[1][1] == doctest::Approx(4.5));
    CHECK_THROWS(read_csv("x,y\n1\n"));        // ragged row
    CHECK_THROWS(read_csv("x,y\n1,apple\n"));  // non-numeric cell
    CHECK_THROWS(read_csv(""));                // no header
}

TEST_CASE("the probe table carries time, drive, probes and flux") {
    const SimulationArtifacts art = simulate_scenario(tiny_scenario());
    const CsvTable t = read_csv(art.table_csv);
    REQUIRE(t.header.size() == 8);
    CHECK(t.header[0] == "time_h");
    CHECK(t.header[1] == "input_C");
    CHECK(t.header[2] == "probe_0_C");
    CHECK(t.header[3] == "probe_0.25_C");
    CHECK(t.header[4] == "probe_0.5_C");
    CHECK(t.header[5] == "probe_0.75_C");
    CHECK(t.header[6] == "probe_1_C");
    CHECK(t.header[7] == "flux_W_m2");
    CHECK(t.rows.size() == 25); // 6 h at 0.25 h plus the initial record
    CHECK(t.rows[0][0] == doctest::Approx(0.0));
    CHECK(t.rows[0][1] == doctest::Approx(30.0)); // drive at t = 0
    CHECK(t.rows.back()[0] == doctest::Approx(6.0));
    // The table is an exact rendering of the run.
    for (size_t i = 0; i < t.rows.size(); ++i) {
        CHECK(t.rows[i][0] == art.result.time[i]);
        CHECK(t.rows[i][2] == art.result.probes[0][i]);
        CHECK(t.rows[i][7] == art.result.flux[i]);
    }
}

TEST_CASE("the summary lists every metric as one key-value line") {
    const SimulationArtifacts art = simulate_scenario(tiny_scenario());
    const char* expected[] = {
        "window_lo_h",     "window_hi_h",     "period_h",
        "input_max_c",     "input_max_time_h", "input_min_c",
        "input_min_time_h", "output_max_c",    "output_max_time_h",
        "output_min_c",    "output_min_time_h", "decrement_factor",
        "time_lag_h",      "energy_residual", "cycle_checked",
        "cycle_converged", "latent_capacity_j_per_m2",
    };
    std::istringstream lines(art.summary_text);
    std::string line;
    size_t i = 0;
    while (std::getline(lines, line)) {
        REQUIRE(i < sizeof(expected) / sizeof(expected[0]));
        const size_t space = line.find(' ');
        REQUIRE(space != std::string::npos);
        CHECK(line.substr(0, space) == expected[i]);
        CHECK(!line.substr(space + 1).empty());
        ++i;
    }
    CHECK(i == sizeof(expected) / sizeof(expected[0]));
    CHECK(art.summary_text.find("period_h 2") != std::string::npos);
}

TEST_CASE("identical scenarios produce byte-identical artifacts") {
    const SimulationArtifacts a = simulate_scenario(tiny_scenario());
    const SimulationArtifacts b = simulate_scenario(tiny_scenario());
    CHECK(a.table_csv == b.table_csv);
    CHECK(a.summary_text == b.summary_text);
}

TEST_CASE("metrics honour the configured window") {
    ScenarioConfig cfg = tiny_scenario();
    cfg.metrics_window = {{2.0, 6.0}};
    const SimulationArtifacts art = simulate_scenario(cfg);
    CHECK(art.metrics.window_lo == doctest::Approx(2.0));
    CHECK(art.metrics.window_hi == doctest::Approx(6.0));
    CHECK(art.metrics.decrement_factor > 0.0);
    CHECK(art.metrics.decrement_factor < 1.0);
    CHECK(art.metrics.cycle_checked); // 6 h covers three 2 h cycles
}
