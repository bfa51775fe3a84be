#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <string>

#include "pcmwall/solver.hpp"

using namespace pcmwall;

namespace {

const AnyMaterial kBrick = material_preset("brick");
const AnyMaterial kAir = material_preset("air");
const AnyMaterial kPux = material_preset("pux-1500-20");

LayerStack cavity_wall(const AnyMaterial& fill) {
    return hollow_brick_stack(0.010, 0.030, 0.0, fill, kBrick,
                              material_preset("cement"));
}

SolverConfig fast_solver() {
    SolverConfig c;
    c.dt = 0.05;
    c.cells_per_layer = 6;
    return c;
}

} // namespace

TEST_CASE("grid cells align with layer interfaces") {
    SUBCASE("fixed cells per layer") {
        SolverConfig c;
        c.cells_per_layer = 10;
        const Grid g = build_grid(cavity_wall(kAir), c);
        CHECK(g.cells() == 30);
        CHECK(g.edges.size() == 31);
        CHECK(g.edges.front() == doctest::Approx(0.0));
        CHECK(g.edges.back() == doctest::Approx(0.050));
        // Layer interfaces at 10 and 40 mm land exactly on edges.
        CHECK(g.edges[10] == doctest::Approx(0.010).epsilon(1e-12));
        CHECK(g.edges[20] == doctest::Approx(0.040).epsilon(1e-12));
        CHECK(g.layer_of_cell[9] == 0);
        CHECK(g.layer_of_cell[10] == 1);
    }
    SUBCASE("target cell size") {
        SolverConfig c;
        c.cells_per_layer = 0;
        c.target_cell_size = 0.001;
        const Grid g = build_grid(make_stack({{kBrick, 0.050}}), c);
        CHECK(g.cells() == 50);
        CHECK(g.widths[0] == doctest::Approx(0.001));
    }
}

TEST_CASE("a uniform state under a matching constant drive is a fixed point") {
    const LayerStack stack = cavity_wall(kPux);
    const BoundaryCondition bc = ConstantTemperatureBc{15.0, 100.0, 15.0};
    const RunResult r = run(stack, bc, ProbeSet{}, fast_solver(), 2.0, 0.5, 15.0);
    for (const auto& probe : r.probes)
        for (double v : probe) CHECK(v == doctest::Approx(15.0).epsilon(1e-12));
    for (double f : r.flux) CHECK(std::abs(f) < 1e-9);
    CHECK(std::abs(r.boundary_heat) < 1e-6);
    CHECK(std::abs(r.final_enthalpy - r.initial_enthalpy) < 1e-6);
}

TEST_CASE("temperatures stay consistent with conserved enthalpies") {
    const LayerStack stack = cavity_wall(kPux);
    const BoundaryCondition bc = SinusoidalBc{32.5, 17.5, 24.0, -M_PI / 2.0};
    const RunResult r = run(stack, bc, ProbeSet{}, fast_solver(), 6.0, 1.0, 15.0);
    const SimulationState& s = r.final_state;
    for (int i = 0; i < r.grid.cells(); ++i) {
        const AnyMaterial& m = r.grid.material_of(i);
        const double rho = material_density(m);
        if (is_pcm(m)) {
            const auto& pcm = std::get<PcmMaterial>(m);
            const double t = temperature_from_enthalpy(pcm, s.enthalpy[i] / rho, s.phase[i]);
            CHECK(s.temperature[i] == doctest::Approx(t).epsilon(1e-9));
        } else {
            const double cp = std::get<Material>(m).specific_heat;
            CHECK(s.temperature[i] ==
                  doctest::Approx(s.enthalpy[i] / (rho * cp)).epsilon(1e-9));
        }
    }
}

TEST_CASE("linear walls obey the discrete maximum principle") {
    const LayerStack stack = cavity_wall(kAir);
    const BoundaryCondition bc = SinusoidalBc{32.5, 17.5, 24.0, -M_PI / 2.0};
    const RunResult r = run(stack, bc, ProbeSet{}, fast_solver(), 12.0, 0.25, 20.0);
    for (const auto& probe : r.probes) {
        for (double v : probe) {
            CHECK(v >= 15.0 - 1e-9);
            CHECK(v <= 50.0 + 1e-9);
        }
    }
}

TEST_CASE("boundary heat and storage balance exactly") {
    const LayerStack stack = cavity_wall(kPux);
    const BoundaryCondition bc = SinusoidalBc{32.5, 17.5, 24.0, -M_PI / 2.0};
    const RunResult r = run(stack, bc, ProbeSet{}, fast_solver(), 8.0, 0.5, 15.0);
    const double stored = r.final_enthalpy - r.initial_enthalpy;
    const double residual =
        std::abs(r.boundary_heat + r.source_heat - stored) / std::max(std::abs(stored), 1.0);
    CHECK(residual < 1e-10);
}

TEST_CASE("volumetric source heat is metered exactly") {
    SolverConfig c = fast_solver();
    c.volumetric_source = 100.0; // W/m3
    const LayerStack stack = make_stack({{kBrick, 0.050}});
    const BoundaryCondition bc = ConstantTemperatureBc{20.0, 100.0, 20.0};
    const RunResult r = run(stack, bc, ProbeSet{}, c, 1.0, 0.25, 20.0);
    // 100 W/m3 * 0.05 m * 3600 s
    CHECK(r.source_heat == doctest::Approx(18000.0).epsilon(1e-12));
    const double stored = r.final_enthalpy - r.initial_enthalpy;
    CHECK(std::abs(r.boundary_heat + r.source_heat - stored) < 1e-6);
}

TEST_CASE("a hopeless tolerance reports the offending cell") {
    const LayerStack stack = cavity_wall(kPux);
    const BoundaryCondition bc = SinusoidalBc{32.5, 17.5, 24.0, -M_PI / 2.0};
    SolverConfig c = fast_solver();
    c.newton_tolerance = 1e-30;
    c.max_newton_iterations = 1;
    const Grid g = build_grid(stack, c);
    const SimulationState s0 = initial_state(g, 15.0);
    bool threw = false;
    try {
        step(g, c, bc, s0, 0.25);
    } catch (const std::runtime_error& e) {
        threw = true;
        CHECK(std::string(e.what()).find("cell") != std::string::npos);
    }
    CHECK(threw);
}

TEST_CASE("repeated runs are bit-identical") {
    const LayerStack stack = cavity_wall(kPux);
    const BoundaryCondition bc = SinusoidalBc{32.5, 17.5, 24.0, -M_PI / 2.0};
    const RunResult a = run(stack, bc, ProbeSet{}, fast_solver(), 4.0, 0.5, 15.0);
    const RunResult b = run(stack, bc, ProbeSet{}, fast_solver(), 4.0, 0.5, 15.0);
    CHECK(a.time == b.time);
    CHECK(a.input == b.input);
    CHECK(a.flux == b.flux);
    CHECK(a.probes == b.probes);
    CHECK(a.final_state.temperature == b.final_state.temperature);
    CHECK(a.final_state.enthalpy == b.final_state.enthalpy);
    CHECK(a.boundary_heat == b.boundary_heat);
}

TEST_CASE("records land on exact multiples of the output interval") {
    const LayerStack stack = make_stack({{kBrick, 0.020}});
    const BoundaryCondition bc = ConstantTemperatureBc{40.0, 100.0, 20.0};
    SolverConfig c = fast_solver();
    c.dt = 0.07; // deliberately incommensurate with the interval
    const RunResult r = run(stack, bc, ProbeSet{}, c, 1.0, 0.25, 20.0);
    REQUIRE(r.time.size() == 5);
    for (size_t i = 0; i < r.time.size(); ++i)
        CHECK(r.time[i] == doctest::Approx(0.25 * i).epsilon(1e-12));

    const RunResult empty = run(stack, bc, ProbeSet{}, c, 0.0, 0.25, 20.0);
    CHECK(empty.time.empty());
    CHECK(empty.final_enthalpy == doctest::Approx(empty.initial_enthalpy));
}

TEST_CASE("solver configuration is validated") {
    SolverConfig c;
    SUBCASE("zero dt") {
        c.dt = 0.0;
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    }
    SUBCASE("no grid control at all") {
        c.cells_per_layer = 0;
        c.target_cell_size = 0.0;
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    }
    SUBCASE("negative contact resistance") {
        c.contact_resistance = -1.0;
        CHECK_THROWS_AS(c.validate(), std::invalid_argument);
    }
}
