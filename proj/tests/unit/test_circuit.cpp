#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "core/circuit.hpp"
#include "core/errors.hpp"

using namespace cdpa;
using Catch::Approx;

TEST_CASE("triangle carrier shape") {
    const double f = 1000.0, amp = 4.0, period = 1.0 / f;
    CHECK(triangle_carrier(0.0, f, amp) == Approx(-amp));
    CHECK(triangle_carrier(0.25 * period, f, amp) == Approx(0.0).margin(1e-12));
    CHECK(triangle_carrier(0.5 * period, f, amp) == Approx(amp));
    CHECK(triangle_carrier(0.75 * period, f, amp) == Approx(0.0).margin(1e-12));
    // rising through the first half, falling through the second
    CHECK(triangle_carrier(0.1 * period, f, amp) <
          triangle_carrier(0.2 * period, f, amp));
    CHECK(triangle_carrier(0.6 * period, f, amp) >
          triangle_carrier(0.7 * period, f, amp));
    // periodic, also far from zero
    CHECK(triangle_carrier(1234.0 * period + 0.3 * period, f, amp) ==
          Approx(triangle_carrier(0.3 * period, f, amp)).margin(1e-9));
}

TEST_CASE("comparator resolves ties low") {
    CHECK(pwm_state(1.0, 0.5) == SwitchState::high);
    CHECK(pwm_state(0.5, 0.5) == SwitchState::low);
    CHECK(pwm_state(0.2, 0.5) == SwitchState::low);
}

TEST_CASE("rail source follows the ripple") {
    CircuitConfig cfg;
    cfg.supply_voltage = 10.0;
    cfg.ripple_fraction = 0.05;
    cfg.ripple_freq = 400.0;
    CHECK(supply_voltage(0.0, cfg) == Approx(10.0));
    const double quarter = 0.25 / cfg.ripple_freq;
    CHECK(supply_voltage(quarter, cfg) == Approx(10.5));
    CHECK(supply_voltage(3.0 * quarter, cfg) == Approx(9.5));
}

TEST_CASE("config validation") {
    CircuitConfig cfg;
    CHECK_NOTHROW(validate(cfg));

    SECTION("input must stay inside the carrier") {
        cfg.input_amp = cfg.carrier_amp;
        CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    }
    SECTION("zero input amplitude is allowed") {
        cfg.input_amp = 0.0;
        CHECK_NOTHROW(validate(cfg));
    }
    SECTION("step must resolve the carrier") {
        cfg.internal_step = 1e-4;
        CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    }
    SECTION("step must divide the sample period") {
        cfg.internal_step = 3e-7;
        CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    }
    SECTION("window must contain at least one sample") {
        cfg.window_end = cfg.window_start;
        CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    }
    SECTION("supply network needs a decoupling capacitor") {
        cfg.decoupling_capacitance = 0.0;
        CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
        cfg.supply_resistance = 0.0;
        CHECK_NOTHROW(validate(cfg));
    }
    SECTION("passive elements must be positive") {
        cfg.filter_inductance = 0.0;
        CHECK_THROWS_AS(validate(cfg), std::invalid_argument);
    }
}

namespace {

CircuitConfig fast_config() {
    // Short late window keeps unit tests quick while still reaching a
    // settled state. 4 ms of simulated time, 100 samples captured.
    CircuitConfig cfg;
    cfg.window_start = 0.003;
    cfg.window_end = 0.004;
    return cfg;
}

} // namespace

TEST_CASE("simulation window and sampling grid") {
    CircuitConfig cfg = fast_config();
    const SimulationResult sim = simulate(cfg);

    CHECK(sim.output.size() == 100);
    CHECK(sim.input.size() == 100);
    CHECK(sim.output.sample_rate == cfg.sample_rate);
    CHECK(sim.output.start_time == Approx(cfg.window_start));

    // the captured input is the analytic modulating sine on the grid
    const double w = 2.0 * std::numbers::pi * cfg.input_freq;
    for (std::size_t k : {std::size_t{0}, std::size_t{37}, std::size_t{99}}) {
        const double t = sim.input.time_at(k);
        CHECK(sim.input.samples[k] ==
              Approx(cfg.input_amp * std::sin(w * t)).margin(1e-12));
    }
}

TEST_CASE("ideal rails and a slow tone give the averaged duty-cycle gain") {
    // With stiff rails and no ripple the filtered bridge voltage tracks
    // V_dd / carrier_amp times the input for tones far below the filter
    // corner.
    CircuitConfig cfg;
    cfg.supply_resistance = 0.0;
    cfg.ripple_fraction = 0.0;
    cfg.input_freq = 400.0;
    cfg.input_amp = 2.0;
    cfg.window_start = 0.005;
    cfg.window_end = 0.0075; // one full 400 Hz cycle
    const SimulationResult sim = simulate(cfg);

    const double gain = cfg.supply_voltage / cfg.carrier_amp;
    double num = 0.0, den = 0.0, in_sq = 0.0, out_sq = 0.0;
    for (std::size_t k = 0; k < sim.output.size(); ++k) {
        num += sim.output.samples[k] * sim.input.samples[k];
        den += sim.input.samples[k] * sim.input.samples[k];
        in_sq += sim.input.samples[k] * sim.input.samples[k];
        out_sq += sim.output.samples[k] * sim.output.samples[k];
    }
    const double fitted_gain = num / den;
    CHECK(fitted_gain == Approx(gain).epsilon(0.02));
    // residual switching ripple caps the correlation just below one
    const double corr = num / std::sqrt(in_sq * out_sq);
    CHECK(corr > 0.995);
}

TEST_CASE("zero input keeps the averaged output near zero") {
    CircuitConfig cfg = fast_config();
    cfg.input_amp = 0.0;
    cfg.ripple_fraction = 0.0;
    cfg.supply_resistance = 0.0;
    const SimulationResult sim = simulate(cfg);
    double mean = 0.0;
    for (double v : sim.output.samples) mean += v;
    mean /= static_cast<double>(sim.output.size());
    CHECK(std::abs(mean) < 0.05);
}

TEST_CASE("simulation is deterministic") {
    CircuitConfig cfg = fast_config();
    const SimulationResult a = simulate(cfg);
    const SimulationResult b = simulate(cfg);
    REQUIRE(a.output.size() == b.output.size());
    for (std::size_t k = 0; k < a.output.size(); ++k) {
        CHECK(a.output.samples[k] == b.output.samples[k]);
        CHECK(a.input.samples[k] == b.input.samples[k]);
    }
}

TEST_CASE("unstable element values raise a divergence error") {
    CircuitConfig cfg = fast_config();
    cfg.filter_inductance = 1e-12; // far below what the fixed step can follow
    try {
        simulate(cfg);
        FAIL("expected DivergenceError");
    } catch (const DivergenceError& e) {
        CHECK(e.index >= 1);
        CHECK(std::string(e.what()).find("diverged") != std::string::npos);
    }
}
