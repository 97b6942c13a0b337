/**
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "abacus/neuron.hpp"

#include <cmath>
#include <stdexcept>

#include "doctest.h"

using namespace abacus;

namespace {

NeuronConfig basic_neuron() {
    NeuronConfig n;
    n.c_mem = 1e-12;
    n.v_dd = 1.8;
    n.v_th = 0.9;
    return n;
}

}  // namespace

TEST_CASE("pulse validation and period defaulting") {
    CHECK_NOTHROW(validate(ReadPulse{0.1, 1e-6, 0.0}));
    CHECK_NOTHROW(validate(ReadPulse{0.1, 1e-6, 2e-6}));
    CHECK_THROWS_AS(validate(ReadPulse{0.0, 1e-6, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate(ReadPulse{0.1, 0.0, 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate(ReadPulse{0.1, 1e-6, 0.5e-6}), std::invalid_argument);
    CHECK(pulse_period(ReadPulse{0.1, 1e-6, 0.0}) == 1e-6);
    CHECK(pulse_period(ReadPulse{0.1, 1e-6, 4e-6}) == 4e-6);
}

TEST_CASE("capacitance presets resolve by name") {
    CHECK(cmem_preset("cmem_paper_1") == 864.5e-15);
    CHECK(cmem_preset("cmem_paper_2") == 86.4e-15);
    CHECK(cmem_preset("cmem_paper_3") == 8.6e-15);
    CHECK(cmem_preset("cmem_paper_4") == 1.4e-15);
    CHECK(!cmem_preset("cmem_paper_5"));
    CHECK(!cmem_preset(""));
}

TEST_CASE("neuron validation rejects broken configs") {
    CHECK_NOTHROW(validate(basic_neuron()));

    NeuronConfig n = basic_neuron();
    n.c_mem = 0.0;
    CHECK_THROWS_AS(validate(n), std::invalid_argument);

    n = basic_neuron();
    n.v_th = 2.0;  // above v_dd
    CHECK_THROWS_AS(validate(n), std::invalid_argument);

    n = basic_neuron();
    n.i_leak = -1e-12;
    CHECK_THROWS_AS(validate(n), std::invalid_argument);

    n = basic_neuron();
    n.t_refractory = -1.0;
    CHECK_THROWS_AS(validate(n), std::invalid_argument);

    n = basic_neuron();
    n.v_reset = 0.9;  // not below threshold
    CHECK_THROWS_AS(validate(n), std::invalid_argument);
}

TEST_CASE("delta_v_mem computes the per-pulse increment") {
    // Powers of two make the arithmetic exact.
    NeuronConfig n = basic_neuron();
    n.c_mem = std::ldexp(1.0, -40);
    const ReadPulse pulse{0.1, std::ldexp(1.0, -20), 0.0};
    CHECK(delta_v_mem(n, std::ldexp(1.0, -30), pulse) == std::ldexp(1.0, -10));

    n.i_leak = std::ldexp(1.0, -29);  // leak above drive
    CHECK(delta_v_mem(n, std::ldexp(1.0, -30), pulse) < 0.0);

    n.leak_mode = LeakMode::kConductance;
    CHECK_THROWS_AS(delta_v_mem(n, 1e-9, pulse), std::invalid_argument);
}

TEST_CASE("time_to_fire and firing_frequency match the charge balance") {
    NeuronConfig n = basic_neuron();
    n.i_leak = 1e-9;
    const double i = 5e-9;
    const double expected = n.c_mem * n.v_th / (i - n.i_leak);
    CHECK(time_to_fire(n, i) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(firing_frequency(n, i) == doctest::Approx(1.0 / expected).epsilon(1e-12));

    n.t_refractory = 1e-4;
    CHECK(firing_frequency(n, i) ==
          doctest::Approx(1.0 / (expected + 1e-4)).epsilon(1e-12));

    CHECK_THROWS_AS(time_to_fire(n, 1e-9), std::domain_error);
    CHECK_THROWS_AS(time_to_fire(n, 0.5e-9), std::domain_error);

    NeuronConfig c = basic_neuron();
    c.leak_mode = LeakMode::kConductance;
    CHECK_THROWS_AS(time_to_fire(c, 1e-9), std::invalid_argument);
}

TEST_CASE("time_constant exists only for a conductance leak") {
    NeuronConfig n = basic_neuron();
    CHECK_THROWS_AS(time_constant(n), std::invalid_argument);

    n.leak_mode = LeakMode::kConductance;
    n.g_leak = 0.0;
    CHECK(!time_constant(n));

    n.g_leak = 1e-9;
    CHECK(*time_constant(n) == 1e-12 / 1e-9);
}

TEST_CASE("step integrates one Euler interval exactly") {
    NeuronConfig n = basic_neuron();
    n.c_mem = std::ldexp(1.0, -40);
    NeuronState s;
    const StepResult r = step(s, n, std::ldexp(1.0, -30), std::ldexp(1.0, -20));
    CHECK(r.state.v_mem == std::ldexp(1.0, -10));
    CHECK(r.state.t == std::ldexp(1.0, -20));
    CHECK(!r.fired);
    CHECK(r.state.spike_count == 0);
}

TEST_CASE("step with dt equal to the pulse width reproduces delta_v_mem") {
    NeuronConfig n = basic_neuron();
    n.c_mem = 864.5e-15;
    n.i_leak = 1.1e-9;
    const ReadPulse pulse{0.1, 1e-6, 0.0};
    const double i = 3.7e-9;
    const StepResult r = step(NeuronState{}, n, i, pulse.width);
    CHECK(r.state.v_mem == delta_v_mem(n, i, pulse));
}

TEST_CASE("step fires, resets and honors the refractory window") {
    NeuronConfig n = basic_neuron();
    n.v_th = 0.5;
    n.v_reset = 0.125;
    n.t_refractory = 3e-6;

    NeuronState s;
    s.v_mem = 0.4375;
    // 0.4375 + 1e-6 * 1e-6 / 1e-12 = 1.4375, crossing the threshold.
    StepResult r = step(s, n, 1e-6, 1e-6);
    CHECK(r.fired);
    CHECK(r.state.v_mem == n.v_reset);
    CHECK(r.state.spike_count == 1);
    CHECK(r.state.refractory_until == r.state.t + n.t_refractory);

    // While refractory, input is ignored and the membrane stays at reset.
    r = step(r.state, n, 1e-6, 1e-6);
    CHECK(!r.fired);
    CHECK(r.state.v_mem == n.v_reset);
    r = step(r.state, n, 1e-6, 1e-6);
    CHECK(r.state.v_mem == n.v_reset);
    r = step(r.state, n, 1e-6, 1e-6);
    CHECK(r.state.v_mem == n.v_reset);

    // After the window the membrane integrates again.
    r = step(r.state, n, 1e-7, 1e-6);
    CHECK(!r.fired);
    CHECK(r.state.v_mem == doctest::Approx(0.225).epsilon(1e-12));
}

TEST_CASE("constant-current leak cannot pull the membrane below reset") {
    NeuronConfig n = basic_neuron();
    n.i_leak = 1e-9;
    n.v_reset = 0.0;
    NeuronState s;
    const StepResult r = step(s, n, 0.0, 1e-6);
    CHECK(r.state.v_mem == 0.0);
}

TEST_CASE("conductance leak decays geometrically") {
    NeuronConfig n = basic_neuron();
    n.leak_mode = LeakMode::kConductance;
    n.c_mem = std::ldexp(1.0, -40);
    n.g_leak = std::ldexp(1.0, -24);
    const double dt = std::ldexp(1.0, -20);  // g * dt / c = 2^-4

    NeuronState s;
    s.v_mem = 0.5;
    const StepResult r = step(s, n, 0.0, dt);
    CHECK(r.state.v_mem == 0.5 * (1.0 - 0.0625));
}

TEST_CASE("step rejects non-finite input and bad dt") {
    const NeuronConfig n = basic_neuron();
    CHECK_THROWS_AS(step(NeuronState{}, n, std::nan(""), 1e-6), std::domain_error);
    CHECK_THROWS_AS(step(NeuronState{}, n, 1e-9, 0.0), std::domain_error);
    CHECK_THROWS_AS(step(NeuronState{}, n, 1e-9, -1e-6), std::domain_error);
}
