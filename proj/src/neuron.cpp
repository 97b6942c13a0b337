/**
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "abacus/neuron.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace abacus {

double pulse_period(const ReadPulse& pulse) {
    return pulse.period > 0.0 ? pulse.period : pulse.width;
}

void validate(const ReadPulse& pulse) {
    if (!(pulse.amplitude > 0.0) || !std::isfinite(pulse.amplitude)) {
        throw std::invalid_argument("pulse amplitude must be positive");
    }
    if (!(pulse.width > 0.0) || !std::isfinite(pulse.width)) {
        throw std::invalid_argument("pulse width must be positive");
    }
    if (pulse.period != 0.0 && (!(pulse.period >= pulse.width) || !std::isfinite(pulse.period))) {
        throw std::invalid_argument("pulse period must be 0 (= width) or >= width");
    }
}

std::optional<double> cmem_preset(std::string_view name) {
    if (name == "cmem_paper_1") return kCmemPresets[0];
    if (name == "cmem_paper_2") return kCmemPresets[1];
    if (name == "cmem_paper_3") return kCmemPresets[2];
    if (name == "cmem_paper_4") return kCmemPresets[3];
    return std::nullopt;
}

void validate(const NeuronConfig& neuron) {
    if (!(neuron.c_mem > 0.0)) {
        throw std::invalid_argument("neuron c_mem must be positive");
    }
    if (!(neuron.v_th > 0.0) || !(neuron.v_th <= neuron.v_dd)) {
        throw std::invalid_argument("neuron v_th must satisfy 0 < v_th <= v_dd");
    }
    if (neuron.i_leak < 0.0) {
        throw std::invalid_argument("neuron i_leak must be >= 0");
    }
    if (neuron.g_leak < 0.0) {
        throw std::invalid_argument("neuron g_leak must be >= 0");
    }
    if (neuron.t_refractory < 0.0) {
        throw std::invalid_argument("neuron t_refractory must be >= 0");
    }
    if (!(neuron.v_reset < neuron.v_th)) {
        throw std::invalid_argument("neuron v_reset must be below v_th");
    }
}

namespace {

void require_constant_mode(const NeuronConfig& neuron, const char* op) {
    if (neuron.leak_mode != LeakMode::kConstantCurrent) {
        throw std::invalid_argument(std::string(op) +
                                    " requires constant-current leak mode");
    }
}

}  // namespace

double delta_v_mem(const NeuronConfig& neuron, double i_input, const ReadPulse& pulse) {
    require_constant_mode(neuron, "delta_v_mem");
    if (!(pulse.width > 0.0)) {
        throw std::invalid_argument("delta_v_mem requires pulse width > 0");
    }
    return ((i_input - neuron.i_leak) * pulse.width) / neuron.c_mem;
}

double time_to_fire(const NeuronConfig& neuron, double i_const) {
    require_constant_mode(neuron, "time_to_fire");
    if (!(i_const > neuron.i_leak)) {
        throw std::domain_error("neuron never fires: drive does not exceed the leak");
    }
    return neuron.c_mem * (neuron.v_th - neuron.v_reset) / (i_const - neuron.i_leak);
}

double firing_frequency(const NeuronConfig& neuron, double i_const) {
    return 1.0 / (time_to_fire(neuron, i_const) + neuron.t_refractory);
}

std::optional<double> time_constant(const NeuronConfig& neuron) {
    if (neuron.leak_mode != LeakMode::kConductance) {
        throw std::invalid_argument("time_constant requires conductance leak mode");
    }
    if (neuron.g_leak == 0.0) {
        return std::nullopt;  // unbounded
    }
    return neuron.c_mem / neuron.g_leak;
}

StepResult step(NeuronState state, const NeuronConfig& neuron, double i_in_now, double dt) {
    if (!std::isfinite(i_in_now) || !std::isfinite(dt) || !(dt > 0.0)) {
        throw std::domain_error("neuron step requires finite input and dt > 0");
    }

    if (state.t < state.refractory_until) {
        state.v_mem = neuron.v_reset;
        state.t += dt;
        return {state, false};
    }

    const double leak = neuron.leak_mode == LeakMode::kConstantCurrent
                            ? neuron.i_leak
                            : neuron.g_leak * state.v_mem;
    state.v_mem += ((i_in_now - leak) * dt) / neuron.c_mem;
    if (neuron.leak_mode == LeakMode::kConstantCurrent && state.v_mem < neuron.v_reset) {
        state.v_mem = neuron.v_reset;
    }
    state.t += dt;

    bool fired = false;
    if (state.v_mem >= neuron.v_th) {
        fired = true;
        state.v_mem = neuron.v_reset;
        ++state.spike_count;
        state.refractory_until = state.t + neuron.t_refractory;
    }
    return {state, fired};
}

}  // namespace abacus
