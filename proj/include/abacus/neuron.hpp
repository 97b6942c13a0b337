/**
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string_view>

#include "abacus/pulse.hpp"

namespace abacus {

// Leak model of the integrate-and-fire neuron. The fan-in abacus assumes a
// constant leak current; the RC time-constant analysis needs an ohmic leak.
enum class LeakMode {
    kConstantCurrent,
    kConductance,
};

struct NeuronConfig {
    double c_mem = 0.0;         // F, membrane capacitance
    double v_dd = 1.8;          // V, supply
    double v_th = 0.9;          // V, firing threshold (convention: v_dd / 2)
    LeakMode leak_mode = LeakMode::kConstantCurrent;
    double i_leak = 0.0;        // A, constant leak (kConstantCurrent)
    double g_leak = 0.0;        // S, leak conductance (kConductance)
    double v_reset = 0.0;       // V, membrane voltage after a fire
    double t_refractory = 0.0;  // s
};

// Membrane capacitance presets available by name in config files:
// cmem_paper_1 .. cmem_paper_4. The last one is the lumped parasitic
// capacitance of the input node rather than a designed capacitor.
inline constexpr double kCmemPresets[4] = {864.5e-15, 86.4e-15, 8.6e-15, 1.4e-15};

// Resolves "cmem_paper_1".."cmem_paper_4"; nullopt if the name is unknown.
std::optional<double> cmem_preset(std::string_view name);

// Throws std::invalid_argument on invariant violations
// (c_mem > 0, 0 < v_th <= v_dd, i_leak >= 0, g_leak >= 0,
//  t_refractory >= 0, v_reset < v_th).
void validate(const NeuronConfig& neuron);

// Membrane voltage increment produced by one read pulse of constant current
// i_input: (i_input - i_leak) * width / c_mem. May be <= 0 when the leak
// dominates; callers decide what that means. Constant-current mode only.
double delta_v_mem(const NeuronConfig& neuron, double i_input, const ReadPulse& pulse);

// Time for the membrane to charge from v_reset to v_th under a constant
// drive. Throws std::domain_error when i_const <= i_leak (never fires).
// Constant-current mode only.
double time_to_fire(const NeuronConfig& neuron, double i_const);

// Steady firing rate under constant drive: 1 / (time_to_fire + t_refractory).
double firing_frequency(const NeuronConfig& neuron, double i_const);

// RC time constant c_mem / g_leak. Conductance mode only; nullopt when
// g_leak == 0 (unbounded).
std::optional<double> time_constant(const NeuronConfig& neuron);

struct NeuronState {
    double v_mem = 0.0;
    double t = 0.0;
    std::int64_t spike_count = 0;
    double refractory_until = 0.0;
};

struct StepResult {
    NeuronState state;
    bool fired = false;
};

// One explicit-Euler step of length dt under input current i_in_now.
// The integrand is piecewise constant in every use here, so Euler is exact
// between events; dt only quantizes threshold detection. In constant-current
// mode the membrane is clamped at v_reset (the leak cannot pull it lower).
// Threshold crossing resets to v_reset and opens the refractory window,
// during which the membrane is held at v_reset.
// Throws std::domain_error on non-finite input or dt <= 0.
StepResult step(NeuronState state, const NeuronConfig& neuron, double i_in_now, double dt);

}  // namespace abacus
