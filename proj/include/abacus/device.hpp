/**
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "abacus/neuron.hpp"
#include "abacus/pulse.hpp"

namespace abacus {

enum class Technology {
    kPcm,
    kOxram,
    kSttMram,
    kSotMram,
    kCustom,
};

std::string_view to_string(Technology tech);

// Accepts the canonical tags (PCM, OXRAM, STT_MRAM, SOT_MRAM, CUSTOM),
// case-insensitively. Throws std::invalid_argument otherwise.
Technology technology_from_string(std::string_view text);

// Read-out electrical envelope of one eNVM synapse technology. Only what the
// column sees at read time: the resistance window, the read voltage, and the
// attenuation the technology calls for.
struct EnvmDevice {
    std::string id;        // config section id, used for CLI lookup
    Technology tech = Technology::kCustom;
    double r_lrs = 0.0;        // ohm, low resistance state
    double r_hrs = 0.0;        // ohm, high resistance state
    double read_voltage = 0.0; // V
    double default_sdf = 1.0;  // recommended current scaling-down factor
};

// Throws std::invalid_argument unless 0 < r_lrs <= r_hrs, read_voltage > 0
// and default_sdf >= 1.
void validate(const EnvmDevice& device);

// Read current through the cell at the given programmed resistance:
// read_voltage / resistance. Throws std::out_of_range (naming the violated
// bound) when resistance falls outside [r_lrs, r_hrs].
double synaptic_current(const EnvmDevice& device, double resistance);

// Back-solves the LRS resistance that makes the fan-in abacus return exactly
// target_fan_in for this neuron/pulse at the given SDF:
//   R = V_read / (sdf * (v_th * c_mem / (target * width) + i_leak))
// The returned value is padded upward by <= 1 ppb so the floored ratio lands
// strictly inside [target, target + 1) under floating-point evaluation.
// Throws std::invalid_argument on bad arguments, std::runtime_error when the
// inversion is infeasible (non-positive derived current).
double derive_lrs_from_fanin(std::int64_t target_fan_in, double sdf,
                             const NeuronConfig& neuron, const ReadPulse& pulse);

// Built-in technology presets. LRS values are back-solved from the reference
// fan-in operating points (864.5 fF membrane, 1 us / 0.1 V read, 0.9 V
// threshold, zero leak): PCM 3560 @ SDF 6000, OxRAM 350 @ SDF 9000,
// SOT-MRAM 88200 @ SDF 1000. r_hrs is a 10x placeholder window; real device
// windows should come from config. STT-MRAM ships no preset: no reference
// operating point pins its resistance, so it must be configured explicitly.
std::vector<EnvmDevice> default_devices();

}  // namespace abacus
