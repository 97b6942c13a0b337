/**
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "abacus/device.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <stdexcept>

#include "abacus/units.hpp"

namespace abacus {

std::string_view to_string(Technology tech) {
    switch (tech) {
        case Technology::kPcm:     return "PCM";
        case Technology::kOxram:   return "OXRAM";
        case Technology::kSttMram: return "STT_MRAM";
        case Technology::kSotMram: return "SOT_MRAM";
        case Technology::kCustom:  return "CUSTOM";
    }
    return "CUSTOM";
}

Technology technology_from_string(std::string_view text) {
    std::string upper(text);
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (upper == "PCM") return Technology::kPcm;
    if (upper == "OXRAM") return Technology::kOxram;
    if (upper == "STT_MRAM") return Technology::kSttMram;
    if (upper == "SOT_MRAM") return Technology::kSotMram;
    if (upper == "CUSTOM") return Technology::kCustom;
    throw std::invalid_argument("unknown technology tag '" + std::string(text) +
                                "' (expected PCM, OXRAM, STT_MRAM, SOT_MRAM or CUSTOM)");
}

void validate(const EnvmDevice& device) {
    if (!(device.r_lrs > 0.0) || !(device.r_lrs <= device.r_hrs)) {
        throw std::invalid_argument("device '" + device.id +
                                    "': resistances must satisfy 0 < r_lrs <= r_hrs");
    }
    if (!(device.read_voltage > 0.0)) {
        throw std::invalid_argument("device '" + device.id +
                                    "': read_voltage must be positive");
    }
    if (!(device.default_sdf >= 1.0)) {
        throw std::invalid_argument("device '" + device.id +
                                    "': default_sdf must be >= 1");
    }
}

double synaptic_current(const EnvmDevice& device, double resistance) {
    if (resistance < device.r_lrs) {
        throw std::out_of_range("resistance " + si::format(resistance) +
                                " ohm below the LRS bound " + si::format(device.r_lrs) +
                                " ohm of device '" + device.id + "'");
    }
    if (resistance > device.r_hrs) {
        throw std::out_of_range("resistance " + si::format(resistance) +
                                " ohm above the HRS bound " + si::format(device.r_hrs) +
                                " ohm of device '" + device.id + "'");
    }
    return device.read_voltage / resistance;
}

namespace {

// Mirrors the abacus floor rule so the inversion can verify itself.
std::int64_t floored_fanin_at(double r_lrs, double sdf, const NeuronConfig& neuron,
                              const ReadPulse& pulse) {
    const double i_input = pulse.amplitude / (r_lrs * sdf);
    const double dv = delta_v_mem(neuron, i_input, pulse);
    return static_cast<std::int64_t>(std::floor(neuron.v_th / dv));
}

}  // namespace

double derive_lrs_from_fanin(std::int64_t target_fan_in, double sdf,
                             const NeuronConfig& neuron, const ReadPulse& pulse) {
    if (target_fan_in < 1) {
        throw std::invalid_argument("target fan-in must be >= 1");
    }
    if (!(sdf >= 1.0)) {
        throw std::invalid_argument("sdf must be >= 1");
    }
    validate(pulse);
    if (neuron.leak_mode != LeakMode::kConstantCurrent) {
        throw std::invalid_argument("fan-in inversion requires constant-current leak mode");
    }

    const double target = static_cast<double>(target_fan_in);
    // Aim for a ratio strictly inside (target, target + 1) so the floor is
    // unambiguous under floating-point evaluation and a simulated column
    // needs exactly target pulses plus one to fire.
    const double ratio_target = target + std::min(1e-9 * target, 0.5);
    const double i_required =
        neuron.v_th * neuron.c_mem / (ratio_target * pulse.width) + neuron.i_leak;
    if (!(i_required > 0.0) || !std::isfinite(i_required)) {
        throw std::runtime_error(
            "fan-in inversion infeasible: leak exceeds the achievable input current");
    }
    double r_lrs = pulse.amplitude / (sdf * i_required);

    for (int attempt = 0; attempt < 64; ++attempt) {
        const std::int64_t got = floored_fanin_at(r_lrs, sdf, neuron, pulse);
        if (got == target_fan_in) {
            return r_lrs;
        }
        r_lrs *= got < target_fan_in ? 1.0 + 1e-12 : 1.0 - 1e-12;
    }
    throw std::logic_error("fan-in inversion did not converge");
}

std::vector<EnvmDevice> default_devices() {
    NeuronConfig reference;
    reference.c_mem = kCmemPresets[0];
    reference.v_dd = 1.8;
    reference.v_th = 0.9;
    reference.i_leak = 0.0;
    const ReadPulse pulse{0.1, 1e-6, 0.0};

    const auto make = [&](std::string id, Technology tech, std::int64_t target,
                          double sdf) {
        EnvmDevice device;
        device.id = std::move(id);
        device.tech = tech;
        device.r_lrs = derive_lrs_from_fanin(target, sdf, reference, pulse);
        device.r_hrs = 10.0 * device.r_lrs;  // placeholder read window
        device.read_voltage = pulse.amplitude;
        device.default_sdf = sdf;
        validate(device);
        return device;
    };

    return {
        make("pcm", Technology::kPcm, 3560, 6000.0),
        make("oxram", Technology::kOxram, 350, 9000.0),
        make("sot_mram", Technology::kSotMram, 88200, 1000.0),
    };
}

}  // namespace abacus
