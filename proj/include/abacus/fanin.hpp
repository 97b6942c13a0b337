/**
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "abacus/attenuator.hpp"
#include "abacus/device.hpp"
#include "abacus/neuron.hpp"
#include "abacus/pulse.hpp"

namespace abacus {

enum class ConstraintFlag : unsigned {
    kNone = 0,
    kLeakDominated = 1u << 0,
    kSdfExceedsMax = 1u << 1,
    kSaturationViolated = 1u << 2,
    kBandNotFlat = 1u << 3,
};

constexpr ConstraintFlag operator|(ConstraintFlag a, ConstraintFlag b) {
    return static_cast<ConstraintFlag>(static_cast<unsigned>(a) |
                                       static_cast<unsigned>(b));
}

constexpr ConstraintFlag& operator|=(ConstraintFlag& a, ConstraintFlag b) {
    a = a | b;
    return a;
}

constexpr bool has_flag(ConstraintFlag set, ConstraintFlag flag) {
    return (static_cast<unsigned>(set) & static_cast<unsigned>(flag)) != 0u;
}

// Semicolon-joined flag names in a fixed order; empty string for kNone.
std::string flags_to_string(ConstraintFlag flags);

enum class ScaleClass {
    kSubSmall,
    kSmall,
    kLarge,
    kAboveLarge,
};

std::string_view to_string(ScaleClass scale);

// SUB_SMALL < 10, SMALL [10, 100), LARGE [100, 1000], ABOVE_LARGE > 1000.
// Throws std::invalid_argument for negative counts.
ScaleClass classify_scale(std::int64_t fan_in);

struct FanInReport {
    // Per-pulse membrane increment; may be <= 0 when the leak dominates.
    double delta_v_mem = 0.0;
    // Unset while the leak dominates (the column never fires).
    std::optional<std::int64_t> fan_in;
    double i_input_attenuated = 0.0;
    ConstraintFlag flags = ConstraintFlag::kNone;
    // Largest admissible SDF for this device/leak pair; unset at zero leak.
    std::optional<double> sdf_cap;
};

// Minimum fan-in for one operating point: i_input = amplitude / (r_lrs *
// sdf), delta_v from the pulse, fan_in = floor(v_th / delta_v). Requires a
// constant-current neuron and sdf >= 1.
FanInReport fan_in(const NeuronConfig& neuron, const EnvmDevice& device, double sdf,
                   const ReadPulse& pulse);

// Same arithmetic, plus attenuator constraint flags: SATURATION_VIOLATED
// from the bias check and BAND_NOT_FLAT from the device's continuity band.
FanInReport fan_in(const NeuronConfig& neuron, const EnvmDevice& device, double sdf,
                   const ReadPulse& pulse, const AttenuatorConfig& atten);

struct SweepRow {
    std::string device;
    double c_mem = 0.0;
    double sdf = 0.0;
    double r_lrs = 0.0;
    double pulse_width = 0.0;
    double pulse_amplitude = 0.0;
    double i_leak = 0.0;
    double v_th = 0.0;
    FanInReport report;
};

// Cartesian product of neurons and devices, ordered by device (input order)
// then c_mem descending. sdfs holds one entry per device, or a single entry
// broadcast to all devices.
std::vector<SweepRow> sweep(const std::vector<NeuronConfig>& neurons,
                            const std::vector<EnvmDevice>& devices,
                            const std::vector<double>& sdfs, const ReadPulse& pulse);

// Log-spaced resistance samples over [r_lrs, r_hrs] of one device; each row
// evaluates the device as if its LRS sat at the sampled resistance.
std::vector<SweepRow> resistance_sweep(const NeuronConfig& neuron,
                                       const EnvmDevice& device, double sdf,
                                       const ReadPulse& pulse, int n_samples);

// Header plus one row per sweep cell; empty fan_in/scale_class cells when
// the leak dominates. Numbers use full-precision scientific notation.
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

inline constexpr std::string_view kSweepCsvHeader =
    "device,c_mem_farads,sdf,r_lrs_ohms,pulse_width_s,pulse_amplitude_v,"
    "i_leak_amps,v_th_v,delta_v_mem_v,fan_in,scale_class,flags";

}  // namespace abacus
