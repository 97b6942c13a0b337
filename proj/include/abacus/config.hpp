/**
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "abacus/attenuator.hpp"
#include "abacus/device.hpp"
#include "abacus/neuron.hpp"
#include "abacus/pulse.hpp"

namespace abacus {

struct SweepGrid {
    std::vector<double> c_mem;
    // One entry per device, or a single entry broadcast to all devices.
    std::vector<double> sdf;
    // Extra log-spaced resistance rows per device; 0 disables them.
    int resistance_samples = 0;
};

struct ToolConfig {
    std::vector<EnvmDevice> devices;
    NeuronConfig neuron;
    AttenuatorConfig attenuator;
    ReadPulse pulse;
    SweepGrid sweep;
};

// Parse failure with the 1-based line it happened on (0 = whole file).
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::size_t line, const std::string& message);
    std::size_t line() const { return line_; }

private:
    std::size_t line_ = 0;
};

// Shipped operating point: derived device presets, the largest membrane
// capacitance, a 0.1 V / 1 us read pulse, and the per-device sweep SDFs.
ToolConfig default_config();

// The default configuration serialized in the accepted file format;
// parsing it reproduces default_config() exactly.
std::string default_config_text();

// Sectioned key = value text with # comments and engineering-suffix
// numbers. Values overlay default_config(); the first [device.*] section
// replaces the default device list. Unknown or duplicate keys are errors.
ToolConfig parse_config(std::istream& in);

ToolConfig load_config_file(const std::string& path);

// Throws std::invalid_argument naming the available ids when absent.
const EnvmDevice& find_device(const ToolConfig& config, std::string_view id);

}  // namespace abacus
