/**
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "abacus/config.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

#include "abacus/units.hpp"

namespace abacus {

namespace {

std::string_view trim(std::string_view text) {
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) {
        text.remove_prefix(1);
    }
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) {
        text.remove_suffix(1);
    }
    return text;
}

double number_value(std::string_view value, std::size_t line) {
    try {
        return si::parse(value);
    } catch (const std::exception& e) {
        throw ConfigError(line, std::string(e.what()));
    }
}

// Numeric value that may also name a membrane-capacitance preset.
double cmem_value(std::string_view value, std::size_t line) {
    if (const auto preset = cmem_preset(value)) {
        return *preset;
    }
    return number_value(value, line);
}

std::vector<double> list_value(std::string_view value, std::size_t line,
                               bool allow_cmem_presets) {
    std::vector<double> items;
    while (true) {
        const auto comma = value.find(',');
        const std::string_view item = trim(value.substr(0, comma));
        if (item.empty()) {
            throw ConfigError(line, "empty list entry");
        }
        items.push_back(allow_cmem_presets ? cmem_value(item, line)
                                           : number_value(item, line));
        if (comma == std::string_view::npos) {
            return items;
        }
        value.remove_prefix(comma + 1);
    }
}

int int_value(std::string_view value, std::size_t line) {
    const double parsed = number_value(value, line);
    const int as_int = static_cast<int>(parsed);
    if (static_cast<double>(as_int) != parsed) {
        throw ConfigError(line, "expected an integer");
    }
    return as_int;
}

}  // namespace

ConfigError::ConfigError(std::size_t line, const std::string& message)
    : std::runtime_error(line == 0
                             ? message
                             : "config line " + std::to_string(line) + ": " + message),
      line_(line) {}

ToolConfig default_config() {
    ToolConfig config;
    config.devices = default_devices();
    config.neuron.c_mem = kCmemPresets[0];
    config.pulse = ReadPulse{0.1, 1e-6, 0.0};
    config.sweep.c_mem.assign(std::begin(kCmemPresets), std::end(kCmemPresets));
    for (const EnvmDevice& device : config.devices) {
        config.sweep.sdf.push_back(device.default_sdf);
    }
    return config;
}

ToolConfig parse_config(std::istream& in) {
    ToolConfig config = default_config();

    enum class Section { kNone, kNeuron, kAttenuator, kPulse, kSweep, kDevice };
    Section section = Section::kNone;
    EnvmDevice* device = nullptr;
    bool devices_replaced = false;
    bool v_dd_set = false;
    bool v_th_set = false;
    bool sweep_sdf_set = false;
    std::set<std::string> seen_sections;
    std::set<std::string> seen_keys;

    std::string raw;
    for (std::size_t line_no = 1; std::getline(in, raw); ++line_no) {
        if (!raw.empty() && raw.back() == '\r') {
            raw.pop_back();
        }
        const auto hash = raw.find('#');
        const std::string_view line = trim(
            std::string_view(raw).substr(0, hash == std::string::npos ? raw.size() : hash));
        if (line.empty()) {
            continue;
        }

        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ConfigError(line_no, "unterminated section header");
            }
            const std::string name(trim(line.substr(1, line.size() - 2)));
            if (!seen_sections.insert(name).second) {
                throw ConfigError(line_no, "duplicate section [" + name + "]");
            }
            seen_keys.clear();
            device = nullptr;
            if (name == "neuron") {
                section = Section::kNeuron;
            } else if (name == "attenuator") {
                section = Section::kAttenuator;
            } else if (name == "pulse") {
                section = Section::kPulse;
            } else if (name == "sweep") {
                section = Section::kSweep;
            } else if (name.rfind("device.", 0) == 0) {
                const std::string id = name.substr(7);
                if (id.empty()) {
                    throw ConfigError(line_no, "device section needs an id");
                }
                if (!devices_replaced) {
                    // Naming any device replaces the shipped preset list.
                    config.devices.clear();
                    devices_replaced = true;
                }
                EnvmDevice fresh;
                fresh.id = id;
                fresh.read_voltage = 0.1;
                config.devices.push_back(fresh);
                device = &config.devices.back();
                section = Section::kDevice;
            } else {
                throw ConfigError(line_no, "unknown section [" + name + "]");
            }
            continue;
        }

        const auto equals = line.find('=');
        if (equals == std::string_view::npos) {
            throw ConfigError(line_no, "expected key = value");
        }
        const std::string key(trim(line.substr(0, equals)));
        const std::string_view value = trim(line.substr(equals + 1));
        if (key.empty()) {
            throw ConfigError(line_no, "empty key");
        }
        if (value.empty()) {
            throw ConfigError(line_no, "empty value for '" + key + "'");
        }
        if (section == Section::kNone) {
            throw ConfigError(line_no, "key outside any section");
        }
        if (!seen_keys.insert(key).second) {
            throw ConfigError(line_no, "duplicate key '" + key + "'");
        }

        switch (section) {
            case Section::kNeuron: {
                NeuronConfig& n = config.neuron;
                if (key == "c_mem") {
                    n.c_mem = cmem_value(value, line_no);
                } else if (key == "v_dd") {
                    n.v_dd = number_value(value, line_no);
                    v_dd_set = true;
                } else if (key == "v_th") {
                    n.v_th = number_value(value, line_no);
                    v_th_set = true;
                } else if (key == "leak_mode") {
                    if (value == "constant_current") {
                        n.leak_mode = LeakMode::kConstantCurrent;
                    } else if (value == "conductance") {
                        n.leak_mode = LeakMode::kConductance;
                    } else {
                        throw ConfigError(line_no,
                                          "leak_mode must be constant_current or conductance");
                    }
                } else if (key == "i_leak") {
                    n.i_leak = number_value(value, line_no);
                } else if (key == "g_leak") {
                    n.g_leak = number_value(value, line_no);
                } else if (key == "v_reset") {
                    n.v_reset = number_value(value, line_no);
                } else if (key == "t_refractory") {
                    n.t_refractory = number_value(value, line_no);
                } else {
                    throw ConfigError(line_no, "unknown neuron key '" + key + "'");
                }
                break;
            }
            case Section::kAttenuator: {
                AttenuatorConfig& a = config.attenuator;
                if (key == "i_b") {
                    a.i_b = number_value(value, line_no);
                } else if (key == "kappa_n") {
                    a.kappa_n = number_value(value, line_no);
                } else if (key == "u_t") {
                    a.u_t = number_value(value, line_no);
                } else if (key == "r_n9") {
                    a.r_n9 = number_value(value, line_no);
                } else if (key == "bias_divider") {
                    a.bias_divider = number_value(value, line_no);
                } else if (key == "v_d_n10") {
                    a.v_d_n10 = number_value(value, line_no);
                } else if (key == "v_d_n11") {
                    a.v_d_n11 = number_value(value, line_no);
                } else if (key == "v_g_n20") {
                    a.v_g_n20 = number_value(value, line_no);
                } else if (key == "kappa_n20") {
                    a.kappa_n20 = number_value(value, line_no);
                } else {
                    throw ConfigError(line_no, "unknown attenuator key '" + key + "'");
                }
                break;
            }
            case Section::kPulse: {
                if (key == "amplitude") {
                    config.pulse.amplitude = number_value(value, line_no);
                } else if (key == "width") {
                    config.pulse.width = number_value(value, line_no);
                } else if (key == "period") {
                    config.pulse.period = number_value(value, line_no);
                } else {
                    throw ConfigError(line_no, "unknown pulse key '" + key + "'");
                }
                break;
            }
            case Section::kSweep: {
                if (key == "c_mem") {
                    config.sweep.c_mem = list_value(value, line_no, true);
                } else if (key == "sdf") {
                    config.sweep.sdf = list_value(value, line_no, false);
                    sweep_sdf_set = true;
                } else if (key == "resistance_samples") {
                    config.sweep.resistance_samples = int_value(value, line_no);
                } else {
                    throw ConfigError(line_no, "unknown sweep key '" + key + "'");
                }
                break;
            }
            case Section::kDevice: {
                if (key == "technology") {
                    try {
                        device->tech = technology_from_string(value);
                    } catch (const std::exception& e) {
                        throw ConfigError(line_no, std::string(e.what()));
                    }
                } else if (key == "r_lrs") {
                    device->r_lrs = number_value(value, line_no);
                } else if (key == "r_hrs") {
                    device->r_hrs = number_value(value, line_no);
                } else if (key == "read_voltage") {
                    device->read_voltage = number_value(value, line_no);
                } else if (key == "default_sdf") {
                    device->default_sdf = number_value(value, line_no);
                } else {
                    throw ConfigError(line_no, "unknown device key '" + key + "'");
                }
                break;
            }
            case Section::kNone:
                break;
        }
    }

    if (v_dd_set && !v_th_set) {
        config.neuron.v_th = config.neuron.v_dd / 2.0;
    }
    if (devices_replaced && !sweep_sdf_set) {
        config.sweep.sdf.clear();
        for (const EnvmDevice& d : config.devices) {
            config.sweep.sdf.push_back(d.default_sdf);
        }
    }
    for (EnvmDevice& d : config.devices) {
        if (d.r_hrs == 0.0) {
            d.r_hrs = 10.0 * d.r_lrs;
        }
    }

    try {
        validate(config.neuron);
        validate(config.attenuator);
        validate(config.pulse);
        if (config.devices.empty()) {
            throw std::invalid_argument("config defines no devices");
        }
        for (const EnvmDevice& d : config.devices) {
            validate(d);
        }
        if (config.sweep.c_mem.empty() || config.sweep.sdf.empty()) {
            throw std::invalid_argument("sweep grids must not be empty");
        }
        for (const double c : config.sweep.c_mem) {
            if (!(c > 0.0)) {
                throw std::invalid_argument("sweep c_mem entries must be positive");
            }
        }
        for (const double s : config.sweep.sdf) {
            if (!(s >= 1.0)) {
                throw std::invalid_argument("sweep sdf entries must be >= 1");
            }
        }
        if (config.sweep.resistance_samples < 0) {
            throw std::invalid_argument("resistance_samples must be >= 0");
        }
    } catch (const std::invalid_argument& e) {
        throw ConfigError(0, e.what());
    }
    return config;
}

ToolConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError(0, "cannot open config file: " + path);
    }
    return parse_config(in);
}

const EnvmDevice& find_device(const ToolConfig& config, std::string_view id) {
    for (const EnvmDevice& device : config.devices) {
        if (device.id == id) {
            return device;
        }
    }
    std::string available;
    for (const EnvmDevice& device : config.devices) {
        if (!available.empty()) {
            available += ", ";
        }
        available += device.id;
    }
    throw std::invalid_argument("unknown device '" + std::string(id) +
                                "'; available: " + available);
}

std::string default_config_text() {
    const ToolConfig config = default_config();
    std::ostringstream out;
    out << "# Operating point and synapse presets for the fan-in toolkit.\n"
           "# Numbers accept engineering suffixes (f p n u m k M) and scientific\n"
           "# notation. Unknown keys are rejected. The fan-in arithmetic assumes a\n"
           "# zero refractory time and ignores leak between read pulses; the column\n"
           "# simulator quantifies both.\n"
           "\n"
           "[neuron]\n"
           "# Presets cmem_paper_1..cmem_paper_4 resolve to 864.5f, 86.4f, 8.6f, 1.4f.\n"
           "c_mem = cmem_paper_1\n"
           "v_dd = 1.8\n"
           "# When omitted, v_th defaults to v_dd / 2.\n"
           "v_th = 0.9\n"
           "leak_mode = constant_current\n"
           "i_leak = 0\n"
           "g_leak = 0\n"
           "v_reset = 0\n"
           "t_refractory = 0\n"
           "\n"
           "[attenuator]\n"
           "i_b = 8.2n\n"
           "kappa_n = 0.7\n"
           "u_t = 25.85m\n"
           "r_n9 = 2k\n"
           "bias_divider = 1\n"
           "# Operating-point voltages for the output-stage saturation check.\n"
           "v_d_n10 = 0.3\n"
           "v_d_n11 = 0.3\n"
           "v_g_n20 = 0.2\n"
           "kappa_n20 = 0.7\n"
           "\n"
           "[pulse]\n"
           "amplitude = 0.1\n"
           "width = 1u\n"
           "# 0 means back-to-back (period = width).\n"
           "period = 0\n"
           "\n"
           "[sweep]\n"
           "c_mem = cmem_paper_1, cmem_paper_2, cmem_paper_3, cmem_paper_4\n"
           "sdf = 6000, 9000, 1000\n"
           "# Extra log-spaced resistance rows per device; 0 disables them.\n"
           "resistance_samples = 0\n"
           "\n"
           "# Synapse read envelopes. LRS values are back-solved from the reference\n"
           "# operating points; r_hrs is a 10x placeholder window, not device data.\n";
    for (const EnvmDevice& device : config.devices) {
        out << "\n[device." << device.id << "]\n"
            << "technology = " << to_string(device.tech) << '\n'
            << "r_lrs = " << si::format(device.r_lrs) << '\n'
            << "r_hrs = " << si::format(device.r_hrs) << '\n'
            << "read_voltage = " << si::format(device.read_voltage) << '\n'
            << "default_sdf = " << si::format(device.default_sdf) << '\n';
    }
    out << "\n"
           "# STT-MRAM ships without a resistance window; no reference operating\n"
           "# point pins one. Uncomment and fill in measured values to enable it.\n"
           "# [device.stt_mram]\n"
           "# technology = STT_MRAM\n"
           "# r_lrs = ...\n"
           "# r_hrs = ...\n"
           "# read_voltage = 0.1\n"
           "# default_sdf = 9000\n";
    return out.str();
}

}  // namespace abacus
