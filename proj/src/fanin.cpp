/**
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "abacus/fanin.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "abacus/units.hpp"

namespace abacus {

std::string flags_to_string(ConstraintFlag flags) {
    std::string text;
    const auto append = [&](ConstraintFlag flag, std::string_view name) {
        if (!has_flag(flags, flag)) {
            return;
        }
        if (!text.empty()) {
            text += ';';
        }
        text += name;
    };
    append(ConstraintFlag::kLeakDominated, "LEAK_DOMINATED");
    append(ConstraintFlag::kSdfExceedsMax, "SDF_EXCEEDS_MAX");
    append(ConstraintFlag::kSaturationViolated, "SATURATION_VIOLATED");
    append(ConstraintFlag::kBandNotFlat, "BAND_NOT_FLAT");
    return text;
}

std::string_view to_string(ScaleClass scale) {
    switch (scale) {
        case ScaleClass::kSubSmall: return "SUB_SMALL";
        case ScaleClass::kSmall: return "SMALL";
        case ScaleClass::kLarge: return "LARGE";
        case ScaleClass::kAboveLarge: return "ABOVE_LARGE";
    }
    throw std::invalid_argument("unknown scale class");
}

ScaleClass classify_scale(std::int64_t fan_in) {
    if (fan_in < 0) {
        throw std::invalid_argument("fan-in must be >= 0");
    }
    if (fan_in < 10) {
        return ScaleClass::kSubSmall;
    }
    if (fan_in < 100) {
        return ScaleClass::kSmall;
    }
    if (fan_in <= 1000) {
        return ScaleClass::kLarge;
    }
    return ScaleClass::kAboveLarge;
}

FanInReport fan_in(const NeuronConfig& neuron, const EnvmDevice& device, double sdf,
                   const ReadPulse& pulse) {
    validate(neuron);
    validate(device);
    validate(pulse);
    if (neuron.leak_mode != LeakMode::kConstantCurrent) {
        throw std::invalid_argument("fan-in analysis requires constant-current leak mode");
    }
    if (!(sdf >= 1.0) || !std::isfinite(sdf)) {
        throw std::invalid_argument("sdf must be >= 1");
    }

    FanInReport report;
    report.i_input_attenuated = pulse.amplitude / (device.r_lrs * sdf);
    report.delta_v_mem = delta_v_mem(neuron, report.i_input_attenuated, pulse);
    if (neuron.i_leak > 0.0) {
        report.sdf_cap = max_sdf(pulse.amplitude / device.r_lrs, neuron.i_leak);
        if (sdf > *report.sdf_cap) {
            report.flags |= ConstraintFlag::kSdfExceedsMax;
        }
    }
    if (report.delta_v_mem <= 0.0) {
        report.flags |= ConstraintFlag::kLeakDominated;
        return report;
    }

    const double ratio = neuron.v_th / report.delta_v_mem;
    if (ratio >= 9.0e18) {
        throw std::overflow_error("fan-in exceeds the representable count range");
    }
    report.fan_in = static_cast<std::int64_t>(std::floor(ratio));
    return report;
}

FanInReport fan_in(const NeuronConfig& neuron, const EnvmDevice& device, double sdf,
                   const ReadPulse& pulse, const AttenuatorConfig& atten) {
    FanInReport report = fan_in(neuron, device, sdf, pulse);
    if (!check_saturation(atten).pass) {
        report.flags |= ConstraintFlag::kSaturationViolated;
    }
    if (!continuity_band(atten, device, neuron.i_leak).flat) {
        report.flags |= ConstraintFlag::kBandNotFlat;
    }
    return report;
}

namespace {

SweepRow make_row(const NeuronConfig& neuron, const EnvmDevice& device, double sdf,
                  const ReadPulse& pulse) {
    SweepRow row;
    row.device = device.id;
    row.c_mem = neuron.c_mem;
    row.sdf = sdf;
    row.r_lrs = device.r_lrs;
    row.pulse_width = pulse.width;
    row.pulse_amplitude = pulse.amplitude;
    row.i_leak = neuron.i_leak;
    row.v_th = neuron.v_th;
    row.report = fan_in(neuron, device, sdf, pulse);
    return row;
}

}  // namespace

std::vector<SweepRow> sweep(const std::vector<NeuronConfig>& neurons,
                            const std::vector<EnvmDevice>& devices,
                            const std::vector<double>& sdfs, const ReadPulse& pulse) {
    if (neurons.empty() || devices.empty()) {
        throw std::invalid_argument("sweep needs at least one neuron and one device");
    }
    if (sdfs.size() != 1 && sdfs.size() != devices.size()) {
        throw std::invalid_argument("sdf list must have one entry or one per device");
    }

    std::vector<std::size_t> order(neurons.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return neurons[a].c_mem > neurons[b].c_mem;
    });

    std::vector<SweepRow> rows;
    rows.reserve(neurons.size() * devices.size());
    for (std::size_t d = 0; d < devices.size(); ++d) {
        const double sdf = sdfs.size() == 1 ? sdfs.front() : sdfs[d];
        for (const std::size_t n : order) {
            rows.push_back(make_row(neurons[n], devices[d], sdf, pulse));
        }
    }
    return rows;
}

std::vector<SweepRow> resistance_sweep(const NeuronConfig& neuron,
                                       const EnvmDevice& device, double sdf,
                                       const ReadPulse& pulse, int n_samples) {
    validate(device);
    if (n_samples < 1) {
        throw std::invalid_argument("resistance sweep needs at least one sample");
    }

    std::vector<SweepRow> rows;
    rows.reserve(static_cast<std::size_t>(n_samples));
    const double log_lo = std::log(device.r_lrs);
    const double log_hi = std::log(device.r_hrs);
    for (int k = 0; k < n_samples; ++k) {
        double r = device.r_lrs;
        if (n_samples > 1) {
            const double f = static_cast<double>(k) / static_cast<double>(n_samples - 1);
            r = k == 0 ? device.r_lrs
                : k == n_samples - 1 ? device.r_hrs
                                     : std::exp(log_lo + f * (log_hi - log_lo));
            r = std::clamp(r, device.r_lrs, device.r_hrs);
        }
        EnvmDevice sample = device;
        sample.r_lrs = r;
        sample.r_hrs = std::max(r, device.r_hrs);
        rows.push_back(make_row(neuron, sample, sdf, pulse));
    }
    return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << kSweepCsvHeader << '\n';
    for (const SweepRow& row : rows) {
        out << row.device << ',' << si::format_sci(row.c_mem) << ','
            << si::format_sci(row.sdf) << ',' << si::format_sci(row.r_lrs) << ','
            << si::format_sci(row.pulse_width) << ','
            << si::format_sci(row.pulse_amplitude) << ','
            << si::format_sci(row.i_leak) << ',' << si::format_sci(row.v_th) << ','
            << si::format_sci(row.report.delta_v_mem) << ',';
        if (row.report.fan_in) {
            out << *row.report.fan_in << ','
                << to_string(classify_scale(*row.report.fan_in));
        } else {
            out << ',';
        }
        out << ',' << flags_to_string(row.report.flags) << '\n';
    }
}

}  // namespace abacus
