/**
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "abacus/attenuator.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>

#include "abacus/units.hpp"

namespace abacus {

void validate(const AttenuatorConfig& cfg) {
    if (!(cfg.i_b > 0.0) || !std::isfinite(cfg.i_b)) {
        throw std::invalid_argument("attenuator i_b must be positive");
    }
    if (!(cfg.u_t > 0.0) || !std::isfinite(cfg.u_t)) {
        throw std::invalid_argument("attenuator u_t must be positive");
    }
    if (!(cfg.r_n9 > 0.0) || !std::isfinite(cfg.r_n9)) {
        throw std::invalid_argument("attenuator r_n9 must be positive");
    }
    if (!(cfg.kappa_n > 0.0) || !(cfg.kappa_n <= 1.0)) {
        throw std::invalid_argument("attenuator kappa_n must be in (0, 1]");
    }
    if (!(cfg.kappa_n20 > 0.0) || !(cfg.kappa_n20 <= 1.0)) {
        throw std::invalid_argument("attenuator kappa_n20 must be in (0, 1]");
    }
    if (!(cfg.bias_divider > 0.0) || !(cfg.bias_divider <= 1.0)) {
        throw std::invalid_argument("attenuator bias_divider must be in (0, 1]");
    }
    for (const double v : {cfg.v_d_n10, cfg.v_d_n11, cfg.v_g_n20}) {
        if (!std::isfinite(v) || v < 0.0) {
            throw std::invalid_argument("attenuator node voltages must be >= 0");
        }
    }
}

double tanh_argument(const AttenuatorConfig& cfg, double i_in) {
    return cfg.kappa_n * cfg.r_n9 * cfg.bias_divider * i_in / (4.0 * cfg.u_t);
}

double output_current(const AttenuatorConfig& cfg, double i_in) {
    if (!(i_in >= 0.0) || !std::isfinite(i_in)) {
        throw std::domain_error("attenuator input current must be >= 0 and finite");
    }
    return cfg.i_b * std::tanh(tanh_argument(cfg, i_in));
}

double scaling_down_factor(const AttenuatorConfig& cfg, double i_in) {
    if (i_in == 0.0) {
        return sdf_small_signal_limit(cfg);
    }
    if (!(i_in > 0.0) || !std::isfinite(i_in)) {
        throw std::domain_error("attenuator input current must be >= 0 and finite");
    }
    return i_in / output_current(cfg, i_in);
}

double sdf_small_signal_limit(const AttenuatorConfig& cfg) {
    return 4.0 * cfg.u_t / (cfg.i_b * cfg.kappa_n * cfg.r_n9 * cfg.bias_divider);
}

SaturationCheck check_saturation(const AttenuatorConfig& cfg) {
    const double rhs =
        (cfg.kappa_n * (cfg.v_d_n10 + cfg.v_d_n11) - cfg.kappa_n20 * cfg.v_g_n20) / 2.0;
    const double margin = rhs - 4.0 * cfg.u_t;
    return SaturationCheck{margin > 0.0, margin};
}

std::optional<double> max_sdf(double i_input_min, double i_leak) {
    if (!(i_input_min > 0.0) || !std::isfinite(i_input_min)) {
        throw std::domain_error("minimum input current must be positive");
    }
    if (i_leak < 0.0 || !std::isfinite(i_leak)) {
        throw std::domain_error("leak current must be >= 0 and finite");
    }
    if (i_leak == 0.0) {
        return std::nullopt;
    }
    return i_input_min / i_leak;
}

BandReport band_over_currents(const AttenuatorConfig& cfg, double i_lo, double i_hi,
                              double i_leak, double rel_tolerance, int n_samples) {
    validate(cfg);
    if (!(rel_tolerance > 0.0)) {
        throw std::invalid_argument("band tolerance must be positive");
    }
    if (n_samples < 2) {
        throw std::invalid_argument("band needs at least two samples");
    }
    if (!(i_lo > 0.0) || !(i_hi > 0.0) || !std::isfinite(i_lo) || !std::isfinite(i_hi)) {
        throw std::invalid_argument("band endpoints must be positive and finite");
    }
    if (i_leak < 0.0 || !std::isfinite(i_leak)) {
        throw std::invalid_argument("leak current must be >= 0 and finite");
    }
    if (i_lo > i_hi) {
        std::swap(i_lo, i_hi);
    }

    BandReport report;
    if (i_lo == i_hi) {
        const double out = output_current(cfg, i_lo);
        const double sdf = scaling_down_factor(cfg, i_lo);
        report.samples.push_back(BandSample{i_lo, out, sdf});
        report.sdf_min = sdf;
        report.sdf_max = sdf;
        report.flat = true;
        report.leak_ok = out > i_leak;
        report.admissible = report.flat && report.leak_ok;
        return report;
    }

    report.samples.reserve(static_cast<std::size_t>(n_samples));
    const double log_lo = std::log(i_lo);
    const double log_hi = std::log(i_hi);
    for (int k = 0; k < n_samples; ++k) {
        const double f = static_cast<double>(k) / static_cast<double>(n_samples - 1);
        // Pin the endpoints so the band covers the read range exactly.
        double i_in = k == 0 ? i_lo
                     : k == n_samples - 1
                         ? i_hi
                         : std::exp(log_lo + f * (log_hi - log_lo));
        i_in = std::clamp(i_in, i_lo, i_hi);
        const double out = output_current(cfg, i_in);
        report.samples.push_back(BandSample{i_in, out, scaling_down_factor(cfg, i_in)});
    }

    report.sdf_min = report.samples.front().sdf;
    report.sdf_max = report.samples.front().sdf;
    for (const BandSample& s : report.samples) {
        report.sdf_min = std::min(report.sdf_min, s.sdf);
        report.sdf_max = std::max(report.sdf_max, s.sdf);
    }
    report.flat = (report.sdf_max - report.sdf_min) / report.sdf_min <= rel_tolerance;
    report.leak_ok = report.samples.front().i_out > i_leak;
    report.admissible = report.flat && report.leak_ok;
    return report;
}

BandReport continuity_band(const AttenuatorConfig& cfg, const EnvmDevice& device,
                           double i_leak, double rel_tolerance, int n_samples) {
    validate(device);
    return band_over_currents(cfg, device.read_voltage / device.r_hrs,
                              device.read_voltage / device.r_lrs, i_leak, rel_tolerance,
                              n_samples);
}

void write_band_csv(std::ostream& out, const BandReport& report) {
    out << "i_in_amps,i_out_amps,sdf\n";
    for (const BandSample& s : report.samples) {
        out << si::format_sci(s.i_in) << ',' << si::format_sci(s.i_out) << ','
            << si::format_sci(s.sdf) << '\n';
    }
}

}  // namespace abacus
