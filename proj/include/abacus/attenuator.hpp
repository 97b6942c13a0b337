/**
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "abacus/device.hpp"

namespace abacus {

// Behavioral parameters of the subthreshold tanh current attenuator.
// bias_divider folds the source-bias adjustment of the input pair into a
// single multiplicative factor on the input current.
struct AttenuatorConfig {
    double i_b = 8.2e-9;
    double kappa_n = 0.7;
    double u_t = 0.02585;
    double r_n9 = 2e3;
    double bias_divider = 1.0;
    // Operating-point voltages and slope factor for the saturation check.
    double v_d_n10 = 0.3;
    double v_d_n11 = 0.3;
    double v_g_n20 = 0.2;
    double kappa_n20 = 0.7;
};

// Throws std::invalid_argument when a field is outside its admissible range.
void validate(const AttenuatorConfig& cfg);

// Argument of the tanh transfer curve: kappa_n * r_n9 * bias_divider * i_in
// divided by 4 * u_t.
double tanh_argument(const AttenuatorConfig& cfg, double i_in);

// i_b * tanh(tanh_argument). Strictly below i_b for finite input.
// Throws std::domain_error for negative or non-finite input current.
double output_current(const AttenuatorConfig& cfg, double i_in);

// i_in / output_current(i_in). At i_in == 0 returns the analytic
// small-signal limit instead of 0/0. Negative input throws std::domain_error.
double scaling_down_factor(const AttenuatorConfig& cfg, double i_in);

// 4 * u_t / (i_b * kappa_n * r_n9 * bias_divider), the infimum of the SDF.
double sdf_small_signal_limit(const AttenuatorConfig& cfg);

struct SaturationCheck {
    bool pass = false;
    // Signed headroom in volts; positive iff the check passes.
    double margin = 0.0;
};

// Strict inequality: 4 u_t < (kappa_n (v_d_n10 + v_d_n11) - kappa_n20
// v_g_n20) / 2. A zero margin fails.
SaturationCheck check_saturation(const AttenuatorConfig& cfg);

// Largest SDF for which the attenuated minimum read current still exceeds
// the neuron leak: i_input_min / i_leak. Zero leak makes the bound
// unbounded (nullopt). Throws std::domain_error when i_input_min <= 0 or
// i_leak < 0.
std::optional<double> max_sdf(double i_input_min, double i_leak);

struct BandSample {
    double i_in = 0.0;
    double i_out = 0.0;
    double sdf = 0.0;
};

struct BandReport {
    std::vector<BandSample> samples;
    double sdf_min = 0.0;
    double sdf_max = 0.0;
    // (sdf_max - sdf_min) / sdf_min <= rel_tolerance.
    bool flat = false;
    // Attenuated output at the band minimum exceeds i_leak.
    bool leak_ok = false;
    bool admissible = false;
};

inline constexpr double kDefaultBandTolerance = 0.05;
inline constexpr int kDefaultBandSamples = 256;

// Samples input current logarithmically between the two endpoints
// (order-insensitive). Equal endpoints produce a single-sample band that is
// flat by definition. Throws std::invalid_argument for rel_tolerance <= 0,
// n_samples < 2, or non-positive endpoints.
BandReport band_over_currents(const AttenuatorConfig& cfg, double i_lo, double i_hi,
                              double i_leak, double rel_tolerance = kDefaultBandTolerance,
                              int n_samples = kDefaultBandSamples);

// Band over the device read range [read_voltage / r_hrs, read_voltage /
// r_lrs].
BandReport continuity_band(const AttenuatorConfig& cfg, const EnvmDevice& device,
                           double i_leak, double rel_tolerance = kDefaultBandTolerance,
                           int n_samples = kDefaultBandSamples);

// One row per sample: i_in_amps,i_out_amps,sdf.
void write_band_csv(std::ostream& out, const BandReport& report);

}  // namespace abacus
