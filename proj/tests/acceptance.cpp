/**
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

// Acceptance gate for the fan-in toolkit. Each criterion prints exactly one
// PASS/FAIL line; the process exits non-zero if any criterion fails.

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "abacus/attenuator.hpp"
#include "abacus/cli.hpp"
#include "abacus/column_sim.hpp"
#include "abacus/config.hpp"
#include "abacus/device.hpp"
#include "abacus/fanin.hpp"
#include "abacus/neuron.hpp"
#include "abacus/pulse.hpp"
#include "abacus/units.hpp"

namespace {

using namespace abacus;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

NeuronConfig reference_neuron() {
    NeuronConfig n;
    n.c_mem = kCmemPresets[0];
    n.v_dd = 1.8;
    n.v_th = 0.9;
    return n;
}

ReadPulse reference_pulse() {
    return ReadPulse{0.1, 1e-6, 0.0};
}

// criterion 1: the shipped device presets round-trip through the sweep to
// the reference fan-in triple {3560, 350, 88200} at 864.5 fF, within the
// flooring tolerance of one count, in under a second.
bool criterion_1() {
    const auto start = Clock::now();
    const std::vector<SweepRow> rows =
        sweep({reference_neuron()}, default_devices(), {6000.0, 9000.0, 1000.0},
              reference_pulse());
    const double elapsed = seconds_since(start);

    const std::int64_t expected[3] = {3560, 350, 88200};
    std::string detail;
    bool ok = rows.size() == 3 && elapsed < 1.0;
    for (std::size_t k = 0; ok && k < 3; ++k) {
        if (!rows[k].report.fan_in ||
            std::llabs(*rows[k].report.fan_in - expected[k]) > 1) {
            ok = false;
        }
    }
    if (ok) {
        std::ostringstream d;
        d << "fan-in " << *rows[0].report.fan_in << "/" << *rows[1].report.fan_in
          << "/" << *rows[2].report.fan_in << " in " << si::format(elapsed) << " s";
        detail = d.str();
    } else {
        detail = "reference sweep deviated or exceeded 1 s";
    }
    std::cout << "criterion 1 (reference abacus round-trip): "
              << (ok ? "PASS" : "FAIL") << " - " << detail << '\n';
    return ok;
}

// criterion 2: over randomized feasible operating points spanning all four
// capacitance presets and zero/finite leak, the simulated first-fire event
// index equals the analytic fan-in + 1 within one event.
bool criterion_2() {
    const auto start = Clock::now();
    std::mt19937_64 rng(0xacce55ed2ull);
    std::uniform_real_distribution<double> u(0.0, 1.0);

    int accepted = 0;
    int worst_gap = 0;
    bool ok = true;
    for (int attempt = 0; attempt < 10000 && accepted < 60; ++attempt) {
        NeuronConfig n;
        n.c_mem = kCmemPresets[attempt % 4];
        n.v_dd = 1.8;
        n.v_th = 0.2 + 1.3 * u(rng);
        const ReadPulse pulse{0.05 + 0.2 * u(rng), 1e-6, 0.0};
        EnvmDevice d;
        d.id = "r";
        d.r_lrs = std::exp(std::log(1e3) + u(rng) * std::log(1e7 / 1e3));
        d.r_hrs = 10.0 * d.r_lrs;
        d.read_voltage = pulse.amplitude;

        const double i_full = pulse.amplitude / d.r_lrs;
        double sdf = 1.0 + u(rng) * 8999.0;
        if (attempt % 2 == 1) {
            n.i_leak = i_full * (1e-4 + 0.5 * u(rng));
            const double cap = i_full / n.i_leak;
            sdf = 1.0 + u(rng) * (0.8 * cap - 1.0);
            if (!(sdf >= 1.0)) {
                continue;
            }
        }

        const FanInReport analytic = fan_in(n, d, sdf, pulse);
        if (!analytic.fan_in || *analytic.fan_in < 1 || *analytic.fan_in > 3000) {
            continue;
        }
        const std::int64_t want = *analytic.fan_in + 1;

        const SpikeSchedule schedule =
            uniform_lrs_schedule(d, pulse, *analytic.fan_in + 3);
        const SimulationTrace trace = simulate_column(
            n, IdealAttenuation{sdf}, schedule, pulse.width / 100.0);
        const auto got = first_fire_event_index(trace);
        if (!got || std::llabs(*got - want) > 1) {
            ok = false;
            break;
        }
        worst_gap = std::max(worst_gap, static_cast<int>(std::llabs(*got - want)));
        ++accepted;
    }
    const double elapsed = seconds_since(start);
    ok = ok && accepted >= 50 && elapsed < 60.0;

    std::cout << "criterion 2 (simulator vs analytic fan-in): "
              << (ok ? "PASS" : "FAIL") << " - " << accepted
              << " randomized configs, worst gap " << worst_gap << " event(s), "
              << si::format(elapsed) << " s\n";
    return ok;
}

// criterion 3: in the linear regime (tanh argument <= 0.05) the measured SDF
// stays within 0.1% of the analytic small-signal limit; deep in saturation
// (argument >= 3) the output reaches at least 99.5% of the bias current.
bool criterion_3() {
    std::mt19937_64 rng(0x11e4a7ull);
    std::uniform_real_distribution<double> u(0.0, 1.0);

    int linear_points = 0;
    int saturated_points = 0;
    double worst_linear = 0.0;
    double worst_saturation = 1.0;
    bool ok = true;

    for (int k = 0; k < 600 && ok; ++k) {
        AttenuatorConfig cfg;
        cfg.i_b = std::exp(std::log(1e-10) + u(rng) * std::log(1e-7 / 1e-10));
        cfg.kappa_n = 0.5 + 0.5 * u(rng);
        cfg.u_t = 0.02 + 0.01 * u(rng);
        cfg.r_n9 = std::exp(std::log(1e3) + u(rng) * std::log(1e6 / 1e3));
        cfg.bias_divider = 0.25 + 0.75 * u(rng);

        const double x = 1e-4 + (0.05 - 1e-4) * u(rng);
        const double i_in =
            x * 4.0 * cfg.u_t / (cfg.kappa_n * cfg.r_n9 * cfg.bias_divider);
        const double limit = sdf_small_signal_limit(cfg);
        const double deviation =
            std::abs(scaling_down_factor(cfg, i_in) - limit) / limit;
        worst_linear = std::max(worst_linear, deviation);
        ok = deviation <= 1e-3;
        ++linear_points;
    }

    for (int k = 0; k < 500 && ok; ++k) {
        AttenuatorConfig cfg;
        cfg.i_b = std::exp(std::log(1e-10) + u(rng) * std::log(1e-7 / 1e-10));
        cfg.kappa_n = 0.5 + 0.5 * u(rng);
        cfg.u_t = 0.02 + 0.01 * u(rng);
        cfg.r_n9 = std::exp(std::log(1e3) + u(rng) * std::log(1e6 / 1e3));
        cfg.bias_divider = 0.25 + 0.75 * u(rng);

        const double x = 3.0 + 47.0 * u(rng);
        const double i_in =
            x * 4.0 * cfg.u_t / (cfg.kappa_n * cfg.r_n9 * cfg.bias_divider);
        const double fraction = output_current(cfg, i_in) / cfg.i_b;
        worst_saturation = std::min(worst_saturation, fraction);
        ok = fraction >= 0.995;
        ++saturated_points;
    }

    std::cout << "criterion 3 (attenuator regime properties): "
              << (ok ? "PASS" : "FAIL") << " - " << linear_points
              << " linear points (worst SDF deviation "
              << si::format_sci(worst_linear) << "), " << saturated_points
              << " saturation points (worst i_out/i_b "
              << si::format(worst_saturation) << ")\n";
    return ok;
}

// criterion 4: the simulated frequency curve agrees with the analytic firing
// frequency within 0.1% for randomized neurons, and the analytic
// frequency/current ratio is flat to 1e-12 relative across a decade when
// leak and refractory time are zero.
bool criterion_4() {
    std::mt19937_64 rng(0xf4e9ull);
    std::uniform_real_distribution<double> u(0.0, 1.0);

    bool ok = true;
    double worst_sim = 0.0;
    int configs = 0;
    for (int k = 0; k < 20 && ok; ++k) {
        NeuronConfig n;
        n.c_mem = std::exp(std::log(1e-15) + u(rng) * std::log(1e-11 / 1e-15));
        n.v_dd = 2.0;
        n.v_th = 0.2 + 1.3 * u(rng);
        n.v_reset = 0.5 * n.v_th * u(rng);
        const double i_base =
            std::exp(std::log(1e-10) + u(rng) * std::log(1e-6 / 1e-10));
        if (k % 2 == 1) {
            n.i_leak = i_base * 0.5 * u(rng);
        }
        if (k % 3 == 0) {
            n.t_refractory = time_to_fire(n, i_base) * (0.1 + 2.0 * u(rng));
        }

        const std::vector<double> currents = {i_base, 2.0 * i_base, 5.0 * i_base};
        const std::vector<FrequencyPoint> points = frequency_curve(n, currents);
        for (std::size_t p = 0; p < points.size() && ok; ++p) {
            const double analytic = firing_frequency(n, currents[p]);
            const double deviation =
                std::abs(points[p].frequency - analytic) / analytic;
            worst_sim = std::max(worst_sim, deviation);
            ok = deviation <= 1e-3;
        }
        ++configs;
    }

    double worst_ratio = 0.0;
    if (ok) {
        NeuronConfig n;
        n.c_mem = 864.5e-15;
        n.v_dd = 1.8;
        n.v_th = 0.9;
        const double i0 = 1e-10;
        const double base = firing_frequency(n, i0) / i0;
        for (const double scale : {1.2, 2.0, 3.7, 5.0, 8.1, 10.0}) {
            const double i = i0 * scale;
            const double ratio = firing_frequency(n, i) / i;
            worst_ratio = std::max(worst_ratio, std::abs(ratio / base - 1.0));
        }
        ok = worst_ratio <= 1e-12;
    }

    std::cout << "criterion 4 (neuron frequency analytics): "
              << (ok ? "PASS" : "FAIL") << " - " << configs
              << " simulated configs (worst deviation " << si::format_sci(worst_sim)
              << "), decade ratio spread " << si::format_sci(worst_ratio) << "\n";
    return ok;
}

// criterion 5: the leak constraint trips exactly once as the SDF sweeps past
// the admissible maximum, and the saturation margin matches the direct bias
// inequality bit for bit, including the sign change.
bool criterion_5() {
    std::mt19937_64 rng(0xc0157ull);
    std::uniform_real_distribution<double> u(0.0, 1.0);

    bool ok = true;
    int onsets_checked = 0;
    for (int k = 0; k < 20 && ok; ++k) {
        NeuronConfig n;
        n.c_mem = kCmemPresets[k % 4];
        n.v_dd = 1.8;
        n.v_th = 0.9;
        const ReadPulse pulse{0.1, 1e-6, 0.0};
        EnvmDevice d;
        d.id = "r";
        d.r_lrs = std::exp(std::log(1e3) + u(rng) * std::log(1e6 / 1e3));
        d.r_hrs = 10.0 * d.r_lrs;
        d.read_voltage = 0.1;
        const double i_full = pulse.amplitude / d.r_lrs;
        n.i_leak = i_full * (0.001 + 0.1 * u(rng));
        const double cap = i_full / n.i_leak;

        int transitions = 0;
        bool prev = false;
        for (int s = 0; s < 400; ++s) {
            const double sdf =
                1.0 + (2.0 * cap - 1.0) * static_cast<double>(s) / 399.0;
            const FanInReport report = fan_in(n, d, sdf, pulse);
            const bool dominated =
                has_flag(report.flags, ConstraintFlag::kLeakDominated);
            if (dominated != prev) {
                ++transitions;
                if (!dominated) {
                    ok = false;  // the flag may never clear again
                }
                prev = dominated;
            }
        }
        ok = ok && transitions == 1 && prev;
        ++onsets_checked;
    }

    int margins_checked = 0;
    for (int k = 0; k < 100 && ok; ++k) {
        AttenuatorConfig cfg;
        cfg.i_b = 8.2e-9;
        cfg.kappa_n = 0.5 + 0.5 * u(rng);
        cfg.kappa_n20 = 0.5 + 0.5 * u(rng);
        cfg.u_t = 0.02 + 0.01 * u(rng);
        cfg.v_d_n10 = 0.5 * u(rng);
        cfg.v_d_n11 = 0.5 * u(rng);
        cfg.v_g_n20 = 0.5 * u(rng);

        const SaturationCheck check = check_saturation(cfg);
        const double direct =
            (cfg.kappa_n * (cfg.v_d_n10 + cfg.v_d_n11) -
             cfg.kappa_n20 * cfg.v_g_n20) / 2.0 - 4.0 * cfg.u_t;
        ok = check.margin == direct && check.pass == (direct > 0.0);
        ++margins_checked;
    }
    if (ok) {
        // An exactly-zero margin is on the failing side of the inequality.
        AttenuatorConfig boundary;
        boundary.kappa_n = 1.0;
        boundary.v_g_n20 = 0.0;
        boundary.v_d_n10 = 4.0 * boundary.u_t;
        boundary.v_d_n11 = 4.0 * boundary.u_t;
        const SaturationCheck check = check_saturation(boundary);
        ok = check.margin == 0.0 && !check.pass;
    }

    std::cout << "criterion 5 (constraint machinery): " << (ok ? "PASS" : "FAIL")
              << " - " << onsets_checked << " single-onset sweeps, "
              << margins_checked << " exact margin evaluations\n";
    return ok;
}

// criterion 6: the reference OxRAM point lands in the LARGE class and a
// derived 50-synapse operating point lands in SMALL.
bool criterion_6() {
    const NeuronConfig n = reference_neuron();
    const ReadPulse pulse = reference_pulse();
    const EnvmDevice oxram = default_devices()[1];

    const FanInReport reference = fan_in(n, oxram, 9000.0, pulse);
    bool ok = reference.fan_in && *reference.fan_in == 350 &&
              classify_scale(*reference.fan_in) == ScaleClass::kLarge;

    std::int64_t small_fan_in = 0;
    if (ok) {
        EnvmDevice derived;
        derived.id = "derived";
        derived.r_lrs = derive_lrs_from_fanin(50, 9000.0, n, pulse);
        derived.r_hrs = 10.0 * derived.r_lrs;
        derived.read_voltage = pulse.amplitude;
        const FanInReport small = fan_in(n, derived, 9000.0, pulse);
        ok = small.fan_in && *small.fan_in == 50 &&
             classify_scale(*small.fan_in) == ScaleClass::kSmall;
        small_fan_in = small.fan_in ? *small.fan_in : -1;
    }

    std::cout << "criterion 6 (scale classification): " << (ok ? "PASS" : "FAIL")
              << " - reference point LARGE, derived fan-in " << small_fan_in
              << " SMALL\n";
    return ok;
}

std::string run_to_string(const std::vector<std::string>& args, int* code = nullptr) {
    std::ostringstream out;
    std::ostringstream err;
    const int status = run_cli(args, out, err);
    if (code != nullptr) {
        *code = status;
    }
    return out.str();
}

std::vector<std::string> split_cells(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    for (std::size_t pos = 0; pos <= line.size(); ++pos) {
        if (pos == line.size() || line[pos] == ',') {
            cells.push_back(line.substr(start, pos - start));
            start = pos + 1;
        }
    }
    return cells;
}

std::optional<std::string> capture_binary(const std::string& command) {
    FILE* pipe = popen(command.c_str(), "r");
    if (pipe == nullptr) {
        return std::nullopt;
    }
    std::string bytes;
    char buffer[4096];
    std::size_t got = 0;
    while ((got = fread(buffer, 1, sizeof buffer, pipe)) > 0) {
        bytes.append(buffer, got);
    }
    if (pclose(pipe) != 0) {
        return std::nullopt;
    }
    return bytes;
}

// criterion 7: repeated runs are byte-identical, and the emitted sweep CSV
// re-parses into inputs whose recomputed fan-in matches the emitted column.
bool criterion_7() {
    bool ok = true;
    const std::vector<std::vector<std::string>> commands = {
        {"sweep", "--resistance-samples", "6"},
        {"--csv", "fanin", "--device", "pcm"},
        {"simulate", "--device", "oxram", "--count", "360"},
        {"attenuate", "--imin", "1n", "--imax", "1u", "--points", "64"},
        {"print-default-config"},
    };
    for (const auto& command : commands) {
        if (run_to_string(command) != run_to_string(command)) {
            ok = false;
        }
    }

    int rows_checked = 0;
    if (ok) {
        const std::string csv = run_to_string({"sweep", "--resistance-samples", "6"});
        std::istringstream in(csv);
        std::string line;
        std::getline(in, line);  // header
        ok = line == std::string(kSweepCsvHeader);
        while (ok && std::getline(in, line)) {
            const std::vector<std::string> cells = split_cells(line);
            if (cells.size() != 12) {
                ok = false;
                break;
            }
            NeuronConfig n;
            n.c_mem = si::parse(cells[1]);
            n.i_leak = si::parse(cells[6]);
            n.v_th = si::parse(cells[7]);
            n.v_dd = std::max(1.8, n.v_th);
            EnvmDevice d;
            d.id = cells[0];
            d.r_lrs = si::parse(cells[3]);
            d.r_hrs = d.r_lrs;
            d.read_voltage = si::parse(cells[5]);
            const ReadPulse pulse{si::parse(cells[5]), si::parse(cells[4]), 0.0};

            const FanInReport report = fan_in(n, d, si::parse(cells[2]), pulse);
            const std::string fan_cell =
                report.fan_in ? std::to_string(*report.fan_in) : "";
            const std::string scale_cell =
                report.fan_in ? std::string(to_string(classify_scale(*report.fan_in)))
                              : "";
            ok = si::format_sci(report.delta_v_mem) == cells[8] &&
                 fan_cell == cells[9] && scale_cell == cells[10] &&
                 flags_to_string(report.flags) == cells[11];
            ++rows_checked;
        }
        ok = ok && rows_checked >= 30;
    }

    std::string binary_note = "in-process only";
    if (ok) {
        if (const char* bin = std::getenv("ENVM_ABACUS_BIN")) {
            const std::string command =
                std::string("'") + bin + "' sweep --resistance-samples 6 2>/dev/null";
            const auto first = capture_binary(command);
            const auto second = capture_binary(command);
            const std::string in_process =
                run_to_string({"sweep", "--resistance-samples", "6"});
            ok = first && second && *first == *second && *first == in_process;
            binary_note = ok ? "binary re-run byte-identical" : "binary re-run diverged";
        }
    }

    std::cout << "criterion 7 (determinism and CSV round-trip): "
              << (ok ? "PASS" : "FAIL") << " - " << rows_checked
              << " rows recomputed, " << binary_note << "\n";
    return ok;
}

bool guarded(bool (*criterion)(), int index) {
    try {
        return criterion();
    } catch (const std::exception& e) {
        std::cout << "criterion " << index << ": FAIL - unexpected error: " << e.what()
                  << "\n";
        return false;
    }
}

}  // namespace

int main() {
    bool all = true;
    all = guarded(criterion_1, 1) && all;
    all = guarded(criterion_2, 2) && all;
    all = guarded(criterion_3, 3) && all;
    all = guarded(criterion_4, 4) && all;
    all = guarded(criterion_5, 5) && all;
    all = guarded(criterion_6, 6) && all;
    all = guarded(criterion_7, 7) && all;
    std::cout << (all ? "all acceptance criteria passed"
                      : "ACCEPTANCE FAILURES PRESENT")
              << std::endl;
    return all ? 0 : 1;
}
