/**
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "abacus/cli.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "CLI11.hpp"
#include "abacus/column_sim.hpp"
#include "abacus/config.hpp"
#include "abacus/fanin.hpp"
#include "abacus/units.hpp"

namespace abacus {

namespace {

double parse_si_option(const std::string& text, const char* flag) {
    try {
        return si::parse(text);
    } catch (const std::exception& e) {
        throw std::invalid_argument(std::string(flag) + ": " + e.what());
    }
}

// Accepts repeated flags and comma-separated entries interchangeably.
std::vector<double> parse_si_list(const std::vector<std::string>& items,
                                  const char* flag) {
    std::vector<double> values;
    for (const std::string& item : items) {
        std::string::size_type begin = 0;
        while (begin <= item.size()) {
            const auto comma = item.find(',', begin);
            const std::string piece =
                item.substr(begin, comma == std::string::npos ? std::string::npos
                                                              : comma - begin);
            values.push_back(parse_si_option(piece, flag));
            if (comma == std::string::npos) {
                break;
            }
            begin = comma + 1;
        }
    }
    return values;
}

int write_to(const std::string& path, std::ostream& fallback, std::ostream& err,
             const std::function<void(std::ostream&)>& emit) {
    if (path.empty()) {
        emit(fallback);
        return 0;
    }
    std::ofstream file(path);
    if (!file) {
        err << "error: cannot open output file: " << path << '\n';
        return 1;
    }
    emit(file);
    file.flush();
    if (!file.good()) {
        err << "error: failed writing output file: " << path << '\n';
        return 1;
    }
    return 0;
}

SweepRow make_sweep_row(const NeuronConfig& neuron, const EnvmDevice& device,
                        double sdf, const ReadPulse& pulse, FanInReport report) {
    SweepRow row;
    row.device = device.id;
    row.c_mem = neuron.c_mem;
    row.sdf = sdf;
    row.r_lrs = device.r_lrs;
    row.pulse_width = pulse.width;
    row.pulse_amplitude = pulse.amplitude;
    row.i_leak = neuron.i_leak;
    row.v_th = neuron.v_th;
    row.report = std::move(report);
    return row;
}

void print_fanin_text(std::ostream& out, const NeuronConfig& neuron,
                      const EnvmDevice& device, double sdf, const ReadPulse& pulse,
                      const FanInReport& report) {
    const auto row = [&](std::string_view label, const std::string& value) {
        out << std::left << std::setw(22) << label << value << '\n';
    };
    row("device", device.id);
    row("technology", std::string(to_string(device.tech)));
    row("r_lrs", si::format(device.r_lrs) + " ohm");
    row("sdf", si::format(sdf));
    row("c_mem", si::format(neuron.c_mem) + " F");
    row("v_th", si::format(neuron.v_th) + " V");
    row("i_leak", si::format(neuron.i_leak) + " A");
    row("pulse", si::format(pulse.amplitude) + " V for " + si::format(pulse.width) + " s");
    row("i_input_attenuated", si::format(report.i_input_attenuated) + " A");
    row("delta_v_mem", si::format(report.delta_v_mem) + " V");
    row("fan_in", report.fan_in ? std::to_string(*report.fan_in) : "none");
    row("scale_class",
        report.fan_in ? std::string(to_string(classify_scale(*report.fan_in))) : "-");
    row("max_sdf", report.sdf_cap ? si::format(*report.sdf_cap) : "unbounded");
    const std::string flags = flags_to_string(report.flags);
    row("flags", flags.empty() ? "none" : flags);
    row("assumptions", "zero refractory time; between-pulse leak ignored");
}

struct CheckRow {
    std::string device;
    double sdf = 0.0;
    std::optional<double> cap;
    bool sdf_ok = true;
    bool band_flat = true;
    std::optional<std::int64_t> fan_in;
    bool pass = true;
};

int cmd_check(const ToolConfig& config, const std::string& output, std::ostream& out,
              std::ostream& err) {
    const SaturationCheck saturation = check_saturation(config.attenuator);
    bool all_pass = saturation.pass;

    std::vector<CheckRow> rows;
    for (const EnvmDevice& device : config.devices) {
        CheckRow row;
        row.device = device.id;
        row.sdf = device.default_sdf;
        row.cap = max_sdf(config.pulse.amplitude / device.r_lrs, config.neuron.i_leak);
        row.sdf_ok = !row.cap || row.sdf <= *row.cap;
        row.band_flat =
            continuity_band(config.attenuator, device, config.neuron.i_leak).flat;
        const FanInReport report =
            fan_in(config.neuron, device, row.sdf, config.pulse);
        row.fan_in = report.fan_in;
        row.pass = row.sdf_ok && row.band_flat && row.fan_in.has_value();
        all_pass = all_pass && row.pass;
        rows.push_back(row);
    }

    const int status = write_to(output, out, err, [&](std::ostream& o) {
        o << "saturation: " << (saturation.pass ? "pass" : "FAIL") << " (margin "
          << (saturation.margin >= 0.0 ? "+" : "") << si::format(saturation.margin)
          << " V)\n\n";
        o << std::left << std::setw(12) << "device" << std::setw(10) << "sdf"
          << std::setw(14) << "max_sdf" << std::setw(10) << "band" << std::setw(10)
          << "fan_in" << std::setw(13) << "scale" << "result" << '\n';
        for (const CheckRow& row : rows) {
            o << std::left << std::setw(12) << row.device << std::setw(10)
              << si::format(row.sdf) << std::setw(14)
              << (row.cap ? si::format(*row.cap) : "unbounded") << std::setw(10)
              << (row.band_flat ? "flat" : "NOT_FLAT") << std::setw(10)
              << (row.fan_in ? std::to_string(*row.fan_in) : "none") << std::setw(13)
              << (row.fan_in ? std::string(to_string(classify_scale(*row.fan_in))) : "-")
              << (row.pass ? "pass" : "FAIL") << '\n';
        }
    });
    if (status != 0) {
        return status;
    }
    return all_pass ? 0 : 2;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Fan-in abacus and column simulator for eNVM crossbar read-out"};
    app.require_subcommand(1);

    std::string config_path;
    bool csv = false;
    std::string output_path;
    app.add_option("--config", config_path, "Configuration file (defaults when absent)");
    app.add_flag("--csv", csv, "Emit CSV instead of aligned text where applicable");
    app.add_option("--output", output_path, "Write the primary output to a file");

    auto* fanin_cmd = app.add_subcommand("fanin", "Fan-in for one device operating point");
    std::string fanin_device;
    std::string opt_sdf, opt_ileak, opt_cmem, opt_vth, opt_rlrs, opt_width, opt_amplitude;
    fanin_cmd->add_option("--device", fanin_device, "Device id from the config")->required();
    auto* fanin_sdf = fanin_cmd->add_option("--sdf", opt_sdf, "Override the device SDF");
    auto* fanin_ileak = fanin_cmd->add_option("--ileak", opt_ileak, "Override neuron i_leak");
    auto* fanin_cmem = fanin_cmd->add_option("--cmem", opt_cmem, "Override neuron c_mem");
    auto* fanin_vth = fanin_cmd->add_option("--vth", opt_vth, "Override neuron v_th");
    auto* fanin_rlrs = fanin_cmd->add_option(
        "--rlrs", opt_rlrs, "Override device r_lrs (r_hrs is raised if needed)");
    auto* fanin_width = fanin_cmd->add_option("--pulse-width", opt_width, "Override pulse width");
    auto* fanin_amplitude =
        fanin_cmd->add_option("--pulse-amplitude", opt_amplitude, "Override pulse amplitude");

    auto* sweep_cmd = app.add_subcommand("sweep", "Fan-in table over capacitances and devices");
    std::vector<std::string> sweep_cmem, sweep_sdf, sweep_devices;
    int sweep_rsamples = -1;
    sweep_cmd->add_option("--cmem", sweep_cmem, "Capacitance grid (comma separated)");
    sweep_cmd->add_option("--sdf", sweep_sdf, "SDF per device, or one value for all");
    sweep_cmd->add_option("--device", sweep_devices, "Restrict to these device ids");
    sweep_cmd->add_option("--resistance-samples", sweep_rsamples,
                          "Log-spaced r_lrs..r_hrs rows per device at the neuron c_mem");

    auto* atten_cmd = app.add_subcommand("attenuate", "Attenuator transfer and SDF samples");
    std::string atten_imin, atten_imax;
    int atten_points = kDefaultBandSamples;
    std::vector<std::string> atten_bias;
    atten_cmd->add_option("--imin", atten_imin, "Lowest input current")->required();
    atten_cmd->add_option("--imax", atten_imax, "Highest input current")->required();
    atten_cmd->add_option("--points", atten_points, "Samples per curve");
    atten_cmd->add_option("--bias-divider", atten_bias,
                          "Emit one curve per bias_divider value");

    auto* sim_cmd = app.add_subcommand("simulate", "Time-stepped column simulation");
    std::string sim_device, sim_schedule, sim_dt, sim_sdf, sim_trace, sim_spikes;
    std::int64_t sim_count = 0;
    bool sim_tanh = false;
    auto* sim_device_opt =
        sim_cmd->add_option("--device", sim_device, "Simulate a uniform LRS read train");
    auto* sim_count_opt =
        sim_cmd->add_option("--count", sim_count, "Number of read events for --device");
    auto* sim_schedule_opt =
        sim_cmd->add_option("--schedule", sim_schedule, "Read events from a CSV file");
    auto* sim_sdf_opt = sim_cmd->add_option("--sdf", sim_sdf, "Ideal attenuation factor");
    auto* sim_tanh_flag = sim_cmd->add_flag(
        "--tanh", sim_tanh, "Use the configured tanh attenuator instead of an ideal SDF");
    auto* sim_dt_opt = sim_cmd->add_option("--dt", sim_dt, "Step size (default width/100)");
    sim_cmd->add_option("--trace", sim_trace, "Write the voltage trace CSV here");
    sim_cmd->add_option("--spikes", sim_spikes, "Write the spike list CSV here");
    sim_schedule_opt->excludes(sim_device_opt)->excludes(sim_count_opt);
    sim_tanh_flag->excludes(sim_sdf_opt);

    auto* check_cmd = app.add_subcommand("check", "Per-device constraint report");
    auto* print_cmd =
        app.add_subcommand("print-default-config", "Emit the built-in configuration");

    // Global --config/--csv/--output may also trail the subcommand name.
    for (CLI::App* sub :
         {fanin_cmd, sweep_cmd, atten_cmd, sim_cmd, check_cmd, print_cmd}) {
        sub->fallthrough();
    }

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    }

    try {
        if (app.got_subcommand(print_cmd)) {
            return write_to(output_path, out, err,
                            [&](std::ostream& o) { o << default_config_text(); });
        }

        const ToolConfig config =
            config_path.empty() ? default_config() : load_config_file(config_path);

        if (app.got_subcommand(fanin_cmd)) {
            EnvmDevice device = find_device(config, fanin_device);
            if (fanin_rlrs->count() > 0) {
                device.r_lrs = parse_si_option(opt_rlrs, "--rlrs");
                device.r_hrs = std::max(device.r_hrs, device.r_lrs);
            }
            NeuronConfig neuron = config.neuron;
            if (fanin_ileak->count() > 0) neuron.i_leak = parse_si_option(opt_ileak, "--ileak");
            if (fanin_cmem->count() > 0) neuron.c_mem = parse_si_option(opt_cmem, "--cmem");
            if (fanin_vth->count() > 0) neuron.v_th = parse_si_option(opt_vth, "--vth");
            ReadPulse pulse = config.pulse;
            if (fanin_width->count() > 0) pulse.width = parse_si_option(opt_width, "--pulse-width");
            if (fanin_amplitude->count() > 0) {
                pulse.amplitude = parse_si_option(opt_amplitude, "--pulse-amplitude");
            }
            const double sdf = fanin_sdf->count() > 0 ? parse_si_option(opt_sdf, "--sdf")
                                                      : device.default_sdf;

            const FanInReport report = fan_in(neuron, device, sdf, pulse, config.attenuator);
            const int status = write_to(output_path, out, err, [&](std::ostream& o) {
                if (csv) {
                    write_sweep_csv(o, {make_sweep_row(neuron, device, sdf, pulse, report)});
                } else {
                    print_fanin_text(o, neuron, device, sdf, pulse, report);
                }
            });
            if (status != 0) {
                return status;
            }
            return report.flags == ConstraintFlag::kNone ? 0 : 2;
        }

        if (app.got_subcommand(sweep_cmd)) {
            std::vector<EnvmDevice> devices;
            std::vector<double> sdfs;
            if (sweep_devices.empty()) {
                devices = config.devices;
                sdfs = config.sweep.sdf;
            } else {
                for (const std::string& id : sweep_devices) {
                    devices.push_back(find_device(config, id));
                }
                if (config.sweep.sdf.size() == 1) {
                    sdfs = config.sweep.sdf;
                } else if (config.sweep.sdf.size() == config.devices.size()) {
                    for (const EnvmDevice& selected : devices) {
                        for (std::size_t k = 0; k < config.devices.size(); ++k) {
                            if (config.devices[k].id == selected.id) {
                                sdfs.push_back(config.sweep.sdf[k]);
                                break;
                            }
                        }
                    }
                } else {
                    throw std::invalid_argument(
                        "config sweep sdf list matches neither one entry nor one per device");
                }
            }
            if (!sweep_sdf.empty()) {
                sdfs = parse_si_list(sweep_sdf, "--sdf");
            }

            std::vector<double> cmems = sweep_cmem.empty()
                                            ? config.sweep.c_mem
                                            : parse_si_list(sweep_cmem, "--cmem");
            std::vector<NeuronConfig> neurons;
            for (const double c : cmems) {
                NeuronConfig n = config.neuron;
                n.c_mem = c;
                neurons.push_back(n);
            }

            std::vector<SweepRow> rows = sweep(neurons, devices, sdfs, config.pulse);
            const int rsamples =
                sweep_rsamples >= 0 ? sweep_rsamples : config.sweep.resistance_samples;
            if (rsamples > 0) {
                for (std::size_t d = 0; d < devices.size(); ++d) {
                    const double sdf = sdfs.size() == 1 ? sdfs.front() : sdfs[d];
                    const std::vector<SweepRow> extra = resistance_sweep(
                        config.neuron, devices[d], sdf, config.pulse, rsamples);
                    rows.insert(rows.end(), extra.begin(), extra.end());
                }
            }
            return write_to(output_path, out, err,
                            [&](std::ostream& o) { write_sweep_csv(o, rows); });
        }

        if (app.got_subcommand(atten_cmd)) {
            const double i_min = parse_si_option(atten_imin, "--imin");
            const double i_max = parse_si_option(atten_imax, "--imax");
            if (!(i_min > 0.0) || !(i_max >= i_min)) {
                throw std::invalid_argument("need 0 < imin <= imax");
            }
            if (atten_points < 1) {
                throw std::invalid_argument("--points must be >= 1");
            }
            std::vector<double> dividers = parse_si_list(atten_bias, "--bias-divider");

            const auto sample_current = [&](int k) {
                if (atten_points == 1) {
                    return i_min;
                }
                const double f = static_cast<double>(k) / (atten_points - 1);
                const double i = k == 0 ? i_min
                                 : k == atten_points - 1
                                     ? i_max
                                     : std::exp(std::log(i_min) +
                                                f * (std::log(i_max) - std::log(i_min)));
                return std::clamp(i, i_min, i_max);
            };
            const auto emit_curve = [&](std::ostream& o, const AttenuatorConfig& cfg,
                                        const char* prefix) {
                for (int k = 0; k < atten_points; ++k) {
                    const double i = sample_current(k);
                    o << prefix << si::format_sci(i) << ','
                      << si::format_sci(output_current(cfg, i)) << ','
                      << si::format_sci(scaling_down_factor(cfg, i)) << '\n';
                }
            };

            return write_to(output_path, out, err, [&](std::ostream& o) {
                if (dividers.empty()) {
                    validate(config.attenuator);
                    o << "i_in_amps,i_out_amps,sdf\n";
                    emit_curve(o, config.attenuator, "");
                    return;
                }
                o << "bias_divider,i_in_amps,i_out_amps,sdf\n";
                for (const double divider : dividers) {
                    AttenuatorConfig cfg = config.attenuator;
                    cfg.bias_divider = divider;
                    validate(cfg);
                    const std::string prefix = si::format(divider) + ",";
                    emit_curve(o, cfg, prefix.c_str());
                }
            });
        }

        if (app.got_subcommand(sim_cmd)) {
            SpikeSchedule schedule;
            std::optional<FanInReport> analytic;
            double ideal_sdf = 1.0;
            if (sim_schedule_opt->count() > 0) {
                std::ifstream file(sim_schedule);
                if (!file) {
                    throw std::invalid_argument("cannot open schedule file: " + sim_schedule);
                }
                schedule = read_schedule_csv(file);
                if (sim_sdf_opt->count() > 0) {
                    ideal_sdf = parse_si_option(sim_sdf, "--sdf");
                }
            } else {
                if (sim_device_opt->count() == 0 || sim_count_opt->count() == 0) {
                    throw std::invalid_argument("need --device and --count, or --schedule");
                }
                const EnvmDevice& device = find_device(config, sim_device);
                if (sim_count < 1) {
                    throw std::invalid_argument("--count must be >= 1");
                }
                schedule = uniform_lrs_schedule(device, config.pulse, sim_count);
                ideal_sdf = sim_sdf_opt->count() > 0 ? parse_si_option(sim_sdf, "--sdf")
                                                     : device.default_sdf;
                if (!sim_tanh) {
                    analytic = fan_in(config.neuron, device, ideal_sdf, config.pulse);
                }
            }

            const AttenuationStage stage =
                sim_tanh ? AttenuationStage{config.attenuator}
                         : AttenuationStage{IdealAttenuation{ideal_sdf}};
            const double dt = sim_dt_opt->count() > 0 ? parse_si_option(sim_dt, "--dt")
                                                      : default_dt(schedule);
            const SimulationTrace trace =
                simulate_column(config.neuron, stage, schedule, dt);

            if (!sim_trace.empty()) {
                const int status = write_to(sim_trace, out, err, [&](std::ostream& o) {
                    write_trace_csv(o, trace);
                });
                if (status != 0) {
                    return status;
                }
            }
            if (!sim_spikes.empty()) {
                const int status = write_to(sim_spikes, out, err, [&](std::ostream& o) {
                    write_spikes_csv(o, trace);
                });
                if (status != 0) {
                    return status;
                }
            }

            return write_to(output_path, out, err, [&](std::ostream& o) {
                const auto row = [&](std::string_view label, const std::string& value) {
                    o << std::left << std::setw(22) << label << value << '\n';
                };
                row("events", std::to_string(schedule.events.size()));
                row("dt", si::format(dt) + " s");
                row("attenuation",
                    sim_tanh ? "tanh attenuator" : "ideal sdf " + si::format(ideal_sdf));
                const auto fired_at = first_fire_event_index(trace);
                if (fired_at) {
                    row("first_fire",
                        "during event " + std::to_string(*fired_at) + " (after " +
                            std::to_string(*trace.first_fire_after_n_inputs) +
                            " completed inputs)");
                } else {
                    row("first_fire", "none (no fire within " +
                                          std::to_string(schedule.events.size()) +
                                          " events)");
                }
                row("total_fires", std::to_string(trace.spikes.size()));
                if (analytic) {
                    row("analytic_fan_in", analytic->fan_in
                                               ? std::to_string(*analytic->fan_in)
                                               : "none (leak dominated)");
                    if (analytic->fan_in && fired_at) {
                        const std::int64_t diff = *fired_at - *analytic->fan_in;
                        row("difference",
                            (diff >= 0 ? "+" : "") + std::to_string(diff));
                    }
                }
            });
        }

        if (app.got_subcommand(check_cmd)) {
            return cmd_check(config, output_path, out, err);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }

    err << "error: no subcommand selected\n";
    return 1;
}

}  // namespace abacus
