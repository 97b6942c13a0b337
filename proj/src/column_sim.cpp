/**
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "abacus/column_sim.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>

#include "abacus/fanin.hpp"
#include "abacus/units.hpp"

namespace abacus {

double attenuate(const AttenuationStage& stage, double i_syn) {
    if (const auto* ideal = std::get_if<IdealAttenuation>(&stage)) {
        return i_syn / ideal->sdf;
    }
    return output_current(std::get<AttenuatorConfig>(stage), i_syn);
}

void validate(const SpikeSchedule& schedule) {
    for (std::size_t k = 0; k < schedule.events.size(); ++k) {
        const SpikeEvent& e = schedule.events[k];
        if (!std::isfinite(e.t_start) || e.t_start < 0.0) {
            throw std::invalid_argument("schedule event start times must be >= 0");
        }
        validate(e.pulse);
        if (!(e.resistance > 0.0) || !std::isfinite(e.resistance)) {
            throw std::invalid_argument("schedule event resistance must be positive");
        }
        if (k > 0) {
            const SpikeEvent& prev = schedule.events[k - 1];
            const double prev_end = prev.t_start + prev.pulse.width;
            // Rounding slack keeps k * period trains valid.
            const double slack = 1e-9 * prev.pulse.width;
            if (e.t_start < prev.t_start || e.t_start < prev_end - slack) {
                throw std::invalid_argument(
                    "schedule events must be sorted and non-overlapping");
            }
        }
    }
}

SpikeSchedule uniform_lrs_schedule(const EnvmDevice& device, const ReadPulse& pulse,
                                   std::int64_t count) {
    validate(device);
    validate(pulse);
    if (count < 1) {
        throw std::invalid_argument("schedule needs at least one event");
    }
    const double period = pulse_period(pulse);
    SpikeSchedule schedule;
    schedule.events.reserve(static_cast<std::size_t>(count));
    for (std::int64_t k = 0; k < count; ++k) {
        schedule.events.push_back(
            SpikeEvent{static_cast<double>(k) * period, pulse, device.r_lrs});
    }
    return schedule;
}

double default_dt(const SpikeSchedule& schedule) {
    if (schedule.events.empty()) {
        throw std::invalid_argument("schedule is empty");
    }
    double width = schedule.events.front().pulse.width;
    for (const SpikeEvent& e : schedule.events) {
        width = std::min(width, e.pulse.width);
    }
    return width / 100.0;
}

SimulationTrace simulate_column(const NeuronConfig& neuron, const AttenuationStage& stage,
                                const SpikeSchedule& schedule, double dt) {
    validate(neuron);
    validate(schedule);
    if (schedule.events.empty()) {
        throw std::invalid_argument("schedule is empty");
    }
    if (!(dt > 0.0) || !std::isfinite(dt)) {
        throw std::invalid_argument("dt must be positive");
    }
    if (const auto* ideal = std::get_if<IdealAttenuation>(&stage)) {
        if (!(ideal->sdf >= 1.0) || !std::isfinite(ideal->sdf)) {
            throw std::invalid_argument("ideal attenuation sdf must be >= 1");
        }
    } else {
        validate(std::get<AttenuatorConfig>(stage));
    }

    const SpikeEvent& last = schedule.events.back();
    const double t_end = last.t_start + last.pulse.width;
    const double steps_needed = std::ceil(t_end / dt);
    if (!(steps_needed < 1e10)) {
        throw std::invalid_argument("dt is too small for this schedule");
    }
    const std::int64_t n_steps = std::max<std::int64_t>(1, static_cast<std::int64_t>(steps_needed));
    const std::int64_t stride = std::max<std::int64_t>(1, (n_steps + kMaxTraceSamples - 1) / kMaxTraceSamples);

    SimulationTrace trace;
    trace.samples.reserve(
        static_cast<std::size_t>(std::min(n_steps / stride + 2, kMaxTraceSamples + 2)));

    NeuronState state;
    std::size_t next_event = 0;
    std::int64_t completed = 0;
    for (std::int64_t i = 0; i < n_steps; ++i) {
        const double t = static_cast<double>(i) * dt;
        state.t = t;

        while (next_event < schedule.events.size() &&
               schedule.events[next_event].t_start +
                       schedule.events[next_event].pulse.width <=
                   t) {
            ++next_event;
            ++completed;
        }
        double i_in = 0.0;
        if (next_event < schedule.events.size() &&
            t >= schedule.events[next_event].t_start) {
            const SpikeEvent& e = schedule.events[next_event];
            i_in = attenuate(stage, e.pulse.amplitude / e.resistance);
        }

        if (i % stride == 0) {
            trace.samples.push_back(TraceSample{t, state.v_mem, i_in});
        }

        const StepResult result = step(state, neuron, i_in, dt);
        state = result.state;
        if (result.fired) {
            trace.spikes.push_back(FireRecord{state.t, completed});
            if (!trace.first_fire_after_n_inputs) {
                trace.first_fire_after_n_inputs = completed;
            }
        }
    }
    trace.samples.push_back(
        TraceSample{static_cast<double>(n_steps) * dt, state.v_mem, 0.0});
    return trace;
}

std::optional<std::int64_t> first_fire_event_index(const SimulationTrace& trace) {
    if (!trace.first_fire_after_n_inputs) {
        return std::nullopt;
    }
    return *trace.first_fire_after_n_inputs + 1;
}

std::vector<FrequencyPoint> frequency_curve(const NeuronConfig& neuron,
                                            const std::vector<double>& currents) {
    validate(neuron);
    if (neuron.leak_mode != LeakMode::kConstantCurrent) {
        throw std::invalid_argument("frequency curve requires constant-current leak mode");
    }

    constexpr std::int64_t kSpikesPerPoint = 12;
    std::vector<FrequencyPoint> points;
    points.reserve(currents.size());
    for (const double i_in : currents) {
        if (!(i_in >= 0.0) || !std::isfinite(i_in)) {
            throw std::invalid_argument("drive currents must be >= 0 and finite");
        }
        if (i_in <= neuron.i_leak) {
            points.push_back(FrequencyPoint{i_in, 0.0});
            continue;
        }

        const double ttf = time_to_fire(neuron, i_in);
        const double dt = ttf / 1e4;
        const double interval = ttf + neuron.t_refractory;
        const std::int64_t step_budget = static_cast<std::int64_t>(
            std::ceil(static_cast<double>(kSpikesPerPoint + 1) * (interval / dt + 2.0)));

        NeuronState state;
        double first_fire = 0.0;
        double last_fire = 0.0;
        std::int64_t fires = 0;
        for (std::int64_t s = 0; s < step_budget && fires < kSpikesPerPoint; ++s) {
            const StepResult result = step(state, neuron, i_in, dt);
            state = result.state;
            if (result.fired) {
                if (fires == 0) {
                    first_fire = state.t;
                }
                last_fire = state.t;
                ++fires;
            }
        }
        if (fires < 2) {
            throw std::logic_error("constant drive failed to produce a spike train");
        }
        points.push_back(FrequencyPoint{
            i_in, static_cast<double>(fires - 1) / (last_fire - first_fire)});
    }
    return points;
}

LeakGapReport leak_gap_report(const NeuronConfig& neuron, double sdf,
                              const EnvmDevice& device, const ReadPulse& pulse,
                              double duty) {
    if (!(duty > 0.0) || !(duty <= 1.0)) {
        throw std::invalid_argument("duty must be in (0, 1]");
    }

    const FanInReport analytic = fan_in(neuron, device, sdf, pulse);
    if (!analytic.fan_in) {
        throw std::runtime_error("leak-dominated configuration never fires");
    }
    if (*analytic.fan_in < 1) {
        throw std::runtime_error("fan-in below one; a single pulse overshoots the threshold");
    }

    ReadPulse spaced = pulse;
    spaced.period = pulse.width / duty;
    if (spaced.period < pulse.width) {
        spaced.period = pulse.width;
    }
    const double net_per_period =
        analytic.delta_v_mem -
        neuron.i_leak * (spaced.period - pulse.width) / neuron.c_mem;
    if (!(net_per_period > 0.0)) {
        throw std::runtime_error("between-pulse leak cancels the per-pulse increment");
    }

    const double events_needed =
        std::ceil((neuron.v_th - neuron.v_reset) / net_per_period) + 16.0;
    const double dt = pulse.width / 100.0;
    if (events_needed * (spaced.period / dt) > 1e9) {
        throw std::runtime_error("gap analysis would exceed the step budget");
    }

    const SpikeSchedule schedule = uniform_lrs_schedule(
        device, spaced, static_cast<std::int64_t>(events_needed));
    const SimulationTrace trace =
        simulate_column(neuron, IdealAttenuation{sdf}, schedule, dt);
    const auto fired_at = first_fire_event_index(trace);
    if (!fired_at) {
        throw std::logic_error("gap analysis schedule ended before the first fire");
    }

    LeakGapReport report;
    report.analytic_fan_in = *analytic.fan_in;
    report.first_fire_events = *fired_at;
    report.gap = static_cast<double>(report.first_fire_events - report.analytic_fan_in) /
                 static_cast<double>(report.analytic_fan_in);
    return report;
}

void write_trace_csv(std::ostream& out, const SimulationTrace& trace) {
    out << "t_s,v_mem_v,i_in_a\n";
    for (const TraceSample& s : trace.samples) {
        out << si::format_sci(s.t) << ',' << si::format_sci(s.v_mem) << ','
            << si::format_sci(s.i_in) << '\n';
    }
}

void write_spikes_csv(std::ostream& out, const SimulationTrace& trace) {
    out << "fire_time_s,input_events_so_far\n";
    for (const FireRecord& f : trace.spikes) {
        out << si::format_sci(f.t) << ',' << f.input_events_so_far << '\n';
    }
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string::size_type begin = 0;
    while (true) {
        const auto comma = line.find(',', begin);
        if (comma == std::string::npos) {
            fields.push_back(line.substr(begin));
            return fields;
        }
        fields.push_back(line.substr(begin, comma - begin));
        begin = comma + 1;
    }
}

}  // namespace

SpikeSchedule read_schedule_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw std::runtime_error("schedule csv is empty");
    }
    if (!line.empty() && line.back() == '\r') {
        line.pop_back();
    }
    if (line != "t_start_s,width_s,amplitude_v,resistance_ohms") {
        throw std::runtime_error(
            "schedule csv line 1: expected header "
            "t_start_s,width_s,amplitude_v,resistance_ohms");
    }

    SpikeSchedule schedule;
    for (std::size_t line_no = 2; std::getline(in, line); ++line_no) {
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (line.empty()) {
            continue;
        }
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != 4) {
            throw std::runtime_error("schedule csv line " + std::to_string(line_no) +
                                     ": expected 4 fields, got " +
                                     std::to_string(fields.size()));
        }
        SpikeEvent event;
        try {
            event.t_start = si::parse(fields[0]);
            event.pulse.width = si::parse(fields[1]);
            event.pulse.amplitude = si::parse(fields[2]);
            event.resistance = si::parse(fields[3]);
        } catch (const std::exception& e) {
            throw std::runtime_error("schedule csv line " + std::to_string(line_no) +
                                     ": " + e.what());
        }
        schedule.events.push_back(event);
    }
    validate(schedule);
    return schedule;
}

}  // namespace abacus
