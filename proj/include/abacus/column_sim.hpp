/**
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <variant>
#include <vector>

#include "abacus/attenuator.hpp"
#include "abacus/device.hpp"
#include "abacus/neuron.hpp"
#include "abacus/pulse.hpp"

namespace abacus {

// Fixed-ratio current division, the idealized stand-in for the tanh stage.
struct IdealAttenuation {
    double sdf = 1.0;
};

using AttenuationStage = std::variant<IdealAttenuation, AttenuatorConfig>;

// Synaptic current through the attenuation stage.
double attenuate(const AttenuationStage& stage, double i_syn);

// One presynaptic spike reading one synapse of the given resistance.
struct SpikeEvent {
    double t_start = 0.0;
    ReadPulse pulse;
    double resistance = 0.0;
};

struct SpikeSchedule {
    std::vector<SpikeEvent> events;
};

// Events must be sorted and non-overlapping (the column serializes reads);
// a sub-ppb overlap is tolerated so back-to-back trains survive rounding.
void validate(const SpikeSchedule& schedule);

// count back-to-back (or period-spaced) reads of the device's LRS.
SpikeSchedule uniform_lrs_schedule(const EnvmDevice& device, const ReadPulse& pulse,
                                   std::int64_t count);

// Shortest event width / 100.
double default_dt(const SpikeSchedule& schedule);

struct TraceSample {
    double t = 0.0;
    double v_mem = 0.0;
    double i_in = 0.0;
};

struct FireRecord {
    double t = 0.0;
    // Events fully completed before the step that fired.
    std::int64_t input_events_so_far = 0;
};

struct SimulationTrace {
    std::vector<TraceSample> samples;
    std::vector<FireRecord> spikes;
    std::optional<std::int64_t> first_fire_after_n_inputs;
};

// Samples are decimated so a trace never exceeds this many rows.
inline constexpr std::int64_t kMaxTraceSamples = 100000;

// Explicit time-stepped run of one column: piecewise-constant synaptic
// current (amplitude / resistance during an event, zero between events)
// through the attenuation stage into the neuron.
SimulationTrace simulate_column(const NeuronConfig& neuron, const AttenuationStage& stage,
                                const SpikeSchedule& schedule, double dt);

// 1-based index of the event during which the first fire happened, i.e.
// first_fire_after_n_inputs + 1. nullopt when the column never fired.
std::optional<std::int64_t> first_fire_event_index(const SimulationTrace& trace);

struct FrequencyPoint {
    double i_in = 0.0;
    double frequency = 0.0;
};

// Constant-drive firing rate per input current, measured over at least ten
// inter-spike intervals. Currents at or below the leak report 0 Hz.
// Constant-current neurons only.
std::vector<FrequencyPoint> frequency_curve(const NeuronConfig& neuron,
                                            const std::vector<double>& currents);

struct LeakGapReport {
    std::int64_t analytic_fan_in = 0;
    // 1-based event index of the simulated first fire.
    std::int64_t first_fire_events = 0;
    // (first_fire_events - analytic_fan_in) / analytic_fan_in.
    double gap = 0.0;
};

// Quantifies the between-pulse leak the per-pulse arithmetic ignores:
// simulates a train at duty = width / period and compares the first-fire
// event count against the analytic fan-in.
LeakGapReport leak_gap_report(const NeuronConfig& neuron, double sdf,
                              const EnvmDevice& device, const ReadPulse& pulse,
                              double duty);

// Columns: t_s,v_mem_v,i_in_a.
void write_trace_csv(std::ostream& out, const SimulationTrace& trace);

// Columns: fire_time_s,input_events_so_far.
void write_spikes_csv(std::ostream& out, const SimulationTrace& trace);

// Expects the exact header t_start_s,width_s,amplitude_v,resistance_ohms.
// Throws std::runtime_error naming the offending line.
SpikeSchedule read_schedule_csv(std::istream& in);

}  // namespace abacus
