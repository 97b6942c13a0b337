/**
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

namespace abacus {

// One synaptic read event as seen by the column: a rectangular voltage pulse
// applied across the selected eNVM cell.
struct ReadPulse {
    double amplitude = 0.0;  // V, read voltage across the cell
    double width = 0.0;      // s
    double period = 0.0;     // s, spike-train spacing; 0 means back-to-back (= width)
};

// Period actually in effect (0 collapses to width).
double pulse_period(const ReadPulse& pulse);

// Throws std::invalid_argument unless amplitude > 0, width > 0 and
// period is 0 or >= width.
void validate(const ReadPulse& pulse);

}  // namespace abacus
