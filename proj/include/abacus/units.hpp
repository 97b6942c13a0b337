/**
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#pragma once

#include <string>
#include <string_view>

namespace abacus::si {

// Parses a decimal number with an optional engineering suffix:
//   k = 1e3, M = 1e6, m = 1e-3, u/µ = 1e-6, n = 1e-9, p = 1e-12, f = 1e-15
// Scientific notation ("8.645e-13") is accepted without a suffix; a suffix
// after an exponent ("2.5e-3k") is rejected. The suffixed form is folded
// into the exponent before a single correctly-rounded parse, so "864.5f"
// yields the same double as the literal 864.5e-15.
// Throws std::invalid_argument on malformed or non-finite input.
double parse(std::string_view text);

// Shortest decimal representation that round-trips to the same double.
std::string format(double value);

// Same guarantee, forced scientific notation (CSV emission).
std::string format_sci(double value);

}  // namespace abacus::si
