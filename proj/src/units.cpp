/**
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "abacus/units.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <stdexcept>

namespace abacus::si {

namespace {

struct Suffix {
    std::size_t bytes;  // length of the suffix in the input
    int exponent;       // power of ten
};

// Returns the engineering suffix ending `text`, if any. "µ" (U+00B5) and
// "μ" (U+03BC) are both accepted as micro.
Suffix trailing_suffix(std::string_view text) {
    if (text.empty()) {
        return {0, 0};
    }
    if (text.size() >= 2) {
        const auto tail = text.substr(text.size() - 2);
        if (tail == "\xc2\xb5" || tail == "\xce\xbc") {
            return {2, -6};
        }
    }
    switch (text.back()) {
        case 'k': return {1, 3};
        case 'M': return {1, 6};
        case 'm': return {1, -3};
        case 'u': return {1, -6};
        case 'n': return {1, -9};
        case 'p': return {1, -12};
        case 'f': return {1, -15};
        default:  return {0, 0};
    }
}

[[noreturn]] void fail(std::string_view text, const char* why) {
    throw std::invalid_argument("invalid numeric value '" + std::string(text) +
                                "': " + why);
}

double parse_plain(std::string_view token, std::string_view original) {
    double value = 0.0;
    const auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) {
        fail(original, "not a number");
    }
    if (!std::isfinite(value)) {
        fail(original, "not finite");
    }
    return value;
}

}  // namespace

double parse(std::string_view text) {
    std::string_view body = text;
    while (!body.empty() && std::isspace(static_cast<unsigned char>(body.front()))) {
        body.remove_prefix(1);
    }
    while (!body.empty() && std::isspace(static_cast<unsigned char>(body.back()))) {
        body.remove_suffix(1);
    }
    if (body.empty()) {
        fail(text, "empty");
    }

    bool negative = false;
    if (body.front() == '+' || body.front() == '-') {
        negative = body.front() == '-';
        body.remove_prefix(1);
        if (body.empty()) {
            fail(text, "sign without digits");
        }
    }

    const Suffix suffix = trailing_suffix(body);
    double magnitude = 0.0;
    if (suffix.bytes == 0) {
        magnitude = parse_plain(body, text);
    } else {
        const auto mantissa = body.substr(0, body.size() - suffix.bytes);
        if (mantissa.empty()) {
            fail(text, "suffix without digits");
        }
        if (mantissa.find_first_of("eE") != std::string_view::npos) {
            fail(text, "engineering suffix cannot follow an exponent");
        }
        // Splice the suffix into the exponent so the conversion rounds once.
        std::string spliced(mantissa);
        spliced += 'e';
        spliced += std::to_string(suffix.exponent);
        magnitude = parse_plain(spliced, text);
    }
    return negative ? -magnitude : magnitude;
}

std::string format(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::string format_sci(double value) {
    char buf[64];
    const auto res =
        std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::scientific);
    return std::string(buf, res.ptr);
}

}  // namespace abacus::si
