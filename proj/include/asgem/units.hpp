#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace asgem {

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

namespace phys {
inline constexpr double c = 299792458.0;             // m/s
inline constexpr double hbar = 1.054571817e-34;      // J s
inline constexpr double epsilon0 = 8.8541878128e-12; // F/m
} // namespace phys

enum class Quantity { dimensionless, angular_frequency, dipole, length, intensity };

/// Parses "50 MHz", "50MHz", "1064nm", "2.5377e-29 C·m", "5e13" into SI.
/// Linear frequencies (Hz family) are converted to rad/s. A bare number is
/// taken in the base unit of the requested quantity (rad/s, C·m, m, W/m²).
/// Throws ParseError on an unknown unit or a unit of the wrong kind.
double parse_quantity(std::string_view text, Quantity kind);

/// Parses a plain number with the C locale.
double parse_number(std::string_view text);

/// One `key = value unit` entry; `line` is 1-based.
struct KeyValue {
    std::string value;
    int line = 0;
};

/// Reads flat `key = value unit` text. Blank lines and everything after
/// '#' are ignored. Duplicate keys are a ParseError.
std::map<std::string, KeyValue> parse_key_value_text(std::string_view text);
std::map<std::string, KeyValue> parse_key_value_file(const std::string& path);

/// Locale-independent shortest round-trip formatting.
std::string format_double(double v);

} // namespace asgem
