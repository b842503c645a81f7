#include "asgem/units.hpp"

#include "asgem/error.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

namespace asgem {

namespace {

std::string_view trim(std::string_view s)
{
    const auto ws = " \t\r\n";
    const auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(ws);
    return s.substr(b, e - b + 1);
}

struct UnitDef {
    std::string_view name;
    Quantity kind;
    double factor;
    double divisor = 1.0; // 800 / 1e9 rounds to 8e-7, 800 * 1e-9 does not
};

// Hz-family units are linear frequencies; the 2π is applied here, on ingest.
constexpr std::array<UnitDef, 18> kUnits{{
    {"Hz", Quantity::angular_frequency, kTwoPi},
    {"kHz", Quantity::angular_frequency, kTwoPi * 1e3},
    {"MHz", Quantity::angular_frequency, kTwoPi * 1e6},
    {"GHz", Quantity::angular_frequency, kTwoPi * 1e9},
    {"THz", Quantity::angular_frequency, kTwoPi * 1e12},
    {"rad/s", Quantity::angular_frequency, 1.0},
    {"C·m", Quantity::dipole, 1.0},
    {"C*m", Quantity::dipole, 1.0},
    {"Cm", Quantity::dipole, 1.0},
    {"C.m", Quantity::dipole, 1.0},
    {"m", Quantity::length, 1.0},
    {"um", Quantity::length, 1.0, 1e6},
    {"µm", Quantity::length, 1.0, 1e6},
    {"nm", Quantity::length, 1.0, 1e9},
    {"W/m2", Quantity::intensity, 1.0},
    {"W/m^2", Quantity::intensity, 1.0},
    {"W/cm2", Quantity::intensity, 1e4},
    {"W/cm^2", Quantity::intensity, 1e4},
}};

} // namespace

double parse_number(std::string_view text)
{
    text = trim(text);
    if (!text.empty() && text.front() == '+')
        text.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size())
        throw ParseError("not a number: '" + std::string(text) + "'");
    return v;
}

double parse_quantity(std::string_view text, Quantity kind)
{
    text = trim(text);
    std::string_view s = text;
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc())
        throw ParseError("not a quantity: '" + std::string(text) + "'");
    const std::string_view unit = trim(std::string_view(ptr, static_cast<std::size_t>(s.data() + s.size() - ptr)));
    if (unit.empty())
        return v;
    for (const auto& u : kUnits) {
        if (u.name == unit) {
            if (u.kind != kind)
                throw ParseError("unit '" + std::string(unit) + "' not valid for this quantity");
            return v * u.factor / u.divisor;
        }
    }
    throw ParseError("unknown unit '" + std::string(unit) + "'");
}

std::map<std::string, KeyValue> parse_key_value_text(std::string_view text)
{
    std::map<std::string, KeyValue> out;
    int lineno = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = (nl == std::string_view::npos) ? text.size() + 1 : nl + 1;
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ParseError("expected 'key = value'", lineno);
        const std::string key(trim(line.substr(0, eq)));
        const std::string value(trim(line.substr(eq + 1)));
        if (key.empty() || value.empty())
            throw ParseError("empty key or value", lineno);
        if (out.count(key))
            throw ParseError("duplicate key '" + key + "'", lineno);
        out.emplace(key, KeyValue{value, lineno});
    }
    return out;
}

std::map<std::string, KeyValue> parse_key_value_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw LookupError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_key_value_text(ss.str());
    } catch (const ParseError& e) {
        throw ParseError(path, e.message(), e.line());
    }
}

std::string format_double(double v)
{
    std::array<char, 64> buf{};
    auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), ptr);
}

} // namespace asgem
