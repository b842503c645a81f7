#include "asgem/atomic_data.hpp"

#include "asgem/error.hpp"
#include "asgem/units.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace asgem {

namespace {

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) { return std::tolower(c); });
    return out;
}

void validate_manifold(const AtomicLine& line, Manifold m, std::string_view name)
{
    const HalfInt J = (m == Manifold::ground) ? line.ground_J : line.excited_J;
    const HalfInt I = line.nuclear_spin;
    const auto& levels = line.levels(m);
    const int tmin = std::abs(J.twice() - I.twice());
    const int tmax = J.twice() + I.twice();
    const auto expected = static_cast<std::size_t>((tmax - tmin) / 2 + 1);
    if (levels.size() != expected)
        throw ConfigError(std::string(name) + " manifold must list every F in [|J-I|, J+I]");

    double weighted = 0.0, span = 0.0;
    int sign = 0;
    for (std::size_t k = 0; k < levels.size(); ++k) {
        const HalfInt F = levels[k].F;
        if (F.twice() != tmin + 2 * static_cast<int>(k))
            throw ConfigError(std::string(name) + " manifold: F=" + F.str() + " out of order or outside [|J-I|, J+I]");
        if (!std::isfinite(levels[k].offset))
            throw ConfigError(std::string(name) + " manifold: non-finite offset");
        weighted += F.multiplicity() * levels[k].offset;
        span = std::max(span, std::abs(levels[k].offset));
        if (k > 0) {
            const double step = levels[k].offset - levels[k - 1].offset;
            const int s = (step > 0) - (step < 0);
            if (s == 0 || (sign != 0 && s != sign))
                throw ConfigError(std::string(name) + " manifold: offsets are not monotone in F");
            sign = s;
        }
    }
    double total = 0.0;
    for (const auto& l : levels)
        total += l.F.multiplicity();
    if (span > 0.0 && std::abs(weighted / total) > 1e-6 * span)
        throw ConfigError(std::string(name) + " manifold: offsets are not referenced to the centroid");
}

const HyperfineLevel& find_level(const AtomicLine& line, Manifold m, HalfInt F)
{
    for (const auto& l : line.levels(m)) {
        if (l.F == F)
            return l;
    }
    throw DomainError(std::string(m == Manifold::ground ? "ground" : "excited") + " manifold of " + line.label +
                      " has no F=" + F.str());
}

} // namespace

void validate(const AtomicLine& line)
{
    if (!(line.reduced_dipole > 0.0))
        throw ConfigError("reduced_dipole must be positive");
    if (!(line.linewidth > 0.0))
        throw ConfigError("linewidth must be positive");
    if (!(line.line_center > 0.0))
        throw ConfigError("line_center must be positive");
    if (line.nuclear_spin.twice() < 0 || line.ground_J.twice() < 0 || line.excited_J.twice() < 0)
        throw ConfigError("angular momenta must be non-negative");
    validate_manifold(line, Manifold::ground, "ground");
    validate_manifold(line, Manifold::excited, "excited");
}

AtomicLine rb87_d1()
{
    // Transcribed from the standard ⁸⁷Rb D-line data tables.
    const double ground_A = kTwoPi * 3.417341305452e9;
    const double excited_A = kTwoPi * 407.25e6;
    AtomicLine line;
    line.species = "rb87";
    line.label = "D1";
    line.nuclear_spin = HalfInt::from_twice(3);
    line.ground_J = HalfInt::from_twice(1);
    line.excited_J = HalfInt::from_twice(1);
    line.reduced_dipole = 2.5377e-29;
    line.linewidth = kTwoPi * 5.7500e6;
    line.line_center = kTwoPi * 377.107463380e12;
    line.ground_hyperfine = {{HalfInt::from_int(1), -1.25 * ground_A}, {HalfInt::from_int(2), 0.75 * ground_A}};
    line.excited_hyperfine = {{HalfInt::from_int(1), -1.25 * excited_A}, {HalfInt::from_int(2), 0.75 * excited_A}};
    return line;
}

AtomicLine parse_line_text(std::string_view text, std::string_view origin)
{
    std::map<std::string, KeyValue> kv;
    try {
        kv = parse_key_value_text(text);
    } catch (const ParseError& e) {
        throw ParseError(std::string(origin), e.message(), e.line());
    }

    AtomicLine line;
    std::map<int, double> ground, excited;
    bool have[6] = {};
    for (const auto& [key, entry] : kv) {
        try {
            if (key == "species") {
                line.species = entry.value;
            } else if (key == "line") {
                line.label = entry.value;
            } else if (key == "nuclear_spin") {
                line.nuclear_spin = HalfInt::parse(entry.value);
                have[0] = true;
            } else if (key == "ground_J") {
                line.ground_J = HalfInt::parse(entry.value);
                have[1] = true;
            } else if (key == "excited_J") {
                line.excited_J = HalfInt::parse(entry.value);
                have[2] = true;
            } else if (key == "reduced_dipole") {
                line.reduced_dipole = parse_quantity(entry.value, Quantity::dipole);
                have[3] = true;
            } else if (key == "linewidth") {
                line.linewidth = parse_quantity(entry.value, Quantity::angular_frequency);
                have[4] = true;
            } else if (key == "line_center") {
                line.line_center = parse_quantity(entry.value, Quantity::angular_frequency);
                have[5] = true;
            } else if ((key.rfind("ground_F", 0) == 0 || key.rfind("excited_F", 0) == 0) &&
                       key.size() > 7 && key.substr(key.size() - 7) == "_offset") {
                const bool is_ground = key[0] == 'g';
                const std::size_t start = is_ground ? 8 : 9;
                const HalfInt F = HalfInt::parse(key.substr(start, key.size() - 7 - start));
                auto& target = is_ground ? ground : excited;
                target[F.twice()] = parse_quantity(entry.value, Quantity::angular_frequency);
            } else {
                throw ParseError("unknown key '" + key + "'");
            }
        } catch (const ParseError& e) {
            throw ParseError(std::string(origin), e.message(), entry.line);
        }
    }
    static constexpr const char* required[] = {"nuclear_spin", "ground_J",  "excited_J",
                                               "reduced_dipole", "linewidth", "line_center"};
    for (int i = 0; i < 6; ++i) {
        if (!have[i])
            throw ParseError(std::string(origin), std::string("missing key '") + required[i] + "'", 0);
    }
    for (const auto& [twice, offset] : ground)
        line.ground_hyperfine.push_back({HalfInt::from_twice(twice), offset});
    for (const auto& [twice, offset] : excited)
        line.excited_hyperfine.push_back({HalfInt::from_twice(twice), offset});
    try {
        validate(line);
    } catch (const ConfigError& e) {
        throw ParseError(std::string(origin), e.what(), 0);
    }
    return line;
}

AtomicLine load_line_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw LookupError("cannot open atomic data file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_line_text(ss.str(), path);
}

std::string format_line_file(const AtomicLine& line)
{
    std::ostringstream out;
    out << "species = " << line.species << '\n'
        << "line = " << line.label << '\n'
        << "nuclear_spin = " << line.nuclear_spin.str() << '\n'
        << "ground_J = " << line.ground_J.str() << '\n'
        << "excited_J = " << line.excited_J.str() << '\n'
        << "reduced_dipole = " << format_double(line.reduced_dipole) << " C·m\n"
        << "linewidth = " << format_double(line.linewidth) << " rad/s\n"
        << "line_center = " << format_double(line.line_center) << " rad/s\n";
    for (const auto& l : line.ground_hyperfine)
        out << "ground_F" << l.F.str() << "_offset = " << format_double(l.offset) << " rad/s\n";
    for (const auto& l : line.excited_hyperfine)
        out << "excited_F" << l.F.str() << "_offset = " << format_double(l.offset) << " rad/s\n";
    return out.str();
}

AtomicLine load_line(std::string_view species, std::string_view line)
{
    const std::string s = lower(species), l = lower(line);
    if (const char* dir = std::getenv("ASGEM_DATA_DIR"); dir && *dir) {
        namespace fs = std::filesystem;
        for (const auto& name : {std::string(species) + "_" + std::string(line) + ".dat", s + "_" + l + ".dat"}) {
            const fs::path p = fs::path(dir) / name;
            if (fs::exists(p))
                return load_line_file(p.string());
        }
    }
    if (s == "rb87" && l == "d1")
        return rb87_d1();
    throw LookupError("no atomic data registered for " + std::string(species) + "/" + std::string(line));
}

double hyperfine_offset(const AtomicLine& line, Manifold manifold, HalfInt F)
{
    return find_level(line, manifold, F).offset;
}

double transition_frequency(const AtomicLine& line, HalfInt F, HalfInt Fp)
{
    return line.line_center + find_level(line, Manifold::excited, Fp).offset -
           find_level(line, Manifold::ground, F).offset;
}

std::vector<HyperfineState> enumerate_states(const AtomicLine& line, Manifold manifold)
{
    std::vector<HyperfineState> out;
    for (const auto& level : line.levels(manifold)) {
        for (int tm = -level.F.twice(); tm <= level.F.twice(); tm += 2)
            out.push_back({level.F, HalfInt::from_twice(tm), manifold});
    }
    return out;
}

} // namespace asgem
