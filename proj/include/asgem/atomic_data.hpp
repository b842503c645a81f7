#pragma once

#include "asgem/half_int.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace asgem {

enum class Manifold { ground, excited };

struct AtomicSpecies {
    std::string name;
    HalfInt nuclear_spin;
    HalfInt ground_J;
};

/// One hyperfine level; `offset` is in rad/s relative to the manifold
/// centroid (hyperfine A-coefficient convention, E_F = A K / 2).
struct HyperfineLevel {
    HalfInt F;
    double offset = 0.0;
    bool operator==(const HyperfineLevel&) const = default;
};

struct HyperfineState {
    HalfInt F;
    HalfInt m_F;
    Manifold manifold = Manifold::ground;

    bool operator==(const HyperfineState&) const = default;
};

/// A J -> J' transition manifold. All frequencies are angular (rad/s).
struct AtomicLine {
    std::string species;
    std::string label;
    HalfInt nuclear_spin;
    HalfInt ground_J;
    HalfInt excited_J;
    double reduced_dipole = 0.0; ///< <J||er||J'> in C·m
    double linewidth = 0.0;      ///< natural linewidth Γ
    double line_center = 0.0;    ///< centroid-to-centroid transition frequency
    std::vector<HyperfineLevel> ground_hyperfine;  ///< ascending F
    std::vector<HyperfineLevel> excited_hyperfine; ///< ascending F'

    AtomicSpecies atomic_species() const { return {species, nuclear_spin, ground_J}; }
    const std::vector<HyperfineLevel>& levels(Manifold m) const
    {
        return m == Manifold::ground ? ground_hyperfine : excited_hyperfine;
    }

    bool operator==(const AtomicLine&) const = default;
};

/// Throws ConfigError when any invariant of the line is broken.
void validate(const AtomicLine& line);

/// Built-in ⁸⁷Rb D1 data.
AtomicLine rb87_d1();

/// Looks up `<species>_<line>.dat` in $ASGEM_DATA_DIR, then the built-in
/// registry. Species and line names are case-insensitive.
AtomicLine load_line(std::string_view species, std::string_view line);

/// Parses the `key = value unit` line format; `origin` prefixes messages.
AtomicLine parse_line_text(std::string_view text, std::string_view origin = "<text>");
AtomicLine load_line_file(const std::string& path);

/// Writes a line back in the data file format.
std::string format_line_file(const AtomicLine& line);

/// ω_FF' = line_center + excited_offset(F') - ground_offset(F).
double transition_frequency(const AtomicLine& line, HalfInt F, HalfInt Fp);

double hyperfine_offset(const AtomicLine& line, Manifold manifold, HalfInt F);

/// All |F, m_F> sublevels of a manifold ordered by F, then m_F ascending.
std::vector<HyperfineState> enumerate_states(const AtomicLine& line, Manifold manifold);

} // namespace asgem
