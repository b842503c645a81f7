#pragma once

#include "asgem/atomic_data.hpp"

#include <span>
#include <vector>

namespace asgem {

/// Far-detuned dressing beam. Polarization is the spherical component q:
/// 0 linear, +1/-1 circular.
struct StarkBeam {
    double wavelength = 1064e-9; ///< m
    double intensity = 0.0;      ///< W/m²
    int polarization = 0;

    double angular_frequency() const;
};

void validate(const StarkBeam& beam);

struct StarkOptions {
    /// Adds the -1/(ω_l + ω_FF') term to the light shift.
    bool counter_rotating = false;
    /// A beam closer than this many linewidths to any hyperfine transition,
    /// or inside the span of transition frequencies, is rejected as resonant.
    double resonance_guard_linewidths = 10.0;
};

struct SublevelShift {
    HyperfineState state;
    double shift = 0.0; ///< ΔE/ħ in rad/s
};

struct StarkShiftResult {
    std::vector<SublevelShift> shifts; ///< every ground sublevel, enumerate_states order
    double detuning = 0.0;             ///< ω_l - line_center of the first line, rad/s

    /// Throws DomainError when the sublevel is absent.
    double shift(HalfInt F, HalfInt m_F) const;
};

struct BandwidthResult {
    double bandwidth = 0.0;   ///< |δ20 - δ10| + |δ1| + |δ2|
    double clock_shift = 0.0; ///< δ20 - δ10
    double spread_lower = 0.0; ///< δ1 = max_m |δ(1,m) - δ(1,0)|
    double spread_upper = 0.0; ///< δ2 = max_m |δ(2,m) - δ(2,0)|
};

struct SublevelRate {
    HyperfineState state;
    double rate = 0.0; ///< rad/s
};

struct ScatteringResult {
    std::vector<SublevelRate> rates;
    double max_rate = 0.0;
};

/// Signed hyperfine dipole matrix element <F m_F| e r_q |F' m_F'> in C·m,
/// factored into the reduced element <J||er||J'>, a 6j and a 3j symbol.
/// Non-zero only for m_F' = m_F - q.
double dipole_matrix_element(const AtomicLine& line, HalfInt F, HalfInt m_F, HalfInt Fp, HalfInt m_Fp, int q);

/// Spontaneous emission rate ω³ |<J||er||J'>|² (2J+1) / ((2J'+1) 3π ε0 ħ c³)
/// implied by the line's reduced dipole at angular frequency ω.
double dipole_decay_rate(const AtomicLine& line, double omega);

/// Ground-state light shift of every ground sublevel. The sum over
/// intermediate states runs over all listed lines, which must share the
/// same ground manifold. Throws ResonanceError naming the nearest (F, F').
StarkShiftResult ground_state_shift(const StarkBeam& beam, std::span<const AtomicLine> lines,
                                    const StarkOptions& options = {});
StarkShiftResult ground_state_shift(const StarkBeam& beam, const AtomicLine& line, const StarkOptions& options = {});

/// Kramers-Heisenberg scattering rate of every ground sublevel, summed over
/// final ground sublevels and the three scattered polarizations.
ScatteringResult scattering_rate(const StarkBeam& beam, std::span<const AtomicLine> lines,
                                 const StarkOptions& options = {});
ScatteringResult scattering_rate(const StarkBeam& beam, const AtomicLine& line, const StarkOptions& options = {});

/// Throws DomainError unless both F=1 and F=2 ground manifolds are present.
BandwidthResult memory_bandwidth(const StarkShiftResult& shift);

} // namespace asgem
