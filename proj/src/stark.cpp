#include "asgem/stark.hpp"

#include "asgem/error.hpp"
#include "asgem/units.hpp"
#include "asgem/wigner.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <utility>

namespace asgem {

namespace {

int parity_sign(int twice_exponent)
{
    // (-1)^(twice_exponent / 2); the exponent is integral by construction.
    const int half = twice_exponent / 2;
    return (half % 2 == 0) ? 1 : -1;
}

void check_compatible(std::span<const AtomicLine> lines)
{
    if (lines.empty())
        throw ConfigError("at least one atomic line is required");
    const AtomicLine& first = lines.front();
    for (const auto& l : lines.subspan(1)) {
        if (l.nuclear_spin != first.nuclear_spin || l.ground_J != first.ground_J ||
            l.ground_hyperfine.size() != first.ground_hyperfine.size())
            throw ConfigError("lines " + first.label + " and " + l.label + " do not share a ground manifold");
        for (std::size_t k = 0; k < l.ground_hyperfine.size(); ++k) {
            if (l.ground_hyperfine[k].F != first.ground_hyperfine[k].F ||
                std::abs(l.ground_hyperfine[k].offset - first.ground_hyperfine[k].offset) >
                    1e-9 * std::abs(first.ground_hyperfine[k].offset))
                throw ConfigError("lines " + first.label + " and " + l.label + " have different ground offsets");
        }
    }
}

void check_off_resonance(double omega_l, std::span<const AtomicLine> lines, const StarkOptions& options)
{
    for (const auto& line : lines) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        double nearest = lo;
        std::pair<HalfInt, HalfInt> nearest_pair;
        for (const auto& g : line.ground_hyperfine) {
            for (const auto& e : line.excited_hyperfine) {
                const double w = transition_frequency(line, g.F, e.F);
                lo = std::min(lo, w);
                hi = std::max(hi, w);
                if (std::abs(omega_l - w) < nearest) {
                    nearest = std::abs(omega_l - w);
                    nearest_pair = {g.F, e.F};
                }
            }
        }
        const double guard = options.resonance_guard_linewidths * line.linewidth;
        if (omega_l >= lo - guard && omega_l <= hi + guard) {
            throw ResonanceError("Stark beam is resonant with " + line.label + " transition F=" +
                                     nearest_pair.first.str() + " -> F'=" + nearest_pair.second.str() +
                                     fmt::format(" (detuning {:.4g} MHz)", nearest / kTwoPi / 1e6),
                                 nearest_pair.first.twice(), nearest_pair.second.twice());
        }
    }
}

} // namespace

double StarkBeam::angular_frequency() const { return kTwoPi * phys::c / wavelength; }

void validate(const StarkBeam& beam)
{
    if (!(beam.wavelength > 0.0) || !std::isfinite(beam.wavelength))
        throw ConfigError("Stark beam wavelength must be positive");
    if (!(beam.intensity >= 0.0) || !std::isfinite(beam.intensity))
        throw ConfigError("Stark beam intensity must be non-negative");
    if (beam.polarization < -1 || beam.polarization > 1)
        throw ConfigError("Stark beam polarization must be -1, 0 or +1");
}

double StarkShiftResult::shift(HalfInt F, HalfInt m_F) const
{
    for (const auto& s : shifts) {
        if (s.state.F == F && s.state.m_F == m_F)
            return s.shift;
    }
    throw DomainError("no ground sublevel F=" + F.str() + " m_F=" + m_F.str());
}

double dipole_matrix_element(const AtomicLine& line, HalfInt F, HalfInt m_F, HalfInt Fp, HalfInt m_Fp, int q)
{
    const HalfInt one = HalfInt::from_int(1);
    const HalfInt qh = HalfInt::from_int(q);
    const double three_j = wigner_3j(Fp, one, F, m_Fp, qh, -m_F);
    if (three_j == 0.0)
        return 0.0;
    const HalfInt J = line.ground_J, Jp = line.excited_J, I = line.nuclear_spin;
    const double six_j = wigner_6j(J, Jp, one, Fp, F, I);
    if (six_j == 0.0)
        return 0.0;
    // (-1)^(F'-1+m_F) (-1)^(F'+J+I+1)
    const int sign = parity_sign(Fp.twice() - 2 + m_F.twice()) * parity_sign(Fp.twice() + J.twice() + I.twice() + 2);
    const double weight = static_cast<double>(F.multiplicity()) * Fp.multiplicity() * J.multiplicity();
    return sign * line.reduced_dipole * std::sqrt(weight) * six_j * three_j;
}

double dipole_decay_rate(const AtomicLine& line, double omega)
{
    const double d2 = line.reduced_dipole * line.reduced_dipole;
    const double ratio = static_cast<double>(line.ground_J.multiplicity()) / line.excited_J.multiplicity();
    return omega * omega * omega * d2 * ratio / (3.0 * kPi * phys::epsilon0 * phys::hbar * std::pow(phys::c, 3));
}

StarkShiftResult ground_state_shift(const StarkBeam& beam, std::span<const AtomicLine> lines,
                                    const StarkOptions& options)
{
    validate(beam);
    check_compatible(lines);
    const double omega_l = beam.angular_frequency();
    check_off_resonance(omega_l, lines, options);

    const HalfInt one = HalfInt::from_int(1);
    const HalfInt q = HalfInt::from_int(beam.polarization);
    const double prefactor = beam.intensity / (2.0 * phys::hbar * phys::hbar * phys::epsilon0 * phys::c);

    StarkShiftResult result;
    result.detuning = omega_l - lines.front().line_center;
    for (const auto& state : enumerate_states(lines.front(), Manifold::ground)) {
        double sum = 0.0;
        for (const auto& line : lines) {
            const HalfInt J = line.ground_J, Jp = line.excited_J, I = line.nuclear_spin;
            const double d2 = line.reduced_dipole * line.reduced_dipole;
            for (const auto& excited : line.excited_hyperfine) {
                const HalfInt Fp = excited.F;
                // The 3j symbol (F' 1 F; m_F' q -m_F) fixes m_F' = m_F - q.
                const HalfInt m_Fp = state.m_F - q;
                if (!is_valid_projection(Fp, m_Fp))
                    continue;
                const double six_j = wigner_6j(J, Jp, one, Fp, state.F, I);
                const double three_j = wigner_3j(Fp, one, state.F, m_Fp, q, -state.m_F);
                const double strength = d2 * state.F.multiplicity() * Fp.multiplicity() * J.multiplicity() *
                                        six_j * six_j * three_j * three_j;
                const double w = transition_frequency(line, state.F, Fp);
                sum += strength / (omega_l - w);
                if (options.counter_rotating)
                    sum -= strength / (omega_l + w);
            }
        }
        result.shifts.push_back({state, prefactor * sum});
    }
    return result;
}

StarkShiftResult ground_state_shift(const StarkBeam& beam, const AtomicLine& line, const StarkOptions& options)
{
    return ground_state_shift(beam, std::span<const AtomicLine>(&line, 1), options);
}

ScatteringResult scattering_rate(const StarkBeam& beam, std::span<const AtomicLine> lines,
                                 const StarkOptions& options)
{
    validate(beam);
    check_compatible(lines);
    const double omega_l = beam.angular_frequency();
    check_off_resonance(omega_l, lines, options);

    const int q = beam.polarization;
    const HalfInt qh = HalfInt::from_int(q);
    const double prefactor = beam.intensity * std::pow(omega_l, 3) /
                             (6.0 * kPi * phys::epsilon0 * phys::epsilon0 * std::pow(phys::hbar, 3) *
                              std::pow(phys::c, 4));
    const auto ground = enumerate_states(lines.front(), Manifold::ground);

    ScatteringResult result;
    for (const auto& g : ground) {
        // Two-photon amplitude for every (final sublevel, scattered polarization).
        std::map<std::pair<std::size_t, int>, double> amplitude;
        for (const auto& line : lines) {
            for (const auto& excited : line.excited_hyperfine) {
                const HalfInt Fp = excited.F;
                const HalfInt m_i = g.m_F - qh;
                if (!is_valid_projection(Fp, m_i))
                    continue;
                const double absorb = dipole_matrix_element(line, g.F, g.m_F, Fp, m_i, q);
                if (absorb == 0.0)
                    continue;
                const double weight = absorb / (omega_l - transition_frequency(line, g.F, Fp));
                for (std::size_t f = 0; f < ground.size(); ++f) {
                    // <f| e r_qsc |i> is non-zero for m_f = m_i + q_sc.
                    const int qsc = (ground[f].m_F - m_i).twice() / 2;
                    if ((ground[f].m_F - m_i).twice() % 2 != 0 || qsc < -1 || qsc > 1)
                        continue;
                    const double emit = dipole_matrix_element(line, ground[f].F, ground[f].m_F, Fp, m_i, qsc);
                    amplitude[{f, qsc}] += emit * weight;
                }
            }
        }
        double total = 0.0;
        for (const auto& [key, a] : amplitude)
            total += a * a;
        const double rate = prefactor * total;
        result.rates.push_back({g, rate});
        result.max_rate = std::max(result.max_rate, rate);
    }
    return result;
}

ScatteringResult scattering_rate(const StarkBeam& beam, const AtomicLine& line, const StarkOptions& options)
{
    return scattering_rate(beam, std::span<const AtomicLine>(&line, 1), options);
}

BandwidthResult memory_bandwidth(const StarkShiftResult& shift)
{
    auto spread = [&](int F) {
        const HalfInt f = HalfInt::from_int(F);
        bool found = false;
        double center = 0.0;
        for (const auto& s : shift.shifts) {
            if (s.state.F == f && s.state.m_F.twice() == 0) {
                center = s.shift;
                found = true;
            }
        }
        if (!found)
            throw DomainError("memory_bandwidth requires the F=" + std::to_string(F) + " ground manifold");
        double widest = 0.0;
        for (const auto& s : shift.shifts) {
            if (s.state.F == f)
                widest = std::max(widest, std::abs(s.shift - center));
        }
        return std::pair{center, widest};
    };
    const auto [d10, d1] = spread(1);
    const auto [d20, d2] = spread(2);

    BandwidthResult out;
    out.clock_shift = d20 - d10;
    out.spread_lower = d1;
    out.spread_upper = d2;
    out.bandwidth = std::abs(out.clock_shift) + std::abs(d1) + std::abs(d2);
    return out;
}

} // namespace asgem
