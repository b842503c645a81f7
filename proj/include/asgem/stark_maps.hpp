#pragma once

#include "asgem/stark.hpp"
#include "asgem/sweep.hpp"

#include <vector>

namespace asgem {

/// Wavelength × intensity sweep. Defaults follow the customary contour borders of the
/// maps: Δ_bw = 2π·1 GHz and Γ_sc = 2π·5 MHz.
struct StarkMapSpec {
    AxisSpec wavelength{"lambda_m", 800e-9, 1300e-9, 26, Spacing::linear};
    AxisSpec intensity{"intensity_W_m2", 1e12, 1e15, 31, Spacing::log};
    int polarization = 0;
    std::vector<AtomicLine> lines{rb87_d1()};
    StarkOptions options;
    std::vector<double> levels;
};

inline constexpr double kBandwidthBorder = 2.0 * 3.14159265358979323846 * 1e9;
inline constexpr double kScatteringBorder = 2.0 * 3.14159265358979323846 * 5e6;

/// Δ_bw (rad/s) on the grid; resonant cells are masked. Contours at
/// spec.levels, or at kBandwidthBorder when none are given.
ContourResult bandwidth_map(const StarkMapSpec& spec, const SweepOptions& sweep = {});

/// Max Γ_sc over ground sublevels (rad/s); contours default to kScatteringBorder.
ContourResult scattering_map(const StarkMapSpec& spec, const SweepOptions& sweep = {});

} // namespace asgem
