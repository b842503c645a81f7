#pragma once

#include "asgem/maxwell_bloch.hpp"
#include "asgem/sweep.hpp"

namespace asgem {

struct EfficiencyMapSpec {
    AxisSpec optical_depth{"xi", 100.0, 4000.0, 20, Spacing::linear};
    AxisSpec gradient{"zeta", 100.0, 2500.0, 20, Spacing::linear};
    SimulationConfig base;
    std::vector<double> levels{0.5, 0.75, 0.9};
};

/// R(ξ, ζ) for every cell. Cells whose echo outlasts the window still
/// report the energy retrieved inside it; integration failures mark the
/// cell failed and the sweep continues.
ContourResult efficiency_map(const EfficiencyMapSpec& spec, const SweepOptions& sweep = {});

/// The single-run value efficiency_map computes for one cell.
double efficiency_at(const SimulationConfig& base, double xi, double zeta);

} // namespace asgem
