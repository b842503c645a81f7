#include "asgem/efficiency_map.hpp"

#include "asgem/error.hpp"

namespace asgem {

double efficiency_at(const SimulationConfig& base, double xi, double zeta)
{
    SimulationConfig cfg = base;
    cfg.optical_depth = xi;
    cfg.gradient_strength = zeta;
    cfg.grid_stride = 0;
    return echo_metrics(simulate(cfg), cfg.reversal_time, false).efficiency;
}

ContourResult efficiency_map(const EfficiencyMapSpec& spec, const SweepOptions& sweep)
{
    if (spec.optical_depth.min <= 0.0 || spec.gradient.min <= 0.0 || spec.optical_depth.max <= 0.0 ||
        spec.gradient.max <= 0.0)
        throw ConfigError("efficiency map ranges must be positive");
    validate(spec.base);

    const ParamGrid grid = ParamGrid::from_axes(spec.optical_depth, spec.gradient, "R");
    const SimulationConfig base = spec.base;
    const Evaluator evaluator = [base](double xi, double zeta) {
        return CellResult::done(efficiency_at(base, xi, zeta));
    };
    ContourResult result = run_sweep(grid, evaluator, sweep);
    result.contours = extract_contours(result, spec.levels);
    return result;
}

} // namespace asgem
