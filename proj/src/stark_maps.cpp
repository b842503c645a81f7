#include "asgem/stark_maps.hpp"

#include "asgem/error.hpp"

namespace asgem {

namespace {

template <class Value>
ContourResult stark_map(const StarkMapSpec& spec, const SweepOptions& sweep, double default_level, Value&& value)
{
    if (spec.lines.empty())
        throw ConfigError("Stark map needs at least one atomic line");
    StarkBeam probe;
    probe.polarization = spec.polarization;
    validate(probe);

    const ParamGrid grid = ParamGrid::from_axes(spec.wavelength, spec.intensity, "value_rad_s");
    const Evaluator evaluator = [&](double lambda, double intensity) {
        StarkBeam beam{lambda, intensity, spec.polarization};
        try {
            return CellResult::done(value(beam));
        } catch (const ResonanceError& e) {
            return CellResult::masked(e.what());
        }
    };
    ContourResult result = run_sweep(grid, evaluator, sweep);
    const std::vector<double> levels = spec.levels.empty() ? std::vector<double>{default_level} : spec.levels;
    result.contours = extract_contours(result, levels);
    return result;
}

} // namespace

ContourResult bandwidth_map(const StarkMapSpec& spec, const SweepOptions& sweep)
{
    return stark_map(spec, sweep, kBandwidthBorder, [&](const StarkBeam& beam) {
        return memory_bandwidth(ground_state_shift(beam, spec.lines, spec.options)).bandwidth;
    });
}

ContourResult scattering_map(const StarkMapSpec& spec, const SweepOptions& sweep)
{
    return stark_map(spec, sweep, kScatteringBorder, [&](const StarkBeam& beam) {
        return scattering_rate(beam, spec.lines, spec.options).max_rate;
    });
}

} // namespace asgem
