#include "asgem/sweep.hpp"

#include "asgem/error.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <thread>

namespace asgem {

std::vector<double> make_axis(const AxisSpec& spec)
{
    if (spec.count == 0)
        throw ConfigError("axis '" + spec.name + "' needs at least one point");
    if (!std::isfinite(spec.min) || !std::isfinite(spec.max))
        throw ConfigError("axis '" + spec.name + "' has a non-finite bound");
    if (spec.count == 1) {
        if (spec.min != spec.max)
            throw ConfigError("axis '" + spec.name + "' with one point needs min == max");
        return {spec.min};
    }
    if (spec.min == spec.max)
        throw ConfigError("axis '" + spec.name + "' has a degenerate range with " + std::to_string(spec.count) +
                          " points");
    if (spec.spacing == Spacing::log && (spec.min <= 0.0 || spec.max <= 0.0))
        throw ConfigError("log axis '" + spec.name + "' needs positive bounds");

    std::vector<double> out(spec.count);
    const double n = static_cast<double>(spec.count - 1);
    for (std::size_t k = 0; k < spec.count; ++k) {
        const double f = static_cast<double>(k) / n;
        if (spec.spacing == Spacing::linear) {
            out[k] = spec.min + f * (spec.max - spec.min);
        } else {
            out[k] = std::exp(std::log(spec.min) + f * (std::log(spec.max) - std::log(spec.min)));
        }
    }
    out.front() = spec.min;
    out.back() = spec.max;
    return out;
}

std::string_view to_string(CellStatus s)
{
    switch (s) {
    case CellStatus::pending:
        return "pending";
    case CellStatus::done:
        return "done";
    case CellStatus::failed:
        return "failed";
    case CellStatus::masked:
        return "masked";
    }
    return "pending";
}

ParamGrid ParamGrid::from_axes(const AxisSpec& x, const AxisSpec& y, std::string value_name)
{
    ParamGrid g;
    g.x_name = x.name;
    g.y_name = y.name;
    g.value_name = std::move(value_name);
    g.x_values = make_axis(x);
    g.y_values = make_axis(y);
    g.x_spacing = x.spacing;
    g.y_spacing = y.spacing;
    return g;
}

void validate(const ParamGrid& grid)
{
    auto monotone = [](const std::vector<double>& v) {
        if (v.empty())
            return false;
        if (v.size() == 1)
            return std::isfinite(v[0]);
        const bool up = v[1] > v[0];
        for (std::size_t k = 1; k < v.size(); ++k) {
            if (up ? !(v[k] > v[k - 1]) : !(v[k] < v[k - 1]))
                return false;
        }
        return true;
    };
    if (!monotone(grid.x_values) || !monotone(grid.y_values))
        throw ConfigError("sweep axes must be non-empty and strictly monotone");
}

std::size_t ContourResult::count(CellStatus s) const
{
    return static_cast<std::size_t>(std::count(status.begin(), status.end(), s));
}

std::optional<ContourResult::Extremum> ContourResult::max_cell() const
{
    std::optional<Extremum> best;
    for (std::size_t i = 0; i < grid.x_values.size(); ++i) {
        for (std::size_t j = 0; j < grid.y_values.size(); ++j) {
            const std::size_t k = grid.index(i, j);
            if (status[k] == CellStatus::done && (!best || values[k] > best->value))
                best = Extremum{i, j, values[k]};
        }
    }
    return best;
}

std::optional<ContourResult::Extremum> ContourResult::min_cell() const
{
    std::optional<Extremum> best;
    for (std::size_t i = 0; i < grid.x_values.size(); ++i) {
        for (std::size_t j = 0; j < grid.y_values.size(); ++j) {
            const std::size_t k = grid.index(i, j);
            if (status[k] == CellStatus::done && (!best || values[k] < best->value))
                best = Extremum{i, j, values[k]};
        }
    }
    return best;
}

ContourResult run_sweep(const ParamGrid& grid, const Evaluator& evaluator, const SweepOptions& options)
{
    validate(grid);

    ContourResult result;
    bool resumed = false;
    if (options.checkpoint && options.resume && std::filesystem::exists(*options.checkpoint)) {
        try {
            result = read_checkpoint(grid, *options.checkpoint);
            resumed = true;
        } catch (const CheckpointError&) {
            if (!options.restart)
                throw;
        }
    }
    if (!resumed) {
        result.grid = grid;
        result.values.assign(grid.size(), std::nan(""));
        result.status.assign(grid.size(), CellStatus::pending);
        result.messages.assign(grid.size(), {});
    }

    std::vector<std::size_t> todo;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        if (result.status[k] == CellStatus::pending)
            todo.push_back(k);
    }

    std::mutex state_mutex;      // guards result cells and counters
    std::mutex checkpoint_mutex; // single checkpoint writer
    std::atomic<std::size_t> next{0};
    std::size_t completed = grid.size() - todo.size();
    std::size_t since_checkpoint = 0;

    auto write_checkpoint = [&] {
        if (!options.checkpoint)
            return;
        ContourResult snapshot;
        {
            std::lock_guard lock(state_mutex);
            snapshot = result;
        }
        std::lock_guard lock(checkpoint_mutex);
        write_values_csv(snapshot, *options.checkpoint, true);
        std::filesystem::path sidecar = *options.checkpoint;
        sidecar += ".failures";
        write_failures(snapshot, sidecar);
    };

    auto worker = [&] {
        for (;;) {
            if (options.cancel && options.cancel->load())
                return;
            const std::size_t n = next.fetch_add(1);
            if (n >= todo.size())
                return;
            const std::size_t k = todo[n];
            const std::size_t i = k / grid.y_values.size(), j = k % grid.y_values.size();

            CellResult cell;
            try {
                cell = evaluator(grid.x_values[i], grid.y_values[j]);
                if (cell.status == CellStatus::done && !std::isfinite(cell.value))
                    cell = {CellStatus::failed, 0.0, "evaluator returned a non-finite value"};
                if (cell.status == CellStatus::pending)
                    cell = {CellStatus::failed, 0.0, "evaluator returned pending"};
            } catch (const std::exception& e) {
                cell = {CellStatus::failed, 0.0, e.what()};
            } catch (...) {
                cell = {CellStatus::failed, 0.0, "unknown error"};
            }

            bool flush = false;
            std::size_t done_now = 0;
            {
                std::lock_guard lock(state_mutex);
                result.status[k] = cell.status;
                result.values[k] = cell.status == CellStatus::done ? cell.value : std::nan("");
                result.messages[k] = cell.message;
                done_now = ++completed;
                if (++since_checkpoint >= std::max<std::size_t>(options.checkpoint_every, 1)) {
                    since_checkpoint = 0;
                    flush = true;
                }
            }
            if (options.progress)
                options.progress(done_now, grid.size());
            if (flush)
                write_checkpoint();
        }
    };

    const unsigned nworkers = std::max(1u, std::min<unsigned>(options.workers, static_cast<unsigned>(todo.size())));
    if (nworkers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(nworkers);
        for (unsigned w = 0; w < nworkers; ++w)
            pool.emplace_back(worker);
    }

    result.complete = result.count(CellStatus::pending) == 0;
    write_checkpoint();
    return result;
}

} // namespace asgem
