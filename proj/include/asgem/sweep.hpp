#pragma once

#include <atomic>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace asgem {

enum class Spacing { linear, log };

struct AxisSpec {
    std::string name;
    double min = 0.0;
    double max = 0.0;
    std::size_t count = 1;
    Spacing spacing = Spacing::linear;
};

/// Throws ConfigError on an empty or degenerate range, or a non-positive
/// bound on a log axis.
std::vector<double> make_axis(const AxisSpec& spec);

enum class CellStatus { pending, done, failed, masked };

std::string_view to_string(CellStatus s);

/// Two-dimensional sweep. Cells are stored row-major with the x axis as
/// the row index: cell (i, j) lives at i * y_values.size() + j.
struct ParamGrid {
    std::string x_name;
    std::string y_name;
    std::string value_name = "value";
    std::vector<double> x_values;
    std::vector<double> y_values;
    Spacing x_spacing = Spacing::linear;
    Spacing y_spacing = Spacing::linear;

    static ParamGrid from_axes(const AxisSpec& x, const AxisSpec& y, std::string value_name);

    std::size_t size() const { return x_values.size() * y_values.size(); }
    std::size_t index(std::size_t i, std::size_t j) const { return i * y_values.size() + j; }
};

/// Throws ConfigError unless both axes are non-empty and strictly monotone.
void validate(const ParamGrid& grid);

struct CellResult {
    CellStatus status = CellStatus::done;
    double value = 0.0;
    std::string message;

    static CellResult done(double v) { return {CellStatus::done, v, {}}; }
    static CellResult masked(std::string why) { return {CellStatus::masked, 0.0, std::move(why)}; }
};

using Point2 = std::pair<double, double>;

struct ContourLine {
    double level = 0.0;
    std::vector<std::vector<Point2>> polylines;
};

struct ContourResult {
    ParamGrid grid;
    std::vector<double> values;
    std::vector<CellStatus> status;
    std::vector<std::string> messages;
    std::vector<ContourLine> contours;
    bool complete = false;

    double value(std::size_t i, std::size_t j) const { return values[grid.index(i, j)]; }
    CellStatus cell_status(std::size_t i, std::size_t j) const { return status[grid.index(i, j)]; }
    std::size_t count(CellStatus s) const;

    /// Largest done value and its (i, j); nullopt when nothing is done.
    struct Extremum {
        std::size_t i, j;
        double value;
    };
    std::optional<Extremum> max_cell() const;
    std::optional<Extremum> min_cell() const;
};

/// Evaluated concurrently from several workers; must be pure per cell.
/// Exceptions mark the cell failed with the exception message.
using Evaluator = std::function<CellResult(double x, double y)>;

struct SweepOptions {
    unsigned workers = 1;
    /// Checkpoint CSV (export format plus a status column). Failure messages
    /// go to the sidecar `<checkpoint>.failures`.
    std::optional<std::filesystem::path> checkpoint;
    std::size_t checkpoint_every = 16;
    /// Resume from an existing checkpoint. A corrupt checkpoint is refused
    /// with CheckpointError unless `restart` is also set.
    bool resume = false;
    bool restart = false;
    /// Polled between cells; when set the sweep stops early, writes the
    /// checkpoint and returns with complete == false.
    const std::atomic<bool>* cancel = nullptr;
    /// Called after every completed cell with (completed, total).
    std::function<void(std::size_t, std::size_t)> progress;
};

ContourResult run_sweep(const ParamGrid& grid, const Evaluator& evaluator, const SweepOptions& options = {});

/// Marching squares with linear interpolation, in log coordinates along
/// log-spaced axes. Cells touching a masked, failed or pending node are
/// skipped. Levels outside the data range give empty polylines.
std::vector<ContourLine> extract_contours(const ContourResult& result, const std::vector<double>& levels);

// CSV I/O ------------------------------------------------------------------

/// `x_name,y_name,value_name[,status]`, one row per cell, row-major.
/// Non-done values are written as `nan`.
void write_values_csv(const ContourResult& result, const std::filesystem::path& path, bool with_status);
std::string values_csv(const ContourResult& result, bool with_status);

/// `level,segment_id,x,y`
void write_contours_csv(const std::vector<ContourLine>& contours, const std::filesystem::path& path);

/// `i,j,status,message` for every failed or masked cell.
void write_failures(const ContourResult& result, const std::filesystem::path& path);

/// Reads a checkpoint written by write_values_csv(..., true) back into a
/// result for `grid`. Throws CheckpointError on any mismatch.
ContourResult read_checkpoint(const ParamGrid& grid, const std::filesystem::path& path);

} // namespace asgem
