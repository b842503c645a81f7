#include "asgem/error.hpp"
#include "asgem/sweep.hpp"
#include "asgem/units.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

namespace asgem {

namespace {

std::vector<std::string> split(const std::string& line, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

// Writes next to the target and renames over it.
void write_atomically(const std::filesystem::path& path, const std::string& content)
{
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw Error("cannot write '" + tmp.string() + "'");
        out << content;
        out.flush();
        if (!out)
            throw Error("write failed for '" + tmp.string() + "'");
    }
    std::filesystem::rename(tmp, path);
}

std::string format_cell(double v, CellStatus s)
{
    return s == CellStatus::done ? format_double(v) : std::string("nan");
}

std::string sanitize(std::string msg)
{
    for (char& c : msg) {
        if (c == '\n' || c == '\r')
            c = ' ';
    }
    return msg;
}

} // namespace

std::string values_csv(const ContourResult& result, bool with_status)
{
    const auto& g = result.grid;
    std::ostringstream out;
    out << g.x_name << ',' << g.y_name << ',' << g.value_name;
    if (with_status)
        out << ",status";
    out << '\n';
    for (std::size_t i = 0; i < g.x_values.size(); ++i) {
        for (std::size_t j = 0; j < g.y_values.size(); ++j) {
            const std::size_t k = g.index(i, j);
            out << format_double(g.x_values[i]) << ',' << format_double(g.y_values[j]) << ','
                << format_cell(result.values[k], result.status[k]);
            if (with_status)
                out << ',' << to_string(result.status[k]);
            out << '\n';
        }
    }
    return out.str();
}

void write_values_csv(const ContourResult& result, const std::filesystem::path& path, bool with_status)
{
    write_atomically(path, values_csv(result, with_status));
}

void write_contours_csv(const std::vector<ContourLine>& contours, const std::filesystem::path& path)
{
    std::ostringstream out;
    out << "level,segment_id,x,y\n";
    for (const auto& c : contours) {
        for (std::size_t s = 0; s < c.polylines.size(); ++s) {
            for (const auto& [x, y] : c.polylines[s])
                out << format_double(c.level) << ',' << s << ',' << format_double(x) << ',' << format_double(y)
                    << '\n';
        }
    }
    write_atomically(path, out.str());
}

void write_failures(const ContourResult& result, const std::filesystem::path& path)
{
    std::ostringstream out;
    out << "i,j,status,message\n";
    const auto& g = result.grid;
    for (std::size_t i = 0; i < g.x_values.size(); ++i) {
        for (std::size_t j = 0; j < g.y_values.size(); ++j) {
            const std::size_t k = g.index(i, j);
            if (result.status[k] == CellStatus::failed || result.status[k] == CellStatus::masked)
                out << i << ',' << j << ',' << to_string(result.status[k]) << ',' << sanitize(result.messages[k])
                    << '\n';
        }
    }
    write_atomically(path, out.str());
}

ContourResult read_checkpoint(const ParamGrid& grid, const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw CheckpointError("cannot open checkpoint '" + path.string() + "'");
    auto fail = [&](const std::string& why) {
        throw CheckpointError("corrupted checkpoint '" + path.string() + "': " + why);
    };

    ContourResult result;
    result.grid = grid;
    result.values.assign(grid.size(), std::nan(""));
    result.status.assign(grid.size(), CellStatus::pending);
    result.messages.assign(grid.size(), {});

    std::string line;
    if (!std::getline(in, line))
        fail("empty file");
    if (line != grid.x_name + "," + grid.y_name + "," + grid.value_name + ",status")
        fail("header does not match the sweep");
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        if (row >= grid.size())
            fail("too many rows");
        const auto cols = split(line, ',');
        if (cols.size() != 4)
            fail("row " + std::to_string(row + 1) + " has " + std::to_string(cols.size()) + " columns");
        const std::size_t i = row / grid.y_values.size(), j = row % grid.y_values.size();
        try {
            if (parse_number(cols[0]) != grid.x_values[i] || parse_number(cols[1]) != grid.y_values[j])
                fail("axis values differ at row " + std::to_string(row + 1));
        } catch (const ParseError&) {
            fail("unparsable axis value at row " + std::to_string(row + 1));
        }
        CellStatus s;
        if (cols[3] == "pending")
            s = CellStatus::pending;
        else if (cols[3] == "done")
            s = CellStatus::done;
        else if (cols[3] == "failed")
            s = CellStatus::failed;
        else if (cols[3] == "masked")
            s = CellStatus::masked;
        else
            fail("unknown status '" + cols[3] + "'");
        if (s == CellStatus::done) {
            double v = 0.0;
            try {
                v = parse_number(cols[2]);
            } catch (const ParseError&) {
                fail("unparsable value at row " + std::to_string(row + 1));
            }
            if (!std::isfinite(v))
                fail("non-finite done value at row " + std::to_string(row + 1));
            result.values[row] = v;
        } else if (cols[2] != "nan") {
            fail("value present for a cell that is not done at row " + std::to_string(row + 1));
        }
        result.status[row] = s;
        ++row;
    }
    if (row != grid.size())
        fail("expected " + std::to_string(grid.size()) + " rows, found " + std::to_string(row));

    std::filesystem::path sidecar = path;
    sidecar += ".failures";
    if (std::ifstream side(sidecar); side) {
        std::getline(side, line);
        while (std::getline(side, line)) {
            const auto a = line.find(','), b = line.find(',', a + 1), c = line.find(',', b + 1);
            if (a == std::string::npos || b == std::string::npos || c == std::string::npos)
                continue;
            try {
                const auto i = static_cast<std::size_t>(parse_number(line.substr(0, a)));
                const auto j = static_cast<std::size_t>(parse_number(line.substr(a + 1, b - a - 1)));
                if (i < grid.x_values.size() && j < grid.y_values.size())
                    result.messages[grid.index(i, j)] = line.substr(c + 1);
            } catch (const ParseError&) {
            }
        }
    }
    return result;
}

} // namespace asgem
