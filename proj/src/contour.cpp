#include "asgem/sweep.hpp"

#include <array>
#include <cmath>
#include <unordered_map>

namespace asgem {

namespace {

struct EdgePoint {
    std::size_t edge; // 2 * node + 0 (towards +x) or 1 (towards +y)
    Point2 p;
};

struct Segment {
    EdgePoint a, b;
};

double to_coord(double v, Spacing s) { return s == Spacing::log ? std::log(v) : v; }
double from_coord(double v, Spacing s) { return s == Spacing::log ? std::exp(v) : v; }

std::vector<Segment> march(const ContourResult& r, double level)
{
    const auto& g = r.grid;
    const std::size_t nx = g.x_values.size(), ny = g.y_values.size();
    std::vector<Segment> segments;
    if (nx < 2 || ny < 2)
        return segments;

    auto node_ok = [&](std::size_t i, std::size_t j) { return r.status[g.index(i, j)] == CellStatus::done; };
    auto above = [&](std::size_t i, std::size_t j) { return r.values[g.index(i, j)] >= level; };

    // Crossing between node (i0,j0) and its +x or +y neighbour, always
    // interpolated from the lower-index node so both cells agree exactly.
    auto crossing = [&](std::size_t i0, std::size_t j0, int dir) {
        const std::size_t i1 = i0 + (dir == 0), j1 = j0 + (dir == 1);
        const double va = r.values[g.index(i0, j0)], vb = r.values[g.index(i1, j1)];
        const double t = (level - va) / (vb - va);
        const double xa = to_coord(g.x_values[i0], g.x_spacing), xb = to_coord(g.x_values[i1], g.x_spacing);
        const double ya = to_coord(g.y_values[j0], g.y_spacing), yb = to_coord(g.y_values[j1], g.y_spacing);
        return EdgePoint{2 * g.index(i0, j0) + static_cast<std::size_t>(dir),
                         {from_coord(xa + t * (xb - xa), g.x_spacing), from_coord(ya + t * (yb - ya), g.y_spacing)}};
    };

    for (std::size_t i = 0; i + 1 < nx; ++i) {
        for (std::size_t j = 0; j + 1 < ny; ++j) {
            if (!node_ok(i, j) || !node_ok(i + 1, j) || !node_ok(i + 1, j + 1) || !node_ok(i, j + 1))
                continue;
            // Corners counter-clockwise: (i,j) (i+1,j) (i+1,j+1) (i,j+1).
            const std::array<bool, 4> up{above(i, j), above(i + 1, j), above(i + 1, j + 1), above(i, j + 1)};
            // Edge k joins corner k and corner k+1.
            std::array<std::optional<EdgePoint>, 4> edge;
            if (up[0] != up[1])
                edge[0] = crossing(i, j, 0);
            if (up[1] != up[2])
                edge[1] = crossing(i + 1, j, 1);
            if (up[2] != up[3])
                edge[2] = crossing(i, j + 1, 0);
            if (up[3] != up[0])
                edge[3] = crossing(i, j, 1);

            int n = 0;
            for (const auto& e : edge)
                n += e.has_value();
            if (n == 2) {
                std::array<EdgePoint, 2> pts;
                int m = 0;
                for (const auto& e : edge) {
                    if (e)
                        pts[m++] = *e;
                }
                segments.push_back({pts[0], pts[1]});
            } else if (n == 4) {
                const double center = 0.25 * (r.value(i, j) + r.value(i + 1, j) + r.value(i + 1, j + 1) +
                                              r.value(i, j + 1));
                if ((center >= level) == up[0]) {
                    segments.push_back({*edge[0], *edge[1]});
                    segments.push_back({*edge[2], *edge[3]});
                } else {
                    segments.push_back({*edge[3], *edge[0]});
                    segments.push_back({*edge[1], *edge[2]});
                }
            }
        }
    }
    return segments;
}

std::vector<std::vector<Point2>> stitch(const std::vector<Segment>& segments)
{
    std::unordered_map<std::size_t, std::vector<std::size_t>> by_edge;
    for (std::size_t s = 0; s < segments.size(); ++s) {
        by_edge[segments[s].a.edge].push_back(s);
        by_edge[segments[s].b.edge].push_back(s);
    }
    std::vector<bool> used(segments.size(), false);
    std::vector<std::vector<Point2>> out;

    auto walk = [&](std::size_t s, bool from_a) {
        std::vector<Point2> line;
        const EdgePoint& start = from_a ? segments[s].a : segments[s].b;
        line.push_back(start.p);
        std::size_t current = s;
        std::size_t entry = start.edge;
        for (;;) {
            used[current] = true;
            const Segment& seg = segments[current];
            const EdgePoint& exit = (seg.a.edge == entry) ? seg.b : seg.a;
            line.push_back(exit.p);
            std::optional<std::size_t> nxt;
            for (std::size_t cand : by_edge[exit.edge]) {
                if (!used[cand]) {
                    nxt = cand;
                    break;
                }
            }
            if (!nxt)
                break;
            current = *nxt;
            entry = exit.edge;
        }
        out.push_back(std::move(line));
    };

    // Open polylines first, started from their free ends in scan order.
    for (std::size_t s = 0; s < segments.size(); ++s) {
        if (used[s])
            continue;
        if (by_edge[segments[s].a.edge].size() == 1)
            walk(s, true);
        else if (by_edge[segments[s].b.edge].size() == 1)
            walk(s, false);
    }
    // Whatever remains is a closed loop.
    for (std::size_t s = 0; s < segments.size(); ++s) {
        if (!used[s])
            walk(s, true);
    }
    return out;
}

} // namespace

std::vector<ContourLine> extract_contours(const ContourResult& result, const std::vector<double>& levels)
{
    std::vector<ContourLine> out;
    for (double level : levels)
        out.push_back({level, stitch(march(result, level))});
    return out;
}

} // namespace asgem
