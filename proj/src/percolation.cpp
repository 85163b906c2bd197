#include "gffperc/percolation.hpp"

#include "gffperc/union_find.hpp"

#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <string>

namespace gffperc {

const char* to_string(CrossingMode mode)
{
    switch (mode) {
    case CrossingMode::DiscreteAlt: return "discrete_alt";
    case CrossingMode::DiscreteZero: return "discrete_zero";
    case CrossingMode::MetricAlt: return "metric_alt";
    case CrossingMode::MetricZero: return "metric_zero";
    }
    return "?";
}

CrossingMode parse_crossing_mode(std::string_view name)
{
    for (auto mode : {CrossingMode::DiscreteAlt, CrossingMode::DiscreteZero, CrossingMode::MetricAlt,
                      CrossingMode::MetricZero})
        if (name == to_string(mode)) return mode;
    throw std::invalid_argument("unknown crossing mode '" + std::string(name) + "'");
}

bool is_metric(CrossingMode mode)
{
    return mode == CrossingMode::MetricAlt || mode == CrossingMode::MetricZero;
}

namespace {

template <class Allowed>
std::vector<unsigned char> flood(const LatticeRect& lat, const std::vector<int>& sources, Allowed allowed)
{
    std::vector<unsigned char> reached(static_cast<std::size_t>(lat.num_vertices()), 0);
    std::vector<int> stack;
    for (int s : sources) {
        if (!allowed(s) || reached[s]) continue;
        reached[s] = 1;
        stack.push_back(s);
    }
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int u : lat.neighbors(v)) {
            if (u < 0 || reached[u] || !allowed(u)) continue;
            reached[u] = 1;
            stack.push_back(u);
        }
    }
    return reached;
}

std::vector<int> boundary_vertices(const LatticeRect& lat)
{
    std::vector<int> out;
    for (int v = 0; v < lat.num_vertices(); ++v)
        if (lat.is_boundary(v)) out.push_back(v);
    return out;
}

}  // namespace

bool crossing(const LatticeRect& lat, std::span<const double> values, CrossingMode mode)
{
    if (is_metric(mode)) throw std::invalid_argument("crossing: metric mode needs edge states");
    if (values.size() != static_cast<std::size_t>(lat.num_vertices()))
        throw std::invalid_argument("crossing: field does not match lattice");
    const bool alt = mode == CrossingMode::DiscreteAlt;
    const auto sources = lat.arc_vertices(alt ? Arc::Left : Arc::InnerLeft);
    const auto targets = lat.arc_vertices(alt ? Arc::Right : Arc::InnerRight);
    const auto reached = alt ? flood(lat, sources, [&](int v) { return values[v] >= 0.0; })
                             : flood(lat, sources, [&](int v) { return values[v] > 0.0 && !lat.is_boundary(v); });
    for (int t : targets)
        if (reached[t]) return true;
    return false;
}

bool crossing(const LatticeRect& lat, const Field& field, CrossingMode mode)
{
    return crossing(lat, std::span<const double>(field.values), mode);
}

bool crossing(const LatticeRect& lat, const EdgeStates& edges, CrossingMode mode)
{
    if (!is_metric(mode)) throw std::invalid_argument("crossing: discrete mode needs a field");
    if (edges.size() != lat.num_edges()) throw std::invalid_argument("crossing: edge states do not match lattice");
    const bool alt = mode == CrossingMode::MetricAlt;
    const int n = lat.num_vertices();
    const int source = n;
    const int target = n + 1;
    UnionFind uf(n + 2);
    for (int v : lat.arc_vertices(alt ? Arc::Left : Arc::InnerLeft)) uf.unite(source, v);
    for (int v : lat.arc_vertices(alt ? Arc::Right : Arc::InnerRight)) uf.unite(target, v);
    const auto& list = lat.edges();
    for (int e = 0; e < lat.num_edges(); ++e) {
        if (!edges.is_open(e)) continue;
        if (!alt && (lat.is_boundary(list[e].u) || lat.is_boundary(list[e].v))) continue;
        uf.unite(list[e].u, list[e].v);
    }
    return uf.connected(source, target);
}

FirstPassageSets first_passage_sets(const LatticeRect& lat, const Field& field)
{
    const auto& phi = field.values;
    if (phi.size() != static_cast<std::size_t>(lat.num_vertices()))
        throw std::invalid_argument("first_passage_sets: field does not match lattice");
    auto nonneg = [&](int v) { return phi[v] >= 0.0; };
    auto nonpos = [&](int v) { return phi[v] <= 0.0; };
    FirstPassageSets sets;
    const auto boundary = boundary_vertices(lat);
    sets.positive = flood(lat, boundary, nonneg);
    sets.left = flood(lat, lat.arc_vertices(Arc::Left), nonneg);
    sets.right = flood(lat, lat.arc_vertices(Arc::Right), nonneg);
    sets.negative = flood(lat, boundary, nonpos);
    sets.bottom = flood(lat, lat.arc_vertices(Arc::Bottom), nonpos);
    sets.top = flood(lat, lat.arc_vertices(Arc::Top), nonpos);
    return sets;
}

MetricFirstPassageSets first_passage_sets(const LatticeRect& lat, const EdgeStates& edges)
{
    if (edges.size() != lat.num_edges())
        throw std::invalid_argument("first_passage_sets: edge states do not match lattice");
    const int n = lat.num_vertices();
    const int left = n;
    const int right = n + 1;
    UnionFind uf(n + 2);
    for (int v : lat.arc_vertices(Arc::Left)) uf.unite(left, v);
    for (int v : lat.arc_vertices(Arc::Right)) uf.unite(right, v);
    const auto& list = lat.edges();
    for (int e = 0; e < lat.num_edges(); ++e)
        if (edges.is_open(e)) uf.unite(list[e].u, list[e].v);

    MetricFirstPassageSets sets;
    sets.left_vertices.assign(static_cast<std::size_t>(n), 0);
    sets.right_vertices.assign(static_cast<std::size_t>(n), 0);
    sets.left_edges.assign(static_cast<std::size_t>(lat.num_edges()), 0);
    sets.right_edges.assign(static_cast<std::size_t>(lat.num_edges()), 0);
    const int root_left = uf.find(left);
    const int root_right = uf.find(right);
    for (int v = 0; v < n; ++v) {
        const int r = uf.find(v);
        sets.left_vertices[v] = r == root_left;
        sets.right_vertices[v] = r == root_right;
    }
    for (int e = 0; e < lat.num_edges(); ++e) {
        if (!edges.is_open(e)) continue;
        sets.left_edges[e] = sets.left_vertices[list[e].u];
        sets.right_edges[e] = sets.right_vertices[list[e].u];
    }
    return sets;
}

PivotalResult closed_pivotal_exists(const LatticeRect& lat, const EdgeStates& edges)
{
    if (edges.size() != lat.num_edges())
        throw std::invalid_argument("closed_pivotal_exists: edge states do not match lattice");
    const int n = lat.num_vertices();
    const int left = n;
    const int right = n + 1;
    UnionFind uf(n + 2);
    for (int v : lat.arc_vertices(Arc::Left)) uf.unite(left, v);
    for (int v : lat.arc_vertices(Arc::Right)) uf.unite(right, v);
    const auto& list = lat.edges();
    for (int e = 0; e < lat.num_edges(); ++e)
        if (edges.is_open(e)) uf.unite(list[e].u, list[e].v);

    PivotalResult result;
    // A closed edge cannot be pivotal once ω already crosses.
    if (uf.connected(left, right)) return result;
    const int root_left = uf.find(left);
    const int root_right = uf.find(right);
    for (int e = 0; e < lat.num_edges(); ++e) {
        if (edges.is_open(e)) continue;
        const int a = uf.find(list[e].u);
        const int b = uf.find(list[e].v);
        if ((a == root_left && b == root_right) || (a == root_right && b == root_left))
            result.edges.push_back(e);
    }
    result.exists = !result.edges.empty();
    return result;
}

namespace {

struct Heading {
    int dx;
    int dy;
};

// East, North, West, South: index + 1 is a left turn.
constexpr Heading kHeadings[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};

GridPoint side_vertex(DualVertex at, Heading h, int side)
{
    // side = +1 for the left of the heading, -1 for the right. Corner of the
    // plaquette centred at (i+½, j+½) offset by ½h + ½·side·left(h).
    const int lx = -h.dy * side;
    const int ly = h.dx * side;
    return {at.i + (1 + h.dx + lx) / 2, at.j + (1 + h.dy + ly) / 2};
}

}  // namespace

std::pair<GridPoint, GridPoint> dual_step_sides(DualVertex from, DualVertex to)
{
    const Heading h{to.i - from.i, to.j - from.j};
    if (std::abs(h.dx) + std::abs(h.dy) != 1) throw std::invalid_argument("dual_step_sides: not a dual edge");
    return {side_vertex(from, h, +1), side_vertex(from, h, -1)};
}

LevelLinePath trace_level_line(const LatticeRect& lat, const Field& field)
{
    if (field.bc.kind != BoundaryKind::Alternating)
        throw std::invalid_argument("trace_level_line: needs an alternating boundary condition");
    const auto& phi = field.values;
    if (phi.size() != static_cast<std::size_t>(lat.num_vertices()))
        throw std::invalid_argument("trace_level_line: field does not match lattice");
    for (int v = 0; v < lat.num_vertices(); ++v) {
        const auto arc = lat.boundary_arc(v);
        if (!arc) continue;
        const bool plus_arc = *arc == Arc::Left || *arc == Arc::Right;
        if (plus_arc != (phi[v] >= 0.0))
            throw std::invalid_argument("trace_level_line: boundary signs are not alternating");
    }

    const int nx = lat.nx();
    const int ny = lat.ny();
    auto positive = [&](GridPoint p) { return phi[lat.id(p)] >= 0.0; };

    LevelLinePath path;
    DualVertex at{0, 1};
    int heading = 0;
    path.vertices.push_back(at);
    at = {1, 1};
    path.vertices.push_back(at);

    std::vector<unsigned char> used(static_cast<std::size_t>((nx + 1) * (ny + 1) * 4), 0);
    const std::size_t max_steps = 4 * static_cast<std::size_t>(lat.num_edges()) + 4;
    for (std::size_t step = 0;; ++step) {
        if (step > max_steps) throw std::logic_error("trace_level_line: step bound exceeded");
        const Heading h = kHeadings[heading];
        const GridPoint front_left = side_vertex(at, h, +1);
        const GridPoint front_right = side_vertex(at, h, -1);
        // Prefer the left turn: it is taken whenever it is admissible.
        if (!positive(front_left))
            heading = (heading + 1) % 4;
        else if (!positive(front_right))
            ;
        else
            heading = (heading + 3) % 4;

        auto& flag = used[static_cast<std::size_t>((at.j * (nx + 1) + at.i) * 4 + heading)];
        if (flag) throw std::logic_error("trace_level_line: revisited a directed dual edge");
        flag = 1;

        at = {at.i + kHeadings[heading].dx, at.j + kHeadings[heading].dy};
        path.vertices.push_back(at);
        if (at.j == 0) {
            path.terminal = Arc::Right;
            return path;
        }
        if (at.j == ny) {
            path.terminal = Arc::Top;
            return path;
        }
        if (at.i <= 0 || at.i >= nx) throw std::logic_error("trace_level_line: left the domain sideways");
    }
}

void write_level_line_csv(std::ostream& out, const LatticeRect& lat, const LevelLinePath& path)
{
    char buf[96];
    out << "step,x,y\n";
    for (std::size_t k = 0; k < path.vertices.size(); ++k) {
        const auto& d = path.vertices[k];
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", k, (d.i + 0.5) * lat.delta(),
                      (d.j + 0.5) * lat.delta());
        out << buf;
    }
}

void write_components_csv(std::ostream& out, const LatticeRect& lat, const Field& field,
                          const FirstPassageSets& sets)
{
    char buf[160];
    out << "vertex,i,j,value,positive,left,right,negative,bottom,top\n";
    for (int v = 0; v < lat.num_vertices(); ++v) {
        const auto p = lat.coords(v);
        std::snprintf(buf, sizeof buf, "%d,%d,%d,%.17g,%d,%d,%d,%d,%d,%d\n", v, p.i, p.j, field[v],
                      sets.positive[v], sets.left[v], sets.right[v], sets.negative[v], sets.bottom[v],
                      sets.top[v]);
        out << buf;
    }
}

void write_edges_csv(std::ostream& out, const LatticeRect& lat, const EdgeStates& edges)
{
    out << "edge,u,v,open\n";
    for (int e = 0; e < lat.num_edges(); ++e)
        out << e << ',' << lat.edges()[e].u << ',' << lat.edges()[e].v << ',' << (edges.is_open(e) ? 1 : 0)
            << '\n';
}

}  // namespace gffperc
