#include <doctest.h>

#include "gffperc/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>
#include <stdexcept>
#include <vector>

using namespace gffperc;

namespace {

const Arc kBoundaryArcs[] = {Arc::Left, Arc::Bottom, Arc::Right, Arc::Top};

bool adjacent(const LatticeRect& lat, int u, int v)
{
    const auto a = lat.coords(u);
    const auto b = lat.coords(v);
    return std::abs(a.i - b.i) + std::abs(a.j - b.j) == 1;
}

std::vector<std::pair<double, double>> parameter_grid()
{
    std::vector<std::pair<double, double>> out;
    for (double L : {0.5, 1.0, 1.3, 2.0, 3.0})
        for (double d : {1.0 / 6.0, 1.0 / 7.0, 0.1, 1.0 / 16.0, 0.07, 1.0 / 33.0})
            if (d <= std::min(L, 1.0) / 3.0) out.push_back({L, d});
    return out;
}

}  // namespace

TEST_CASE("smallest square: 3x3 grid with an 8-vertex frame")
{
    const LatticeRect lat = build_lattice(1.0, 0.25);
    CHECK(lat.nx() == 3);
    CHECK(lat.ny() == 3);
    int boundary = 0;
    for (int v = 0; v < lat.num_vertices(); ++v) boundary += lat.is_boundary(v);
    CHECK(boundary == 8);
    for (Arc a : kBoundaryArcs) CHECK_FALSE(lat.arc_vertices(a).empty());
    // left column from a down to, but excluding, b
    CHECK(lat.arc_vertices(Arc::Left) == std::vector<int>{lat.id(1, 3), lat.id(1, 2)});
    CHECK(lat.corner_a() == lat.id(1, 3));
    CHECK(lat.corner_b() == lat.id(1, 1));
    CHECK(lat.corner_c() == lat.id(3, 1));
    CHECK(lat.corner_d() == lat.id(3, 3));
}

TEST_CASE("L=2, delta=1/3 gives a 5x2 grid with b at (1/3,1/3)")
{
    const LatticeRect lat = build_lattice(2.0, 1.0 / 3.0);
    CHECK(lat.nx() == 5);
    CHECK(lat.ny() == 2);
    const auto [x, y] = lat.position(lat.corner_b());
    CHECK(x == doctest::Approx(1.0 / 3.0));
    CHECK(y == doctest::Approx(1.0 / 3.0));
    // half-open arcs: [c,d) on a two-row grid holds only c
    CHECK(lat.arc_vertices(Arc::Right) == std::vector<int>{lat.corner_c()});
    CHECK(lat.num_interior() == 0);
}

TEST_CASE("inadmissible meshes are rejected")
{
    CHECK_THROWS_AS(build_lattice(1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(build_lattice(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(build_lattice(-1.0, 0.1), std::invalid_argument);
    CHECK_THROWS_AS(build_lattice(0.5, 0.2), std::invalid_argument);
    CHECK_THROWS_AS(build_lattice(1.0, std::nan("")), std::invalid_argument);
    CHECK_NOTHROW(build_lattice(1.0, 1.0 / 3.0));
}

TEST_CASE("grid extents count strictly interior points")
{
    CHECK(points_inside(1.0, 0.25) == 3);
    CHECK(points_inside(1.0, 0.3) == 3);
    CHECK(points_inside(1.0, 1.0 / 32.0) == 31);
    CHECK(points_inside(1.5, 1.0 / 8.0) == 11);
    CHECK(points_inside(1.0, 0.1) == 9);
}

TEST_CASE("arcs partition the boundary and run counter-clockwise")
{
    for (const auto& [L, d] : parameter_grid()) {
        CAPTURE(L);
        CAPTURE(d);
        const LatticeRect lat(L, d);
        std::vector<int> cycle;
        std::set<int> seen;
        for (Arc a : kBoundaryArcs) {
            for (int v : lat.arc_vertices(a)) {
                CHECK(lat.is_boundary(v));
                CHECK(lat.boundary_arc(v) == a);
                CHECK(seen.insert(v).second);
                cycle.push_back(v);
            }
        }
        int boundary = 0;
        for (int v = 0; v < lat.num_vertices(); ++v) {
            boundary += lat.is_boundary(v);
            CHECK(lat.is_boundary(v) == lat.boundary_arc(v).has_value());
        }
        CHECK(static_cast<int>(cycle.size()) == boundary);
        CHECK(cycle.front() == lat.corner_a());
        for (std::size_t k = 0; k < cycle.size(); ++k)
            CHECK(adjacent(lat, cycle[k], cycle[(k + 1) % cycle.size()]));
        // b is the boundary vertex nearest the origin
        const auto [bx, by] = lat.position(lat.corner_b());
        for (int v : cycle) {
            const auto [x, y] = lat.position(v);
            CHECK(x * x + y * y >= bx * bx + by * by - 1e-12);
        }
    }
}

TEST_CASE("inner arcs are the interior neighbours of the side arcs")
{
    for (const auto& [L, d] : parameter_grid()) {
        const LatticeRect lat(L, d);
        for (auto [inner, outer] : {std::pair{Arc::InnerLeft, Arc::Left}, std::pair{Arc::InnerRight, Arc::Right}}) {
            const auto mask = lat.arc_mask(outer);
            const auto list = lat.arc_vertices(inner);
            std::set<int> expected;
            for (int v = 0; v < lat.num_vertices(); ++v) {
                if (lat.is_boundary(v)) continue;
                for (int w : lat.neighbors(v))
                    if (w >= 0 && mask[w]) expected.insert(v);
            }
            CHECK(std::set<int>(list.begin(), list.end()) == expected);
            for (int v : list) CHECK_FALSE(lat.is_boundary(v));
        }
    }
}

TEST_CASE("edge list matches a brute-force scan of adjacent pairs")
{
    for (int nx = 2; nx <= 20; nx += 3) {
        for (int ny = 2; ny <= 20; ny += 2) {
            const double delta = 1.0 / (ny + 1);
            const double L = (nx + 1) * delta;
            if (delta > std::min(L, 1.0) / 3.0 * (1 + 1e-12)) continue;
            const LatticeRect lat(L, delta);
            REQUIRE(lat.nx() == nx);
            REQUIRE(lat.ny() == ny);
            int pairs = 0;
            for (int u = 0; u < lat.num_vertices(); ++u)
                for (int v = u + 1; v < lat.num_vertices(); ++v) pairs += adjacent(lat, u, v);
            CHECK(lat.num_edges() == pairs);
            for (int e = 0; e < lat.num_edges(); ++e) {
                const Edge ed = lat.edges()[e];
                CHECK(ed.u < ed.v);
                CHECK(adjacent(lat, ed.u, ed.v));
                CHECK(lat.edge_between(ed.u, ed.v) == e);
                CHECK(lat.edge_between(ed.v, ed.u) == e);
            }
        }
    }
}

TEST_CASE("reflection across the vertical midline")
{
    for (const auto& [L, d] : parameter_grid()) {
        const LatticeRect lat(L, d);
        auto mirror = [&](int v) {
            const auto p = lat.coords(v);
            return lat.id(lat.nx() + 1 - p.i, p.j);
        };
        CHECK(lat.arc_vertices(Arc::Left).size() == lat.arc_vertices(Arc::Right).size());
        CHECK(lat.arc_vertices(Arc::InnerLeft).size() == lat.arc_vertices(Arc::InnerRight).size());
        std::set<int> left_column, right_column;
        for (int j = 1; j <= lat.ny(); ++j) {
            left_column.insert(lat.id(1, j));
            right_column.insert(lat.id(lat.nx(), j));
        }
        std::set<int> mapped;
        for (int v : left_column) mapped.insert(mirror(v));
        CHECK(mapped == right_column);
        int mirrored_edges = 0;
        for (const Edge& e : lat.edges()) mirrored_edges += lat.edge_between(mirror(e.u), mirror(e.v)) >= 0;
        CHECK(mirrored_edges == lat.num_edges());
    }
}

TEST_CASE("interior is connected and indexed consistently")
{
    for (const auto& [L, d] : parameter_grid()) {
        const LatticeRect lat(L, d);
        if (lat.nx() < 3 || lat.ny() < 3) continue;
        REQUIRE(lat.num_interior() > 0);
        for (int k = 0; k < lat.num_interior(); ++k) CHECK(lat.interior_index(lat.interior_vertex(k)) == k);
        std::vector<char> seen(static_cast<std::size_t>(lat.num_vertices()), 0);
        std::vector<int> stack{lat.interior_vertex(0)};
        seen[stack.back()] = 1;
        int count = 0;
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            ++count;
            for (int w : lat.neighbors(v))
                if (w >= 0 && !lat.is_boundary(w) && !seen[w]) {
                    seen[w] = 1;
                    stack.push_back(w);
                }
        }
        CHECK(count == lat.num_interior());
    }
}

TEST_CASE("ids and coordinates round-trip")
{
    const LatticeRect lat(1.5, 0.1);
    for (int v = 0; v < lat.num_vertices(); ++v) {
        CHECK(lat.id(lat.coords(v)) == v);
        const auto [x, y] = lat.position(v);
        CHECK(x > 0.0);
        CHECK(x < 1.5);
        CHECK(y > 0.0);
        CHECK(y < 1.0);
    }
}
