#include <doctest.h>

#include "gffperc/metric.hpp"
#include "oracles.hpp"

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

using namespace gffperc;

TEST_CASE("edge_open_probability values")
{
    CHECK(edge_open_probability(0.0, 3.7) == 0.0);
    CHECK(edge_open_probability(3.7, 0.0) == 0.0);
    CHECK(edge_open_probability(-1.0, 5.0) == 0.0);
    CHECK(edge_open_probability(-1.0, -5.0) == 0.0);
    CHECK(edge_open_probability(1.0, 1.0) == doctest::Approx(1.0 - std::exp(-0.5)).epsilon(1e-15));
    CHECK(edge_open_probability(1.0, 1.0) == doctest::Approx(0.393469).epsilon(1e-6));
    CHECK(edge_open_probability(2.0, 3.0) == doctest::Approx(1.0 - std::exp(-3.0)).epsilon(1e-15));
    CHECK_THROWS_AS(edge_open_probability(std::nan(""), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(edge_open_probability(1.0, std::nan("")), std::invalid_argument);
}

TEST_CASE("edge_open_probability is monotone on the positive quadrant")
{
    Rng rng = make_rng(3);
    std::uniform_real_distribution<double> u(-2.0, 4.0);
    std::uniform_real_distribution<double> bump(0.0, 1.0);
    for (int t = 0; t < 10'000; ++t) {
        const double a = u(rng), b = u(rng), da = bump(rng), db = bump(rng);
        const double p = edge_open_probability(a, b);
        CHECK(p >= 0.0);
        CHECK(p < 1.0);
        if (a >= 0.0 && b >= 0.0) {
            CHECK(edge_open_probability(a + da, b) >= p);
            CHECK(edge_open_probability(a, b + db) >= p);
        } else {
            CHECK(p == 0.0);
        }
    }
}

TEST_CASE("unit-edge bridge survival matches a Lévy-construction Monte Carlo")
{
    const int levels = 12;
    const auto mc = oracle::bridge_positive_mc(1.0, 1.0, 40'000, levels, 17);
    const double allowance = oracle::bridge_monitoring_allowance(1.0, 1.0, levels);
    CHECK(std::abs(mc.mean - edge_open_probability(1.0, 1.0)) < 3.0 * mc.standard_error + allowance);
}

TEST_CASE("sample_edge_states")
{
    SUBCASE("constant field opens edges at the formula rate")
    {
        const LatticeRect lat(1.0, 1.0 / 40.0);
        const double lambda = 0.9;
        Field f;
        f.values.assign(static_cast<std::size_t>(lat.num_vertices()), lambda);
        long open = 0, total = 0;
        for (Seed s = 0; total < 100'000; ++s) {
            const EdgeStates w = sample_edge_states(lat, f, s);
            open += w.count_open();
            total += w.size();
        }
        const double p = 1.0 - std::exp(-lambda * lambda / 2.0);
        const double se = std::sqrt(p * (1 - p) / total);
        CHECK(std::abs(static_cast<double>(open) / total - p) < 4.0 * se);
    }
    SUBCASE("a negative vertex closes its four edges")
    {
        const LatticeRect lat(1.0, 0.125);
        Field f;
        f.values.assign(static_cast<std::size_t>(lat.num_vertices()), 3.0);
        const int v = lat.id(4, 4);
        f.values[v] = -0.1;
        for (Seed s = 0; s < 200; ++s) {
            const EdgeStates w = sample_edge_states(lat, f, s);
            for (int n : lat.neighbors(v)) CHECK_FALSE(w.is_open(lat.edge_between(v, n)));
        }
    }
    SUBCASE("zero boundary closes every boundary-incident edge")
    {
        const LatticeRect lat(1.5, 1.0 / 16.0);
        for (Seed s = 0; s < 100; ++s) {
            const Field f = sample_zero_boundary(lat, s);
            const EdgeStates w = sample_edge_states(lat, f, s + 1000);
            for (int e = 0; e < lat.num_edges(); ++e) {
                const Edge ed = lat.edges()[e];
                if (lat.is_boundary(ed.u) || lat.is_boundary(ed.v)) CHECK_FALSE(w.is_open(e));
            }
        }
    }
    SUBCASE("edges are conditionally independent")
    {
        const LatticeRect lat(1.0, 0.25);
        Field f;
        f.values.assign(static_cast<std::size_t>(lat.num_vertices()), 1.0);
        const int e1 = 0, e2 = lat.num_edges() - 1;
        const long n = 50'000;
        double s1 = 0, s2 = 0, s12 = 0;
        Rng rng = make_rng(88);
        EdgeStates w(lat.num_edges());
        for (long r = 0; r < n; ++r) {
            sample_edge_states(lat, f.values, rng, w);
            const double a = w.is_open(e1), b = w.is_open(e2);
            s1 += a;
            s2 += b;
            s12 += a * b;
        }
        const double m1 = s1 / n, m2 = s2 / n;
        const double corr = (s12 / n - m1 * m2) / std::sqrt(m1 * (1 - m1) * m2 * (1 - m2));
        CHECK(std::abs(corr) < 4.0 / std::sqrt(static_cast<double>(n)));
    }
}

TEST_CASE("metric Green interpolation")
{
    const LatticeRect lat(1.0, 0.25);
    const GreenMatrix g = dirichlet_green_dense(lat);
    const int centre = lat.id(2, 2);

    SUBCASE("edge endpoints reduce to the vertex Green function")
    {
        const int e = lat.edge_between(centre, lat.id(3, 2));
        const Edge ed = lat.edges()[e];
        CHECK(metric_green(lat, g, {e, 0.0}, {e, 0.0}) == doctest::Approx(g.at_vertices(lat, ed.u, ed.u)));
        CHECK(metric_green(lat, g, {e, 1.0}, {e, 1.0}) == doctest::Approx(g.at_vertices(lat, ed.v, ed.v)));
    }
    SUBCASE("midpoint of a boundary-boundary edge has variance 1")
    {
        const int e = lat.edge_between(lat.id(1, 1), lat.id(2, 1));
        CHECK(metric_green(lat, g, {e, 0.5}, {e, 0.5}) == doctest::Approx(1.0).epsilon(1e-15));
    }
    SUBCASE("midpoint of an edge from the single interior vertex is 1.25")
    {
        const int e = lat.edge_between(centre, lat.id(1, 2));
        CHECK(metric_green(lat, g, {e, 0.5}, {e, 0.5}) == doctest::Approx(1.25).epsilon(1e-14));
    }
    SUBCASE("symmetric in its arguments")
    {
        const LatticeRect big(1.0, 0.125);
        const GreenMatrix gb = dirichlet_green_dense(big);
        for (int e1 = 0; e1 < big.num_edges(); e1 += 9)
            for (int e2 = 0; e2 < big.num_edges(); e2 += 13)
                CHECK(metric_green(big, gb, {e1, 0.3}, {e2, 0.8}) ==
                      doctest::Approx(metric_green(big, gb, {e2, 0.8}, {e1, 0.3})));
    }
    SUBCASE("invalid input")
    {
        const LatticeRect other(1.0, 0.125);
        CHECK_THROWS_AS(metric_green(other, g, {0, 0.5}, {0, 0.5}), std::invalid_argument);
        CHECK_THROWS_AS(metric_green(lat, g, {0, 1.5}, {0, 0.5}), std::invalid_argument);
        CHECK_THROWS_AS(metric_green(lat, g, {-1, 0.5}, {0, 0.5}), std::invalid_argument);
    }
}
