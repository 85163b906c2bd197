#include <doctest.h>

#include "gffperc/limits.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

using namespace gffperc;

namespace {

double agm(double a, double b)
{
    for (int it = 0; it < 40; ++it) {
        const double m = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = m;
    }
    return a;
}

}  // namespace

TEST_CASE("elliptic K against known values and quadrature")
{
    CHECK(elliptic_k(0.0) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
    CHECK(elliptic_k(std::sqrt(0.5)) == doctest::Approx(1.8540746773013719).epsilon(1e-14));
    for (double k : {0.01, 0.1, 0.3, 0.5, 0.7, 0.9, 0.99, 0.999}) {
        CAPTURE(k);
        CHECK(std::abs(elliptic_k(k) - oracle::quadrature_elliptic_k(k)) < 1e-12);
    }
    CHECK_THROWS_AS(elliptic_k(1.0), std::invalid_argument);
    CHECK_THROWS_AS(elliptic_k(-0.1), std::invalid_argument);
}

TEST_CASE("modulus inverts the period ratio")
{
    for (double L : {0.25, 0.5, 1.0, 1.5, 2.0, 4.0}) {
        CAPTURE(L);
        const double k = modulus_for_aspect(L);
        REQUIRE(k > 0.0);
        REQUIRE(k < 1.0);
        const double kp = std::sqrt((1 - k) * (1 + k));
        CHECK(agm(1.0, kp) / agm(1.0, k) == doctest::Approx(2.0 / L).epsilon(1e-12));
        CHECK(k == doctest::Approx(oracle::sc_modulus(L)).epsilon(1e-8));
    }
    CHECK(modulus_for_aspect(1.0) == doctest::Approx(3.0 - 2.0 * std::sqrt(2.0)).epsilon(1e-13));
    CHECK(modulus_for_aspect(2.0) > modulus_for_aspect(1.0));
    CHECK_THROWS_AS(modulus_for_aspect(0.0), std::invalid_argument);
}

TEST_CASE("crossing limit")
{
    CHECK(crossing_limit(1.0) == doctest::Approx(0.5).epsilon(1e-12));
    double previous = 1.0;
    for (double L : {0.25, 0.5, 1.0, 2.0, 4.0}) {
        CAPTURE(L);
        CHECK(crossing_limit(L) < previous);
        previous = crossing_limit(L);
        // duality: crossing the L×1 rectangle one way or the 1×L rectangle the other way
        CHECK(crossing_limit(L) + crossing_limit(1.0 / L) == doctest::Approx(1.0).epsilon(1e-11));
        CHECK(crossing_limit(L) == doctest::Approx(oracle::sc_crossing_limit(L)).epsilon(1e-8));
        const auto im = conformal_images(L);
        CHECK(im.ya < im.yb);
        CHECK(im.yb < im.yc);
        CHECK(im.yc < im.yd);
        CHECK(crossing_limit(L) == doctest::Approx(cross_ratio(im.ya, im.yb, im.yc, im.yd)));
        const double r = (1 - im.k) / (1 + im.k);
        CHECK(crossing_limit(L) == doctest::Approx(r * r).epsilon(1e-13));
    }
    CHECK(crossing_limit(2.0) < crossing_limit(1.0));
    CHECK_THROWS_AS(cross_ratio(0, 2, 1, 3), std::invalid_argument);
}

TEST_CASE("SLE hitting probability matches the cross-ratio after a Möbius shift")
{
    for (double L : {0.5, 1.0, 2.0}) {
        const auto im = conformal_images(L);
        const auto m = [&](double t) { return (t - im.yb) / (im.yd - t); };
        CHECK(sle_hitting_probability(m(im.ya), m(im.yc)) ==
              doctest::Approx(crossing_limit(L)).epsilon(1e-12));
    }
    CHECK(sle_hitting_probability(-1.0, 1.0) == doctest::Approx(0.5));
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.1, 2.0);
    for (int t = 0; t < 1000; ++t) {
        // order-preserving Möbius map x -> (a x + b)/(c x + d), ad - bc > 0, pole left of all points
        const double ya = -u(rng) - 1.0, yb = ya + u(rng), yc = yb + u(rng), yd = yc + u(rng);
        const double pole = ya - u(rng), a = u(rng), c = u(rng), shift = u(rng) - 1.0;
        const auto f = [&](double x) { return (a * x + shift) / (c * (x - pole)); };
        const double det = a * (-c * pole) - shift * c;
        if (!(det > 0)) continue;
        CHECK(cross_ratio(f(ya), f(yb), f(yc), f(yd)) ==
              doctest::Approx(cross_ratio(ya, yb, yc, yd)).epsilon(1e-12));
    }
    CHECK(sle_hitting_probability(-1.0, 3.0) == doctest::Approx(0.25));
    CHECK_THROWS_AS(sle_hitting_probability(1.0, 2.0), std::invalid_argument);
}

TEST_CASE("driving diffusion")
{
    SUBCASE("paths stay in [-1,1] and end at ±1")
    {
        for (Seed s = 0; s < 100; ++s) {
            const auto p = simulate_sle_diffusion(0.3, 1e-3, s);
            CHECK(std::abs(p.absorbed_at) == 1);
            CHECK(p.values.back() == static_cast<double>(p.absorbed_at));
            CHECK(p.values.size() == p.absorption_step + 1);
            for (double v : p.values) {
                CHECK(v >= -1.0);
                CHECK(v <= 1.0);
            }
        }
    }
    SUBCASE("the same seed reproduces the path")
    {
        const auto a = simulate_sle_diffusion(-0.2, 1e-4, 9);
        const auto b = simulate_sle_diffusion(-0.2, 1e-4, 9);
        CHECK(a.values == b.values);
    }
    SUBCASE("unrecorded paths keep the endpoints")
    {
        DiffusionOptions o;
        o.record = false;
        const auto a = simulate_sle_diffusion(0.1, 1e-4, 4);
        const auto b = simulate_sle_diffusion(0.1, 1e-4, 4, o);
        CHECK(b.values.size() == 2);
        CHECK(b.absorbed_at == a.absorbed_at);
        CHECK(b.absorption_step == a.absorption_step);
    }
    SUBCASE("step bound and argument checks")
    {
        DiffusionOptions o;
        o.max_steps = 3;
        CHECK_THROWS_AS(simulate_sle_diffusion(0.0, 1e-4, 1, o), std::runtime_error);
        CHECK_THROWS_AS(simulate_sle_diffusion(1.0, 1e-4, 1), std::invalid_argument);
        CHECK_THROWS_AS(simulate_sle_diffusion(0.0, 0.1, 1), std::invalid_argument);
    }
    SUBCASE("W is a martingale: P(+1) = (1 + x0)/2")
    {
        const long n = 4'000;
        for (double x0 : {-0.5, 0.0, 0.5}) {
            DiffusionOptions o;
            o.record = false;
            long plus = 0;
            for (long r = 0; r < n; ++r) plus += simulate_sle_diffusion(x0, 1e-3, derive_seed(31, r), o).absorbed_at > 0;
            const double p = (1 + x0) / 2;
            CHECK(std::abs(static_cast<double>(plus) / n - p) < 4.0 * std::sqrt(p * (1 - p) / n) + 0.01);
        }
    }
}

TEST_CASE("coordinate change reproduces the driving diffusion")
{
    for (Seed s = 0; s < 20; ++s) {
        const auto path = simulate_sle_diffusion(0.4, 1e-4, s);
        const auto c = coordinate_change_path(path);
        REQUIRE(c.t.size() == path.values.size());
        CHECK(c.t.front() == 0.0);
        CHECK(c.v_right.front() - c.v_left.front() == doctest::Approx(1.0));
        double worst = 0.0;
        for (std::size_t k = 0; k < c.t.size(); ++k) {
            if (k > 0) CHECK(c.t[k] > c.t[k - 1]);
            CHECK(c.v_left[k] <= c.y[k] + 1e-12);
            CHECK(c.y[k] <= c.v_right[k] + 1e-12);
            const double w = (2 * c.y[k] - c.v_left[k] - c.v_right[k]) / (c.v_right[k] - c.v_left[k]);
            worst = std::max(worst, std::abs(w - path.values[k]));
        }
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("Brownian line hitting")
{
    CHECK(normal_tail(0.0) == doctest::Approx(0.5));
    CHECK(normal_tail(1.959963984540054) == doctest::Approx(0.025).epsilon(1e-12));
    CHECK(normal_tail(40.0) >= 0.0);
    // m = 0: reflection principle 2·P(B_T ≥ b)
    CHECK(bm_line_hitting_cdf(0.0, 1.0, 1.0) == doctest::Approx(2 * normal_tail(1.0)).epsilon(1e-14));
    CHECK(bm_line_hitting_cdf(0.0, 1.0, 1e8) == doctest::Approx(1.0).epsilon(1e-3));
    // a receding line (m < 0) is hit with probability exp(2bm); a rising one almost surely
    CHECK(bm_line_hitting_cdf(-0.5, 1.0, 1e8) == doctest::Approx(std::exp(-1.0)).epsilon(1e-10));
    CHECK(bm_line_hitting_cdf(0.5, 1.0, 1e8) == doctest::Approx(1.0).epsilon(1e-10));
    for (double m : {-1.0, -0.5, 0.0, 0.2, 0.8})
        for (double T : {0.5, 2.0})
            CHECK(bm_line_hitting_cdf(m + 0.1, 0.7, T) >= bm_line_hitting_cdf(m, 0.7, T));
    double prev = 0.0;
    for (double T : {0.1, 0.5, 1.0, 2.0, 10.0}) {
        const double p = bm_line_hitting_cdf(0.3, 0.7, T);
        CHECK(p >= prev);
        CHECK(p <= 1.0);
        prev = p;
    }
    const auto mc = oracle::bm_line_hitting_mc(0.3, 0.7, 1.0, 1e-3, 20'000, 12);
    const double exact = bm_line_hitting_cdf(0.3, 0.7, 1.0);
    CHECK(std::abs(mc.mean - exact) < 4.0 * mc.standard_error + oracle::bm_monitoring_allowance(0.3, 0.7, 1.0, 1e-3));
    CHECK_THROWS_AS(bm_line_hitting_cdf(0.0, -1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(bm_line_hitting_cdf(0.0, 1.0, 0.0), std::invalid_argument);
}
