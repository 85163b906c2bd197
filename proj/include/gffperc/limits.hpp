#pragma once

#include "gffperc/rng.hpp"

#include <cstddef>
#include <utility>
#include <vector>

namespace gffperc {

/// Complete elliptic integral of the first kind K(k) by the arithmetic–geometric mean.
/// Requires 0 ≤ k < 1.
double elliptic_k(double k);

/// Modulus k ∈ (0,1) with K(√(1-k²))/K(k) = 2/L: the Schwarz–Christoffel
/// parameter mapping the rectangle (0,L)×(0,1) to the upper half-plane with
/// corners a,b,c,d ↦ -1/k, -1, 1, 1/k.
double modulus_for_aspect(double width);

/// Real-line images of the rectangle corners under the canonical elliptic map.
struct ConformalImages {
    double ya = 0.0;
    double yb = 0.0;
    double yc = 0.0;
    double yd = 0.0;
    double k = 0.0;
};

ConformalImages conformal_images(double width);

/// (yb-ya)(yd-yc) / ((yc-ya)(yd-yb)) for ya < yb < yc < yd.
double cross_ratio(double ya, double yb, double yc, double yd);

/// Limiting probability of a nonnegative Left–Right crossing of the rectangle
/// of width L: the cross-ratio of the corner images, ((1-k)/(1+k))².
double crossing_limit(double width);

/// Probability that the two-force-point SLE₄(-2;-2) hits the right force
/// point first: -yL / (yR - yL). Requires yL < 0 < yR.
double sle_hitting_probability(double y_left, double y_right);

struct DiffusionOptions {
    double absorb_epsilon = 1e-6;
    std::size_t max_steps = 200'000'000;
    bool record = true;
};

/// Euler–Maruyama path of dW = √(2(1-W²)) dB on [-1,1], absorbed when
/// |W| ≥ 1 - ε (snapped to ±1).
struct DiffusionPath {
    double x0 = 0.0;
    double dt = 0.0;
    std::vector<double> values;  // values[k] at time k·dt; only the endpoints if not recorded
    int absorbed_at = 0;         // -1 or +1
    std::size_t absorption_step = 0;
};

/// Requires x0 ∈ (-1,1) and 0 < dt ≤ 1e-3.
DiffusionPath simulate_sle_diffusion(double x0, double dt, Seed seed, const DiffusionOptions& options = {});
DiffusionPath simulate_sle_diffusion(double x0, double dt, Rng& rng, const DiffusionOptions& options = {});

/// Absorption sides of one Brownian path integrated at steps dt and dt/2
/// simultaneously (each coarse increment is the sum of two fine ones).
std::pair<int, int> sle_absorption_coupled(double x0, double dt, Rng& rng, double absorb_epsilon = 1e-6);

/// Time change back to the Loewner driving process. Arrays are aligned with
/// the path grid s_k = k·dt: t[k] = t(s_k), y[k] = Y at t[k], and the force
/// points v_left[k], v_right[k].
struct CoordinateChangedPath {
    std::vector<double> s;
    std::vector<double> t;
    std::vector<double> y;
    std::vector<double> v_left;
    std::vector<double> v_right;
};

CoordinateChangedPath coordinate_change_path(const DiffusionPath& path);

/// Standard normal upper tail 1 - Φ(x).
double normal_tail(double x);

/// P(τ ≤ T) for τ = inf{t ≥ 0 : B_t ≤ m·t - b}, standard Brownian motion B.
/// Requires b > 0, T > 0.
double bm_line_hitting_cdf(double m, double b, double horizon);

}  // namespace gffperc
