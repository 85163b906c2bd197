#include "gffperc/limits.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace gffperc {

namespace {

double agm(double a, double b)
{
    for (int iter = 0; iter < 64 && std::abs(a - b) > 1e-16 * a; ++iter) {
        const double next_a = 0.5 * (a + b);
        b = std::sqrt(a * b);
        a = next_a;
    }
    return 0.5 * (a + b);
}

double complementary(double k) { return std::sqrt((1.0 - k) * (1.0 + k)); }

// K(k')/K(k), evaluated without forming k' twice so that neither end of (0,1) loses precision.
double period_ratio(double k) { return agm(1.0, complementary(k)) / agm(1.0, k); }

// log Φ̄(z) that stays finite far into the tail.
double log_normal_tail(double z)
{
    const double tail = normal_tail(z);
    if (tail > 0.0) return std::log(tail);
    return -0.5 * z * z - std::log(z * std::sqrt(2.0 * std::numbers::pi));
}

}  // namespace

double elliptic_k(double k)
{
    if (!(k >= 0.0 && k < 1.0)) throw std::invalid_argument("elliptic_k: modulus must lie in [0,1)");
    return std::numbers::pi / (2.0 * agm(1.0, complementary(k)));
}

double modulus_for_aspect(double width)
{
    if (!(width > 0.0) || !std::isfinite(width))
        throw std::invalid_argument("modulus_for_aspect: L must be positive");
    const double target = 2.0 / width;
    double lo = 0.0;  // ratio → ∞
    double hi = 1.0;  // ratio → 0
    for (;;) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (period_ratio(mid) > target)
            lo = mid;
        else
            hi = mid;
    }
    const double k = std::abs(period_ratio(lo) - target) <= std::abs(period_ratio(hi) - target) ? lo : hi;
    if (!(k > 0.0 && k < 1.0)) throw std::domain_error("modulus_for_aspect: aspect ratio out of range");
    return k;
}

ConformalImages conformal_images(double width)
{
    const double k = modulus_for_aspect(width);
    return {-1.0 / k, -1.0, 1.0, 1.0 / k, k};
}

double cross_ratio(double ya, double yb, double yc, double yd)
{
    if (!(ya < yb && yb < yc && yc < yd)) throw std::invalid_argument("cross_ratio: points are not increasing");
    return (yb - ya) * (yd - yc) / ((yc - ya) * (yd - yb));
}

double crossing_limit(double width)
{
    const ConformalImages img = conformal_images(width);
    return cross_ratio(img.ya, img.yb, img.yc, img.yd);
}

double sle_hitting_probability(double y_left, double y_right)
{
    if (!(y_left < 0.0 && 0.0 < y_right))
        throw std::invalid_argument("sle_hitting_probability: need yL < 0 < yR");
    return -y_left / (y_right - y_left);
}

namespace {

void check_diffusion_args(double x0, double dt)
{
    if (!(x0 > -1.0 && x0 < 1.0)) throw std::invalid_argument("sle diffusion: x0 must lie in (-1,1)");
    if (!(dt > 0.0 && dt <= 1e-3)) throw std::invalid_argument("sle diffusion: dt must lie in (0, 1e-3]");
}

// One Euler–Maruyama step of dW = √(2(1-W²)) dB, clamped to [-1,1].
inline double diffusion_step(double x, double sqrt_dt, double xi)
{
    const double q = std::sqrt(std::max(0.0, 2.0 * (1.0 - x) * (1.0 + x)));
    return std::clamp(x + q * sqrt_dt * xi, -1.0, 1.0);
}

inline bool absorbed(double x, double eps) { return std::abs(x) >= 1.0 - eps; }

}  // namespace

DiffusionPath simulate_sle_diffusion(double x0, double dt, Rng& rng, const DiffusionOptions& options)
{
    check_diffusion_args(x0, dt);
    DiffusionPath path;
    path.x0 = x0;
    path.dt = dt;
    path.values.push_back(x0);
    std::normal_distribution<double> normal;
    const double sqrt_dt = std::sqrt(dt);
    double x = x0;
    std::size_t step = 0;
    while (!absorbed(x, options.absorb_epsilon)) {
        if (step >= options.max_steps) throw std::runtime_error("sle diffusion: step limit reached");
        x = diffusion_step(x, sqrt_dt, normal(rng));
        ++step;
        if (options.record) path.values.push_back(x);
    }
    path.absorbed_at = x > 0.0 ? 1 : -1;
    path.absorption_step = step;
    if (options.record)
        path.values.back() = path.absorbed_at;
    else
        path.values.push_back(path.absorbed_at);
    return path;
}

DiffusionPath simulate_sle_diffusion(double x0, double dt, Seed seed, const DiffusionOptions& options)
{
    Rng rng = make_rng(seed);
    return simulate_sle_diffusion(x0, dt, rng, options);
}

std::pair<int, int> sle_absorption_coupled(double x0, double dt, Rng& rng, double absorb_epsilon)
{
    check_diffusion_args(x0, dt);
    std::normal_distribution<double> normal;
    const double sqrt_coarse = std::sqrt(dt);
    const double sqrt_fine = std::sqrt(0.5 * dt);
    double coarse = x0;
    double fine = x0;
    bool coarse_done = absorbed(coarse, absorb_epsilon);
    bool fine_done = absorbed(fine, absorb_epsilon);
    while (!coarse_done || !fine_done) {
        const double xi1 = normal(rng);
        const double xi2 = normal(rng);
        if (!fine_done) {
            fine = diffusion_step(fine, sqrt_fine, xi1);
            fine_done = absorbed(fine, absorb_epsilon);
            if (!fine_done) {
                fine = diffusion_step(fine, sqrt_fine, xi2);
                fine_done = absorbed(fine, absorb_epsilon);
            }
        }
        if (!coarse_done) {
            coarse = diffusion_step(coarse, sqrt_coarse, (xi1 + xi2) * std::numbers::sqrt2 * 0.5);
            coarse_done = absorbed(coarse, absorb_epsilon);
        }
    }
    return {coarse > 0.0 ? 1 : -1, fine > 0.0 ? 1 : -1};
}

CoordinateChangedPath coordinate_change_path(const DiffusionPath& path)
{
    const auto& w = path.values;
    if (w.empty()) throw std::invalid_argument("coordinate_change_path: empty path");
    const std::size_t n = w.size();
    const double dt = path.dt;
    const double w0 = w.front();

    CoordinateChangedPath out;
    out.s.resize(n);
    out.t.resize(n);
    out.y.resize(n);
    out.v_left.resize(n);
    out.v_right.resize(n);

    const double v_left0 = -0.5 * (1.0 + w0);
    const double v_right0 = 0.5 * (1.0 - w0);
    double int_time = 0.0;   // ∫ e^{2u}(1 - W²) du
    double int_w = 0.0;      // ∫ e^u W du
    double int_minus = 0.0;  // ∫ e^u (1 - W) du
    double int_plus = 0.0;   // ∫ e^u (1 + W) du
    for (std::size_t k = 0; k < n; ++k) {
        const double s = static_cast<double>(k) * dt;
        if (k > 0) {
            const double s0 = s - dt;
            const double e0 = std::exp(s0);
            const double e1 = std::exp(s);
            const double a = w[k - 1];
            const double b = w[k];
            int_time += 0.5 * dt * (e0 * e0 * (1.0 - a * a) + e1 * e1 * (1.0 - b * b));
            int_w += 0.5 * dt * (e0 * a + e1 * b);
            int_minus += 0.5 * dt * (e0 * (1.0 - a) + e1 * (1.0 - b));
            int_plus += 0.5 * dt * (e0 * (1.0 + a) + e1 * (1.0 + b));
        }
        out.s[k] = s;
        out.t[k] = int_time / 8.0;
        out.y[k] = 0.5 * std::exp(s) * w[k] + 0.5 * int_w - 0.5 * w0;
        out.v_left[k] = v_left0 - 0.5 * int_minus;
        out.v_right[k] = v_right0 + 0.5 * int_plus;
    }
    return out;
}

double normal_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double bm_line_hitting_cdf(double m, double b, double horizon)
{
    if (!(b > 0.0)) throw std::invalid_argument("bm_line_hitting_cdf: b must be positive");
    if (!(horizon > 0.0)) throw std::invalid_argument("bm_line_hitting_cdf: T must be positive");
    const double root = std::sqrt(horizon);
    const double direct = normal_tail(b / root - m * root);
    const double reflected = std::exp(2.0 * b * m + log_normal_tail(b / root + m * root));
    return std::min(1.0, direct + reflected);
}

}  // namespace gffperc
