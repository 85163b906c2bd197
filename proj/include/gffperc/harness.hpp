#pragma once

#include "gffperc/gff.hpp"
#include "gffperc/percolation.hpp"
#include "gffperc/rng.hpp"

#include <cmath>
#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace gffperc {

/// Value substituted for the symbolic `LAMBDA0` height, √(π/2).
inline const double kDefaultLambda0 = std::sqrt(std::numbers::pi / 2.0);

enum class Event { DiscreteAlt, DiscreteZero, MetricAlt, MetricZero, ClosedPivotal, Gap };

const char* to_string(Event event);
/// Accepts the crossing-mode names, `closed_pivotal`, and `gap`
/// (alias `discrete_minus_metric_gap`).
Event parse_event(std::string_view name);

/// Thrown for malformed configuration or command-line input.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct ExperimentConfig {
    double width = 1.0;
    double lambda = 1.0;
    bool lambda_symbolic = false;  // `lambda = LAMBDA0`
    double lambda0 = kDefaultLambda0;
    BoundaryKind bc = BoundaryKind::Alternating;
    std::vector<Event> events{Event::DiscreteAlt};
    std::vector<double> deltas;
    long samples = 1000;
    Seed seed = 1;
    int workers = 0;  // 0: GFFPERC_WORKERS, else hardware concurrency
    std::string out;
    bool timing = false;  // fill the seconds column (breaks byte-identical reruns)

    double effective_lambda() const;
    BoundaryCondition boundary_condition() const;
    int resolved_workers() const;
    /// Throws ConfigError on samples < 100, an inadmissible δ, or λ ≤ 0.
    void validate() const;
};

/// Applies one `key = value` setting. Keys: L, lambda, lambda0, bc, mode,
/// delta, samples, seed, workers, out, timing. `mode` and `delta` take comma
/// lists; deltas may be written as fractions (1/32).
void apply_setting(ExperimentConfig& config, std::string_view key, std::string_view value);
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

std::vector<double> parse_delta_list(std::string_view text);
std::vector<Event> parse_event_list(std::string_view text);

/// 95% Wilson score interval.
std::pair<double, double> wilson_interval(long successes, long n);

struct Estimate {
    Event event = Event::DiscreteAlt;
    double delta = 0.0;
    double p_hat = 0.0;
    long n = 0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    Seed seed = 0;
    double seconds = 0.0;
    long boundary_edge_opens = 0;    // open edges touching ∂V (zero bc sanity counter)
    long inclusion_violations = 0;   // replicas with a metric crossing but no discrete one
};

/// Runs config.samples replicas at one mesh and evaluates every configured
/// event on the same coupled samples. Replica r draws from
/// derive_seed(derive_seed_for(config.seed, delta), r), so the result does
/// not depend on the worker count. Throws std::logic_error if the gap event
/// sees an inclusion violation.
std::vector<Estimate> estimate_events(const ExperimentConfig& config, double delta);
Estimate estimate_event(const ExperimentConfig& config, double delta, Event event);

struct SweepSummary {
    Event event = Event::DiscreteAlt;
    double loglog_slope = 0.0;  // least-squares slope of log p̂ against log log(1/δ)
    bool monotone_decreasing = false;
};

struct SweepResult {
    std::vector<Estimate> rows;  // δ-major, events in config order
    std::vector<SweepSummary> summaries;
};

/// Requires at least three deltas.
SweepResult sweep(const ExperimentConfig& config);

/// Least-squares slope of log p against log log(1/δ); NaN if any p is 0.
double loglog_slope(const std::vector<double>& deltas, const std::vector<double>& p);

/// Columns L,lambda,bc,event,delta,n,p_hat,ci_low,ci_high,seed,seconds, then
/// summary rows `<event>:loglog_slope` and `<event>:monotone_decreasing`.
void write_sweep_csv(std::ostream& out, const ExperimentConfig& config, const SweepResult& result);
std::string csv_quote(std::string_view field);

struct HittingEstimate {
    double p_hat = 0.0;
    long n = 0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double standard_error = 0.0;
};

/// Monte Carlo of P(absorbed at +1) for the time-changed driving diffusion.
HittingEstimate estimate_sle_hitting(double x0, double dt, long n, Seed seed, int workers = 1,
                                     double absorb_epsilon = 1e-6);

/// Same paths integrated at dt and dt/2; `difference` = p(dt) - p(dt/2).
struct CoupledHitting {
    HittingEstimate coarse;
    HittingEstimate fine;
    double difference = 0.0;
};

CoupledHitting estimate_sle_hitting_coupled(double x0, double dt, long n, Seed seed, int workers = 1,
                                            double absorb_epsilon = 1e-6);

}  // namespace gffperc
