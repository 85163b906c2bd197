// gffperc: sample fields, estimate crossing probabilities, run δ-sweeps and
// compare against the conformal limit.

#include "gffperc/gff.hpp"
#include "gffperc/harness.hpp"
#include "gffperc/lattice.hpp"
#include "gffperc/limits.hpp"
#include "gffperc/metric.hpp"
#include "gffperc/percolation.hpp"
#include "oracles.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace {

using namespace gffperc;

struct Overrides {
    std::string config;
    std::vector<std::pair<std::string, std::string>> settings;
};

// Registers --config and the per-key overrides on a subcommand; values are
// applied in the order config file, then flags.
void add_experiment_flags(CLI::App* cmd, Overrides& o, bool with_out = true)
{
    cmd->add_option("--config", o.config, "key = value experiment file");
    static const std::vector<std::pair<const char*, const char*>> keys = {
        {"L", "rectangle width"},
        {"delta", "mesh size(s), comma list; fractions allowed"},
        {"lambda", "boundary height, or LAMBDA0"},
        {"bc", "zero | alternating"},
        {"mode", "event(s): discrete_alt, discrete_zero, metric_alt, metric_zero, closed_pivotal, gap"},
        {"samples", "replicas per point"},
        {"seed", "base seed"},
        {"workers", "worker threads (default: $GFFPERC_WORKERS or all cores)"},
    };
    for (const auto& [key, help] : keys) {
        std::string k = key;
        cmd->add_option_function<std::string>(
            "--" + k, [&o, k](const std::string& v) { o.settings.emplace_back(k, v); }, help);
    }
    if (with_out)
        cmd->add_option_function<std::string>(
            "--out", [&o](const std::string& v) { o.settings.emplace_back("out", v); }, "output path");
}

ExperimentConfig resolve(const Overrides& o)
{
    ExperimentConfig config = o.config.empty() ? ExperimentConfig{} : load_config(o.config);
    for (const auto& [k, v] : o.settings) apply_setting(config, k, v);
    return config;
}

std::string bc_name(const ExperimentConfig& c) { return c.bc == BoundaryKind::Zero ? "zero" : "alternating"; }

int run_sample(const ExperimentConfig& config)
{
    if (config.deltas.empty()) throw ConfigError("sample needs --delta");
    const LatticeRect lat(config.width, config.deltas.front());
    const BoundaryCondition bc = config.boundary_condition();
    const std::string prefix = config.out.empty() ? "sample" : config.out;

    Rng rng = make_rng(config.seed);
    FieldSampler sampler(lat, bc);
    const Field field = sampler.sample(rng);
    EdgeStates edges(lat.num_edges());
    sample_edge_states(lat, field.values, rng, edges);

    {
        std::ofstream out(prefix + ".field", std::ios::binary);
        write_field(out, lat, field);
    }
    {
        std::ofstream out(prefix + ".edges.csv");
        write_edges_csv(out, lat, edges);
    }
    {
        std::ofstream out(prefix + ".components.csv");
        write_components_csv(out, lat, field, first_passage_sets(lat, field));
    }
    std::printf("lattice %dx%d  bc=%s  lambda=%.6g  seed=%llu\n", lat.nx(), lat.ny(), bc_name(config).c_str(),
                bc.lambda, static_cast<unsigned long long>(config.seed));
    for (auto m : {CrossingMode::DiscreteAlt, CrossingMode::DiscreteZero})
        std::printf("%-14s %d\n", to_string(m), crossing(lat, field, m) ? 1 : 0);
    for (auto m : {CrossingMode::MetricAlt, CrossingMode::MetricZero})
        std::printf("%-14s %d\n", to_string(m), crossing(lat, edges, m) ? 1 : 0);
    std::printf("%-14s %d\n", "closed_pivotal", closed_pivotal_exists(lat, edges).exists ? 1 : 0);
    if (bc.kind == BoundaryKind::Alternating) {
        const LevelLinePath path = trace_level_line(lat, field);
        std::ofstream out(prefix + ".level.csv");
        write_level_line_csv(out, lat, path);
        std::printf("level line     %zu steps, terminal %s\n", path.vertices.size() - 1, to_string(path.terminal));
    }
    std::printf("wrote %s.{field,edges.csv,components.csv%s}\n", prefix.c_str(),
                bc.kind == BoundaryKind::Alternating ? ",level.csv" : "");
    return 0;
}

int run_estimate(const ExperimentConfig& config)
{
    if (config.deltas.empty()) throw ConfigError("estimate needs --delta");
    config.validate();
    std::printf("L=%g  bc=%s  lambda=%.10g%s  samples=%ld  seed=%llu\n", config.width, bc_name(config).c_str(),
                config.bc == BoundaryKind::Zero ? 0.0 : config.effective_lambda(),
                config.lambda_symbolic ? " (LAMBDA0)" : "", config.samples,
                static_cast<unsigned long long>(config.seed));
    for (double d : config.deltas) {
        for (const auto& e : estimate_events(config, d)) {
            std::printf("%-15s delta=%-10.6g p=%.6f  ci=[%.6f, %.6f]  n=%ld  %.2fs", to_string(e.event), e.delta,
                        e.p_hat, e.ci_low, e.ci_high, e.n, e.seconds);
            if (e.event == Event::Gap) std::printf("  violations=%ld", e.inclusion_violations);
            if (config.bc == BoundaryKind::Zero && (e.event == Event::MetricZero || e.event == Event::MetricAlt))
                std::printf("  boundary_opens=%ld", e.boundary_edge_opens);
            std::printf("\n");
        }
    }
    if (config.bc == BoundaryKind::Alternating)
        std::printf("conformal limit %.10f\n", crossing_limit(config.width));
    return 0;
}

int run_sweep(const ExperimentConfig& config)
{
    const SweepResult result = sweep(config);
    if (config.out.empty() || config.out == "-") {
        write_sweep_csv(std::cout, config, result);
    } else {
        std::ofstream out(config.out, std::ios::binary);
        if (!out) throw ConfigError("cannot write '" + config.out + "'");
        write_sweep_csv(out, config, result);
        std::fprintf(stderr, "wrote %s\n", config.out.c_str());
    }
    return 0;
}

int run_limit(double width)
{
    const ConformalImages img = conformal_images(width);
    std::printf("%.12f\n", crossing_limit(width));
    std::printf("k  %.15g\n", img.k);
    std::printf("ya %.15g\nyb %.15g\nyc %.15g\nyd %.15g\n", img.ya, img.yb, img.yc, img.yd);
    return 0;
}

int run_sle(double x0, double dt, long samples, Seed seed, int workers)
{
    const auto est = estimate_sle_hitting(x0, dt, samples, seed, workers);
    const double analytic = (1.0 + x0) / 2.0;
    std::printf("x0=%g  dt=%g  n=%ld\n", x0, dt, samples);
    std::printf("empirical %.6f  ci=[%.6f, %.6f]  se=%.6f\n", est.p_hat, est.ci_low, est.ci_high,
                est.standard_error);
    std::printf("analytic  %.6f\n", analytic);
    return 0;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Level-set percolation of discrete and metric-graph Gaussian free fields"};
    app.require_subcommand(1);

    Overrides sample_o, estimate_o, sweep_o;
    add_experiment_flags(app.add_subcommand("sample", "dump one field, its edge states and level line"), sample_o);
    add_experiment_flags(app.add_subcommand("estimate", "Monte Carlo estimate at each delta"), estimate_o);
    add_experiment_flags(app.add_subcommand("sweep", "delta sweep written as CSV"), sweep_o);

    double limit_width = 1.0;
    auto* limit = app.add_subcommand("limit", "conformal limit of the crossing probability");
    limit->add_option("--L", limit_width, "rectangle width")->required();

    double x0 = 0.0, dt = 1e-4;
    long sle_samples = 100000;
    Seed sle_seed = 1;
    int sle_workers = 0;
    auto* sle = app.add_subcommand("sle", "hitting probability of the driving diffusion");
    sle->add_option("--x0", x0, "start in (-1,1)");
    sle->add_option("--dt", dt, "time step");
    sle->add_option("--samples", sle_samples, "paths");
    sle->add_option("--seed", sle_seed, "seed");
    sle->add_option("--workers", sle_workers, "worker threads");

    Seed selftest_seed = 20240601;
    auto* selftest = app.add_subcommand("selftest", "compare the library against reference implementations");
    selftest->add_option("--seed", selftest_seed, "seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n\n" << app.help();
        return 1;
    }

    try {
        if (app.got_subcommand("sample")) return run_sample(resolve(sample_o));
        if (app.got_subcommand("estimate")) return run_estimate(resolve(estimate_o));
        if (app.got_subcommand("sweep")) return run_sweep(resolve(sweep_o));
        if (app.got_subcommand("limit")) return run_limit(limit_width);
        if (app.got_subcommand("sle")) {
            ExperimentConfig c;
            c.workers = sle_workers;
            return run_sle(x0, dt, sle_samples, sle_seed, c.resolved_workers());
        }
        if (app.got_subcommand("selftest")) return gffperc::oracle::run_selftest(std::cout, selftest_seed) == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 2;
    }
    return 1;
}
