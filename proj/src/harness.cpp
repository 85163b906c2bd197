#include "gffperc/harness.hpp"

#include "gffperc/lattice.hpp"
#include "gffperc/limits.hpp"
#include "gffperc/metric.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <thread>

namespace gffperc {

namespace {

constexpr double kWilsonZ = 1.959963984540054;

constexpr std::array<Event, 6> kAllEvents{Event::DiscreteAlt, Event::DiscreteZero, Event::MetricAlt,
                                          Event::MetricZero, Event::ClosedPivotal, Event::Gap};

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string lower(std::string_view s)
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::vector<std::string_view> split_list(std::string_view text)
{
    std::vector<std::string_view> parts;
    while (true) {
        const auto comma = text.find(',');
        const auto piece = trim(text.substr(0, comma));
        if (!piece.empty()) parts.push_back(piece);
        if (comma == std::string_view::npos) break;
        text.remove_prefix(comma + 1);
    }
    return parts;
}

double parse_number(std::string_view text, std::string_view what)
{
    text = trim(text);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || !std::isfinite(value))
        throw ConfigError("invalid " + std::string(what) + ": '" + std::string(text) + "'");
    return value;
}

double parse_fraction(std::string_view text)
{
    const auto slash = text.find('/');
    if (slash == std::string_view::npos) return parse_number(text, "delta");
    const double num = parse_number(text.substr(0, slash), "delta");
    const double den = parse_number(text.substr(slash + 1), "delta");
    if (den == 0.0) throw ConfigError("invalid delta: zero denominator");
    return num / den;
}

template <class Int>
Int parse_integer(std::string_view text, std::string_view what)
{
    text = trim(text);
    Int value{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw ConfigError("invalid " + std::string(what) + ": '" + std::string(text) + "'");
    return value;
}

bool parse_bool(std::string_view text)
{
    const std::string v = lower(trim(text));
    if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
    if (v == "0" || v == "false" || v == "no" || v == "off") return false;
    throw ConfigError("invalid boolean: '" + v + "'");
}

std::string format_number(double x)
{
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", x);
    return buf;
}

/// Splits [0,n) across worker threads as r = w, w+W, ...; rethrows the first
/// worker exception after all threads finish.
template <class Body>
void run_workers(int workers, Body&& body)
{
    if (workers <= 1) {
        body(0, 1);
        return;
    }
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            try {
                body(w, workers);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

int mode_slot(CrossingMode mode) { return static_cast<int>(mode); }

CrossingMode crossing_mode_of(Event event)
{
    switch (event) {
    case Event::DiscreteAlt: return CrossingMode::DiscreteAlt;
    case Event::DiscreteZero: return CrossingMode::DiscreteZero;
    case Event::MetricAlt: return CrossingMode::MetricAlt;
    case Event::MetricZero: return CrossingMode::MetricZero;
    default: throw std::logic_error("not a crossing event");
    }
}

std::pair<CrossingMode, CrossingMode> gap_pair(BoundaryKind bc)
{
    if (bc == BoundaryKind::Alternating) return {CrossingMode::DiscreteAlt, CrossingMode::MetricAlt};
    return {CrossingMode::DiscreteZero, CrossingMode::MetricZero};
}

HittingEstimate make_hitting(long successes, long n)
{
    HittingEstimate h;
    h.n = n;
    h.p_hat = n > 0 ? static_cast<double>(successes) / static_cast<double>(n) : 0.0;
    std::tie(h.ci_low, h.ci_high) = wilson_interval(successes, n);
    h.standard_error = n > 0 ? std::sqrt(h.p_hat * (1.0 - h.p_hat) / static_cast<double>(n)) : 0.0;
    return h;
}

}  // namespace

const char* to_string(Event event)
{
    switch (event) {
    case Event::DiscreteAlt: return "discrete_alt";
    case Event::DiscreteZero: return "discrete_zero";
    case Event::MetricAlt: return "metric_alt";
    case Event::MetricZero: return "metric_zero";
    case Event::ClosedPivotal: return "closed_pivotal";
    case Event::Gap: return "gap";
    }
    return "?";
}

Event parse_event(std::string_view name)
{
    const std::string key = lower(trim(name));
    if (key == "discrete_minus_metric_gap") return Event::Gap;
    for (Event e : kAllEvents)
        if (key == to_string(e)) return e;
    throw ConfigError("unknown event '" + std::string(name) + "'");
}

double ExperimentConfig::effective_lambda() const { return lambda_symbolic ? lambda0 : lambda; }

BoundaryCondition ExperimentConfig::boundary_condition() const
{
    if (bc == BoundaryKind::Zero) return BoundaryCondition::zero();
    return BoundaryCondition::alternating(effective_lambda());
}

int ExperimentConfig::resolved_workers() const
{
    if (workers > 0) return workers;
    if (const char* env = std::getenv("GFFPERC_WORKERS")) {
        const int w = std::atoi(env);
        if (w > 0) return w;
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

void ExperimentConfig::validate() const
{
    if (!(width > 0.0)) throw ConfigError("L must be positive");
    if (samples < 100) throw ConfigError("samples must be at least 100");
    if (events.empty()) throw ConfigError("no events configured");
    if (bc == BoundaryKind::Alternating && !(effective_lambda() > 0.0))
        throw ConfigError("lambda must be positive for the alternating boundary condition");
    for (double d : deltas) {
        try {
            LatticeRect(width, d);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
}

std::vector<double> parse_delta_list(std::string_view text)
{
    std::vector<double> out;
    for (auto piece : split_list(text)) out.push_back(parse_fraction(piece));
    return out;
}

std::vector<Event> parse_event_list(std::string_view text)
{
    std::vector<Event> out;
    for (auto piece : split_list(text)) out.push_back(parse_event(piece));
    return out;
}

void apply_setting(ExperimentConfig& config, std::string_view key_in, std::string_view value_in)
{
    const std::string key = lower(trim(key_in));
    const std::string_view value = trim(value_in);
    if (key == "l") {
        config.width = parse_fraction(value);
    } else if (key == "lambda") {
        if (lower(value) == "lambda0") {
            config.lambda_symbolic = true;
        } else {
            config.lambda_symbolic = false;
            config.lambda = parse_number(value, "lambda");
        }
    } else if (key == "lambda0") {
        config.lambda0 = parse_number(value, "lambda0");
    } else if (key == "bc") {
        const std::string v = lower(value);
        if (v == "zero")
            config.bc = BoundaryKind::Zero;
        else if (v == "alternating" || v == "alt")
            config.bc = BoundaryKind::Alternating;
        else
            throw ConfigError("unknown bc '" + std::string(value) + "'");
    } else if (key == "mode" || key == "modes" || key == "event" || key == "events") {
        config.events = parse_event_list(value);
    } else if (key == "delta" || key == "deltas") {
        config.deltas = parse_delta_list(value);
    } else if (key == "samples") {
        config.samples = parse_integer<long>(value, "samples");
    } else if (key == "seed") {
        config.seed = parse_integer<Seed>(value, "seed");
    } else if (key == "workers") {
        config.workers = parse_integer<int>(value, "workers");
    } else if (key == "out") {
        config.out = std::string(value);
    } else if (key == "timing") {
        config.timing = parse_bool(value);
    } else {
        throw ConfigError("unknown config key '" + std::string(key_in) + "'");
    }
}

ExperimentConfig parse_config(std::istream& in)
{
    ExperimentConfig config;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view view = line;
        if (const auto hash = view.find('#'); hash != std::string_view::npos) view = view.substr(0, hash);
        view = trim(view);
        if (view.empty()) continue;
        const auto eq = view.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected 'key = value'");
        try {
            apply_setting(config, view.substr(0, eq), view.substr(eq + 1));
        } catch (const ConfigError& e) {
            throw ConfigError("line " + std::to_string(lineno) + ": " + e.what());
        }
    }
    return config;
}

ExperimentConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config '" + path + "'");
    return parse_config(in);
}

std::pair<double, double> wilson_interval(long successes, long n)
{
    if (n <= 0) return {0.0, 1.0};
    const double nn = static_cast<double>(n);
    const double p = static_cast<double>(successes) / nn;
    const double z2 = kWilsonZ * kWilsonZ;
    const double denom = 1.0 + z2 / nn;
    const double centre = (p + z2 / (2.0 * nn)) / denom;
    const double half = kWilsonZ * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
    double lo = std::max(0.0, centre - half);
    double hi = std::min(1.0, centre + half);
    lo = std::min(lo, p);
    hi = std::max(hi, p);
    return {lo, hi};
}

std::vector<Estimate> estimate_events(const ExperimentConfig& config, double delta)
{
    if (config.samples < 100) throw ConfigError("samples must be at least 100");
    if (config.events.empty()) throw ConfigError("no events configured");
    const LatticeRect lat(config.width, delta);
    const BoundaryCondition bc = config.boundary_condition();
    const Seed point_seed = derive_seed_for(config.seed, delta);

    std::array<bool, 4> need{};
    bool need_edges = false;
    bool need_pivotal = false;
    for (Event e : config.events) {
        if (e == Event::Gap) {
            const auto [d, m] = gap_pair(config.bc);
            need[mode_slot(d)] = need[mode_slot(m)] = true;
        } else if (e == Event::ClosedPivotal) {
            need_pivotal = true;
        } else {
            need[mode_slot(crossing_mode_of(e))] = true;
        }
    }
    need_edges = need_pivotal || need[mode_slot(CrossingMode::MetricAlt)] || need[mode_slot(CrossingMode::MetricZero)];

    std::vector<unsigned char> touches_boundary;
    if (need_edges) {
        touches_boundary.resize(lat.edges().size());
        for (std::size_t e = 0; e < lat.edges().size(); ++e)
            touches_boundary[e] = lat.is_boundary(lat.edges()[e].u) || lat.is_boundary(lat.edges()[e].v);
    }

    const std::size_t num_events = config.events.size();
    const int workers = static_cast<int>(std::min<long>(config.resolved_workers(), config.samples));
    // per worker: event successes, boundary opens, inclusion violations
    std::vector<std::vector<long>> hits(static_cast<std::size_t>(workers), std::vector<long>(num_events, 0));
    std::vector<long> opens(static_cast<std::size_t>(workers), 0);
    std::vector<long> violations(static_cast<std::size_t>(workers), 0);

    const auto start = std::chrono::steady_clock::now();
    run_workers(workers, [&](int w, int stride) {
        FieldSampler sampler(lat, bc);
        std::vector<double> values(static_cast<std::size_t>(lat.num_vertices()));
        EdgeStates edges(lat.num_edges());
        auto& my_hits = hits[static_cast<std::size_t>(w)];
        for (long r = w; r < config.samples; r += stride) {
            Rng rng = make_rng(derive_seed(point_seed, static_cast<std::uint64_t>(r)));
            sampler.sample(rng, values);
            if (need_edges) {
                sample_edge_states(lat, values, rng, edges);
                for (std::size_t e = 0; e < touches_boundary.size(); ++e)
                    if (touches_boundary[e] && edges.is_open(static_cast<int>(e))) ++opens[static_cast<std::size_t>(w)];
            }
            std::array<bool, 4> cross{};
            for (CrossingMode m : {CrossingMode::DiscreteAlt, CrossingMode::DiscreteZero}) {
                if (need[mode_slot(m)]) cross[mode_slot(m)] = crossing(lat, std::span<const double>(values), m);
            }
            for (CrossingMode m : {CrossingMode::MetricAlt, CrossingMode::MetricZero}) {
                if (need[mode_slot(m)]) cross[mode_slot(m)] = crossing(lat, edges, m);
            }
            for (auto [d, m] : {std::pair{CrossingMode::DiscreteAlt, CrossingMode::MetricAlt},
                                std::pair{CrossingMode::DiscreteZero, CrossingMode::MetricZero}}) {
                if (need[mode_slot(d)] && need[mode_slot(m)] && cross[mode_slot(m)] && !cross[mode_slot(d)])
                    ++violations[static_cast<std::size_t>(w)];
            }
            const bool pivotal = need_pivotal && closed_pivotal_exists(lat, edges).exists;
            for (std::size_t k = 0; k < num_events; ++k) {
                const Event e = config.events[k];
                bool hit = false;
                if (e == Event::ClosedPivotal) {
                    hit = pivotal;
                } else if (e == Event::Gap) {
                    const auto [d, m] = gap_pair(config.bc);
                    hit = cross[mode_slot(d)] && !cross[mode_slot(m)];
                } else {
                    hit = cross[mode_slot(crossing_mode_of(e))];
                }
                if (hit) ++my_hits[k];
            }
        }
    });
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    const long total_opens = std::accumulate(opens.begin(), opens.end(), 0L);
    const long total_violations = std::accumulate(violations.begin(), violations.end(), 0L);
    const bool has_gap = std::find(config.events.begin(), config.events.end(), Event::Gap) != config.events.end();
    if (has_gap && total_violations > 0)
        throw std::logic_error("inclusion violated: metric crossing without discrete crossing in " +
                               std::to_string(total_violations) + " replicas");

    std::vector<Estimate> out;
    out.reserve(num_events);
    for (std::size_t k = 0; k < num_events; ++k) {
        long successes = 0;
        for (const auto& h : hits) successes += h[k];
        Estimate est;
        est.event = config.events[k];
        est.delta = delta;
        est.n = config.samples;
        est.p_hat = static_cast<double>(successes) / static_cast<double>(config.samples);
        std::tie(est.ci_low, est.ci_high) = wilson_interval(successes, config.samples);
        est.seed = config.seed;
        est.seconds = seconds;
        est.boundary_edge_opens = total_opens;
        est.inclusion_violations = total_violations;
        out.push_back(est);
    }
    return out;
}

Estimate estimate_event(const ExperimentConfig& config, double delta, Event event)
{
    ExperimentConfig single = config;
    single.events = {event};
    return estimate_events(single, delta).front();
}

double loglog_slope(const std::vector<double>& deltas, const std::vector<double>& p)
{
    if (deltas.size() != p.size() || deltas.size() < 2) return std::nan("");
    const std::size_t n = deltas.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!(p[i] > 0.0) || !(deltas[i] < 1.0)) return std::nan("");
        const double x = std::log(std::log(1.0 / deltas[i]));
        const double y = std::log(p[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double nn = static_cast<double>(n);
    const double den = nn * sxx - sx * sx;
    if (den == 0.0) return std::nan("");
    return (nn * sxy - sx * sy) / den;
}

SweepResult sweep(const ExperimentConfig& config)
{
    if (config.deltas.size() < 3) throw ConfigError("sweep needs at least three delta values");
    config.validate();
    SweepResult result;
    for (double d : config.deltas) {
        auto rows = estimate_events(config, d);
        result.rows.insert(result.rows.end(), rows.begin(), rows.end());
    }

    std::vector<std::size_t> order(config.deltas.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return config.deltas[a] > config.deltas[b]; });
    const std::size_t num_events = config.events.size();
    for (std::size_t k = 0; k < num_events; ++k) {
        std::vector<double> ds;
        std::vector<double> ps;
        for (std::size_t idx : order) {
            ds.push_back(config.deltas[idx]);
            ps.push_back(result.rows[idx * num_events + k].p_hat);
        }
        SweepSummary s;
        s.event = config.events[k];
        s.loglog_slope = loglog_slope(ds, ps);
        s.monotone_decreasing = true;
        for (std::size_t i = 1; i < ps.size(); ++i)
            if (!(ps[i] < ps[i - 1])) s.monotone_decreasing = false;
        result.summaries.push_back(s);
    }
    return result;
}

std::string csv_quote(std::string_view field)
{
    if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
    std::string out = "\"";
    for (char c : field) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

void write_sweep_csv(std::ostream& out, const ExperimentConfig& config, const SweepResult& result)
{
    const std::string width = format_number(config.width);
    const std::string lambda = config.bc == BoundaryKind::Zero ? "0" : format_number(config.effective_lambda());
    const std::string bc = config.bc == BoundaryKind::Zero ? "zero" : "alternating";
    out << "L,lambda,bc,event,delta,n,p_hat,ci_low,ci_high,seed,seconds\r\n";
    auto row = [&](std::initializer_list<std::string> cells) {
        bool first = true;
        for (const auto& c : cells) {
            if (!first) out << ',';
            out << csv_quote(c);
            first = false;
        }
        out << "\r\n";
    };
    for (const auto& e : result.rows) {
        row({width, lambda, bc, to_string(e.event), format_number(e.delta), std::to_string(e.n),
             format_number(e.p_hat), format_number(e.ci_low), format_number(e.ci_high),
             std::to_string(e.seed), config.timing ? format_number(e.seconds) : std::string()});
    }
    for (const auto& s : result.summaries) {
        const std::string name = to_string(s.event);
        row({width, lambda, bc, name + ":loglog_slope", "", "", format_number(s.loglog_slope), "", "",
             std::to_string(config.seed), ""});
        row({width, lambda, bc, name + ":monotone_decreasing", "", "", s.monotone_decreasing ? "1" : "0", "", "",
             std::to_string(config.seed), ""});
    }
}

HittingEstimate estimate_sle_hitting(double x0, double dt, long n, Seed seed, int workers, double absorb_epsilon)
{
    if (n <= 0) throw ConfigError("samples must be positive");
    workers = static_cast<int>(std::clamp<long>(workers, 1, n));
    std::vector<long> hits(static_cast<std::size_t>(workers), 0);
    DiffusionOptions options;
    options.absorb_epsilon = absorb_epsilon;
    options.record = false;
    run_workers(workers, [&](int w, int stride) {
        for (long r = w; r < n; r += stride) {
            Rng rng = make_rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
            if (simulate_sle_diffusion(x0, dt, rng, options).absorbed_at > 0) ++hits[static_cast<std::size_t>(w)];
        }
    });
    return make_hitting(std::accumulate(hits.begin(), hits.end(), 0L), n);
}

CoupledHitting estimate_sle_hitting_coupled(double x0, double dt, long n, Seed seed, int workers,
                                            double absorb_epsilon)
{
    if (n <= 0) throw ConfigError("samples must be positive");
    workers = static_cast<int>(std::clamp<long>(workers, 1, n));
    std::vector<long> coarse(static_cast<std::size_t>(workers), 0);
    std::vector<long> fine(static_cast<std::size_t>(workers), 0);
    run_workers(workers, [&](int w, int stride) {
        for (long r = w; r < n; r += stride) {
            Rng rng = make_rng(derive_seed(seed, static_cast<std::uint64_t>(r)));
            const auto [c, f] = sle_absorption_coupled(x0, dt, rng, absorb_epsilon);
            if (c > 0) ++coarse[static_cast<std::size_t>(w)];
            if (f > 0) ++fine[static_cast<std::size_t>(w)];
        }
    });
    CoupledHitting out;
    out.coarse = make_hitting(std::accumulate(coarse.begin(), coarse.end(), 0L), n);
    out.fine = make_hitting(std::accumulate(fine.begin(), fine.end(), 0L), n);
    out.difference = out.coarse.p_hat - out.fine.p_hat;
    return out;
}

}  // namespace gffperc
