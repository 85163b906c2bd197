#include "gffperc/metric.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace gffperc {

int EdgeStates::count_open() const
{
    return static_cast<int>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

double edge_open_probability(double phi_u, double phi_v)
{
    if (std::isnan(phi_u) || std::isnan(phi_v))
        throw std::invalid_argument("edge_open_probability: NaN endpoint value");
    // A bridge started at 0 goes negative immediately; a negative endpoint is already closed.
    if (!(phi_u > 0.0) || !(phi_v > 0.0)) return 0.0;
    return -std::expm1(-0.5 * phi_u * phi_v);
}

void sample_edge_states(const LatticeRect& lat, std::span<const double> values, Rng& rng,
                        EdgeStates& out)
{
    if (values.size() != static_cast<std::size_t>(lat.num_vertices()))
        throw std::invalid_argument("sample_edge_states: field does not match lattice");
    if (out.size() != lat.num_edges()) out.resize(lat.num_edges());
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    const auto& edges = lat.edges();
    for (int e = 0; e < lat.num_edges(); ++e) {
        const double p = edge_open_probability(values[edges[e].u], values[edges[e].v]);
        // One uniform per edge keeps the stream layout independent of the field.
        const double x = uniform(rng);
        out.set(e, x < p);
    }
}

EdgeStates sample_edge_states(const LatticeRect& lat, const Field& field, Seed seed)
{
    Rng rng = make_rng(seed);
    EdgeStates out(lat.num_edges());
    sample_edge_states(lat, field.values, rng, out);
    return out;
}

double metric_green(const LatticeRect& lat, const GreenMatrix& green, EdgePoint w1, EdgePoint w2)
{
    if (!green.matches(lat)) throw std::invalid_argument("metric_green: lattice mismatch");
    for (const EdgePoint& w : {w1, w2}) {
        if (w.edge < 0 || w.edge >= lat.num_edges())
            throw std::invalid_argument("metric_green: edge id out of range");
        if (!(w.r >= 0.0 && w.r <= 1.0)) throw std::invalid_argument("metric_green: r outside [0,1]");
    }
    const Edge e1 = lat.edges()[w1.edge];
    const Edge e2 = lat.edges()[w2.edge];
    const double r1 = w1.r;
    const double r2 = w2.r;
    auto g = [&](int a, int b) { return green.at_vertices(lat, a, b); };
    double value = (1 - r1) * (1 - r2) * g(e1.u, e2.u) + r1 * r2 * g(e1.v, e2.v) +
                   (1 - r1) * r2 * g(e1.u, e2.v) + r1 * (1 - r2) * g(e1.v, e2.u);
    if (w1.edge == w2.edge) value += 4.0 * (std::min(r1, r2) - r1 * r2);
    return value;
}

}  // namespace gffperc
