#pragma once

#include "gffperc/gff.hpp"
#include "gffperc/lattice.hpp"
#include "gffperc/rng.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace gffperc {

/// Open/closed bit per lattice edge: open iff the metric-graph field is
/// nonnegative on the whole edge interval.
class EdgeStates {
public:
    EdgeStates() = default;
    explicit EdgeStates(int num_edges, bool open = false)
        : bits_(static_cast<std::size_t>(num_edges), open ? 1 : 0)
    {
    }

    int size() const { return static_cast<int>(bits_.size()); }
    bool is_open(int e) const { return bits_[static_cast<std::size_t>(e)] != 0; }
    void set(int e, bool open) { bits_[static_cast<std::size_t>(e)] = open ? 1 : 0; }
    int count_open() const;
    std::span<const std::uint8_t> bits() const { return bits_; }
    void resize(int num_edges) { bits_.assign(static_cast<std::size_t>(num_edges), 0); }

    bool operator==(const EdgeStates&) const = default;

private:
    std::vector<std::uint8_t> bits_;
};

/// Probability that a Brownian bridge on a unit lattice edge (length-2
/// interval, variance 2 per unit time) with endpoint values phi_u, phi_v
/// stays nonnegative: 1 - exp(-phi_u·phi_v/2) when both are positive, else 0.
/// Throws on NaN.
double edge_open_probability(double phi_u, double phi_v);

/// Samples every edge independently given the vertex values.
void sample_edge_states(const LatticeRect& lat, std::span<const double> values, Rng& rng,
                        EdgeStates& out);
EdgeStates sample_edge_states(const LatticeRect& lat, const Field& field, Seed seed);

/// A point on an edge at fractional distance r ∈ [0,1] from its first endpoint
/// (Edge::u).
struct EdgePoint {
    int edge = 0;
    double r = 0.0;
};

/// Green's function of the metric graph between two edge points, interpolated
/// bilinearly from the vertex Green's function with the same-edge bridge term
/// 4(min(r1,r2) - r1·r2).
double metric_green(const LatticeRect& lat, const GreenMatrix& green, EdgePoint w1, EdgePoint w2);

}  // namespace gffperc
