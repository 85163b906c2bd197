#pragma once

#include "gffperc/gff.hpp"
#include "gffperc/lattice.hpp"
#include "gffperc/metric.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace gffperc {

/// The four horizontal crossing events.
///   DiscreteAlt:  path with φ ≥ 0 from Left to Right.
///   DiscreteZero: interior path with φ > 0 from InnerLeft to InnerRight.
///   MetricAlt:    open-edge path from Left to Right.
///   MetricZero:   open path over interior–interior edges, InnerLeft to InnerRight.
enum class CrossingMode { DiscreteAlt, DiscreteZero, MetricAlt, MetricZero };

const char* to_string(CrossingMode mode);
CrossingMode parse_crossing_mode(std::string_view name);
bool is_metric(CrossingMode mode);

/// Discrete modes only; throws std::invalid_argument for a metric mode.
bool crossing(const LatticeRect& lat, const Field& field, CrossingMode mode);
bool crossing(const LatticeRect& lat, std::span<const double> values, CrossingMode mode);
/// Metric modes only; throws std::invalid_argument for a discrete mode.
bool crossing(const LatticeRect& lat, const EdgeStates& edges, CrossingMode mode);

/// Vertex masks (one byte per vertex id) of the first passage sets.
struct FirstPassageSets {
    std::vector<unsigned char> positive;  // components of {φ ≥ 0} meeting the boundary
    std::vector<unsigned char> left;      // ... meeting Left
    std::vector<unsigned char> right;     // ... meeting Right
    std::vector<unsigned char> negative;  // components of {φ ≤ 0} meeting the boundary
    std::vector<unsigned char> bottom;    // ... meeting Bottom
    std::vector<unsigned char> top;       // ... meeting Top
};

FirstPassageSets first_passage_sets(const LatticeRect& lat, const Field& field);

/// Open-edge clusters of ω meeting the Left / Right arcs. Closed edges carry no
/// sign information, so only the nonnegative sets exist on this layer.
struct MetricFirstPassageSets {
    std::vector<unsigned char> left_vertices;
    std::vector<unsigned char> right_vertices;
    std::vector<unsigned char> left_edges;
    std::vector<unsigned char> right_edges;
};

MetricFirstPassageSets first_passage_sets(const LatticeRect& lat, const EdgeStates& edges);

struct PivotalResult {
    bool exists = false;
    std::vector<int> edges;  // closed pivotal edge ids, ascending
};

/// Closed edges whose opening creates a Left–Right crossing in ω.
PivotalResult closed_pivotal_exists(const LatticeRect& lat, const EdgeStates& edges);

/// A dual vertex (i, j) is the centre of the plaquette with lower-left primal
/// vertex (i, j), at ((i+½)δ, (j+½)δ).
struct DualVertex {
    int i = 0;
    int j = 0;
    bool operator==(const DualVertex&) const = default;
};

struct LevelLinePath {
    std::vector<DualVertex> vertices;
    Arc terminal = Arc::Right;  // Right or Top
};

/// Interface on the dual lattice starting at (δ/2, 3δ/2) with φ ≥ 0 on its
/// left and φ < 0 on its right, turning left on ties. Stops on reaching the
/// dual boundary beside Right (the bottom-right sign change) or Top (the
/// top-left sign change). Requires an alternating boundary condition.
LevelLinePath trace_level_line(const LatticeRect& lat, const Field& field);

/// Primal vertices (left, right) of the directed dual step from -> to.
std::pair<GridPoint, GridPoint> dual_step_sides(DualVertex from, DualVertex to);

/// CSV exports for plotting. Level line rows: step,x,y (lattice units × δ).
void write_level_line_csv(std::ostream& out, const LatticeRect& lat, const LevelLinePath& path);
/// Mask rows: vertex,i,j,value,positive,left,right,negative,bottom,top.
void write_components_csv(std::ostream& out, const LatticeRect& lat, const Field& field,
                          const FirstPassageSets& sets);
/// Edge rows: edge,u,v,open.
void write_edges_csv(std::ostream& out, const LatticeRect& lat, const EdgeStates& edges);

}  // namespace gffperc
