#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace gffperc {

/// Boundary arcs of the discretized rectangle, plus the interior vertices
/// adjacent to the left and right arcs.
enum class Arc { Left, Bottom, Right, Top, InnerLeft, InnerRight };

const char* to_string(Arc arc);

struct GridPoint {
    int i = 0;  // column, 1..nx
    int j = 0;  // row, 1..ny
    bool operator==(const GridPoint&) const = default;
};

/// Undirected nearest-neighbour edge, u < v.
struct Edge {
    int u = 0;
    int v = 0;
};

/// The grid R_L ∩ δZ² for the open rectangle (0,L)×(0,1).
///
/// Vertices sit at (iδ, jδ), 1 ≤ i ≤ nx, 1 ≤ j ≤ ny, with row-major ids
/// id = (j-1)*nx + (i-1). Boundary vertices are the outermost frame. Corners
/// are a = top-left, b = bottom-left, c = bottom-right, d = top-right, and
/// the arcs are the half-open counter-clockwise pieces
///   Left = [a,b), Bottom = [b,c), Right = [c,d), Top = [d,a).
///
/// Immutable after construction.
class LatticeRect {
public:
    LatticeRect(double width, double delta);

    double width() const { return width_; }
    double delta() const { return delta_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    int num_vertices() const { return nx_ * ny_; }
    int num_edges() const { return static_cast<int>(edges_.size()); }

    int id(int i, int j) const { return (j - 1) * nx_ + (i - 1); }
    int id(GridPoint p) const { return id(p.i, p.j); }
    GridPoint coords(int id) const { return {id % nx_ + 1, id / nx_ + 1}; }
    std::pair<double, double> position(int id) const;
    bool contains(int i, int j) const { return i >= 1 && i <= nx_ && j >= 1 && j <= ny_; }

    bool is_boundary(int id) const;
    /// Left/Bottom/Right/Top label of a boundary vertex; nullopt in the interior.
    std::optional<Arc> boundary_arc(int id) const;

    int corner_a() const { return id(1, ny_); }
    int corner_b() const { return id(1, 1); }
    int corner_c() const { return id(nx_, 1); }
    int corner_d() const { return id(nx_, ny_); }

    /// Interior grid extents (nx-2, ny-2); either may be zero.
    int interior_nx() const { return nx_ > 2 ? nx_ - 2 : 0; }
    int interior_ny() const { return ny_ > 2 ? ny_ - 2 : 0; }
    int num_interior() const { return interior_nx() * interior_ny(); }
    /// Row-major position of an interior vertex in the interior grid, -1 on the boundary.
    int interior_index(int id) const;
    int interior_vertex(int index) const;

    const std::vector<Edge>& edges() const { return edges_; }
    /// Edge id joining two adjacent vertices, -1 if they are not adjacent.
    int edge_between(int u, int v) const;

    /// Up to four neighbours; unused slots are -1.
    std::array<int, 4> neighbors(int id) const;

    /// Vertices of an arc in counter-clockwise order.
    std::vector<int> arc_vertices(Arc which) const;

    /// One byte per vertex, 1 for members of the arc.
    std::vector<unsigned char> arc_mask(Arc which) const;

private:
    double width_;
    double delta_;
    int nx_;
    int ny_;
    std::vector<Edge> edges_;
    // edge ids indexed by vertex id: [0] = edge to (i+1,j), [1] = edge to (i,j+1)
    std::vector<std::array<int, 2>> forward_edges_;
};

/// Validates 0 < delta <= min(L,1)/3 and builds the lattice.
LatticeRect build_lattice(double width, double delta);

/// Number of grid points strictly inside (0, extent) on a mesh delta.
int points_inside(double extent, double delta);

}  // namespace gffperc
