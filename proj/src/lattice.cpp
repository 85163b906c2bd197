#include "gffperc/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gffperc {

const char* to_string(Arc arc)
{
    switch (arc) {
    case Arc::Left: return "left";
    case Arc::Bottom: return "bottom";
    case Arc::Right: return "right";
    case Arc::Top: return "top";
    case Arc::InnerLeft: return "inner_left";
    case Arc::InnerRight: return "inner_right";
    }
    return "?";
}

int points_inside(double extent, double delta)
{
    const double ratio = extent / delta;
    const double nearest = std::round(ratio);
    if (std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio))
        return static_cast<int>(nearest) - 1;
    return static_cast<int>(std::floor(ratio));
}

LatticeRect::LatticeRect(double width, double delta)
    : width_(width), delta_(delta)
{
    if (!(width > 0.0) || !(delta > 0.0) || !std::isfinite(width) || !std::isfinite(delta))
        throw std::invalid_argument("lattice: L and delta must be positive and finite");
    const double limit = std::min(width, 1.0) / 3.0;
    if (delta > limit * (1.0 + 1e-12))
        throw std::invalid_argument("lattice: delta = " + std::to_string(delta) +
                                    " exceeds min(L,1)/3 = " + std::to_string(limit));

    nx_ = points_inside(width, delta);
    ny_ = points_inside(1.0, delta);

    forward_edges_.assign(static_cast<std::size_t>(nx_ * ny_), {-1, -1});
    edges_.reserve(static_cast<std::size_t>(2 * nx_ * ny_));
    for (int j = 1; j <= ny_; ++j) {
        for (int i = 1; i <= nx_; ++i) {
            const int u = id(i, j);
            if (i < nx_) {
                forward_edges_[u][0] = static_cast<int>(edges_.size());
                edges_.push_back({u, id(i + 1, j)});
            }
            if (j < ny_) {
                forward_edges_[u][1] = static_cast<int>(edges_.size());
                edges_.push_back({u, id(i, j + 1)});
            }
        }
    }
}

std::pair<double, double> LatticeRect::position(int vid) const
{
    const GridPoint p = coords(vid);
    return {p.i * delta_, p.j * delta_};
}

bool LatticeRect::is_boundary(int vid) const
{
    const GridPoint p = coords(vid);
    return p.i == 1 || p.i == nx_ || p.j == 1 || p.j == ny_;
}

std::optional<Arc> LatticeRect::boundary_arc(int vid) const
{
    const auto [i, j] = coords(vid);
    // Half-open arcs: each corner belongs to the arc it starts.
    if (i == 1 && j >= 2) return Arc::Left;
    if (j == 1 && i <= nx_ - 1) return Arc::Bottom;
    if (i == nx_ && j <= ny_ - 1) return Arc::Right;
    if (j == ny_ && i >= 2) return Arc::Top;
    return std::nullopt;
}

int LatticeRect::interior_index(int vid) const
{
    const auto [i, j] = coords(vid);
    if (i <= 1 || i >= nx_ || j <= 1 || j >= ny_) return -1;
    return (j - 2) * interior_nx() + (i - 2);
}

int LatticeRect::interior_vertex(int index) const
{
    const int mx = interior_nx();
    return id(index % mx + 2, index / mx + 2);
}

int LatticeRect::edge_between(int u, int v) const
{
    if (u > v) std::swap(u, v);
    const GridPoint pu = coords(u);
    const GridPoint pv = coords(v);
    if (pv.j == pu.j && pv.i == pu.i + 1) return forward_edges_[u][0];
    if (pv.i == pu.i && pv.j == pu.j + 1) return forward_edges_[u][1];
    return -1;
}

std::array<int, 4> LatticeRect::neighbors(int vid) const
{
    const auto [i, j] = coords(vid);
    std::array<int, 4> out{-1, -1, -1, -1};
    if (i < nx_) out[0] = vid + 1;
    if (j < ny_) out[1] = vid + nx_;
    if (i > 1) out[2] = vid - 1;
    if (j > 1) out[3] = vid - nx_;
    return out;
}

std::vector<int> LatticeRect::arc_vertices(Arc which) const
{
    std::vector<int> out;
    switch (which) {
    case Arc::Left:
        for (int j = ny_; j >= 2; --j) out.push_back(id(1, j));
        break;
    case Arc::Bottom:
        for (int i = 1; i <= nx_ - 1; ++i) out.push_back(id(i, 1));
        break;
    case Arc::Right:
        for (int j = 1; j <= ny_ - 1; ++j) out.push_back(id(nx_, j));
        break;
    case Arc::Top:
        for (int i = nx_; i >= 2; --i) out.push_back(id(i, ny_));
        break;
    case Arc::InnerLeft:
    case Arc::InnerRight: {
        const Arc outer = which == Arc::InnerLeft ? Arc::Left : Arc::Right;
        std::vector<unsigned char> seen(static_cast<std::size_t>(num_vertices()), 0);
        for (int v : arc_vertices(outer)) {
            for (int u : neighbors(v)) {
                if (u < 0 || is_boundary(u) || seen[u]) continue;
                seen[u] = 1;
                out.push_back(u);
            }
        }
        break;
    }
    }
    return out;
}

std::vector<unsigned char> LatticeRect::arc_mask(Arc which) const
{
    std::vector<unsigned char> mask(static_cast<std::size_t>(num_vertices()), 0);
    for (int v : arc_vertices(which)) mask[v] = 1;
    return mask;
}

LatticeRect build_lattice(double width, double delta)
{
    return LatticeRect(width, delta);
}

}  // namespace gffperc
