#pragma once

#include "gffperc/lattice.hpp"
#include "gffperc/rng.hpp"
#include "gffperc/sine_transform.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace gffperc {

enum class BoundaryKind : std::uint32_t { Zero = 0, Alternating = 1 };

struct BoundaryCondition {
    BoundaryKind kind = BoundaryKind::Zero;
    double lambda = 0.0;

    static BoundaryCondition zero() { return {}; }
    /// +λ on Left ∪ Right, -λ on Bottom ∪ Top. Requires λ > 0.
    static BoundaryCondition alternating(double lambda);

    bool operator==(const BoundaryCondition&) const = default;
};

std::string to_string(const BoundaryCondition& bc);

/// Per-vertex boundary data of `bc`; interior entries are 0.
std::vector<double> boundary_values(const LatticeRect& lat, const BoundaryCondition& bc);

/// Vertex values indexed by lattice vertex id.
struct Field {
    std::vector<double> values;
    BoundaryCondition bc;

    double operator[](int id) const { return values[static_cast<std::size_t>(id)]; }
};

/// Dirichlet Green's function on the interior, in units of expected
/// occupation time of the rate-1 continuous-time walk: G = 4·Δ⁻¹.
/// Indexed by LatticeRect::interior_index.
class GreenMatrix {
public:
    GreenMatrix(int nx, int ny, std::vector<double> entries);

    int size() const { return size_; }
    int lattice_nx() const { return nx_; }
    int lattice_ny() const { return ny_; }
    double operator()(int a, int b) const
    {
        return entries_[static_cast<std::size_t>(a) * size_ + b];
    }
    /// Green's function between lattice vertices; zero if either is a boundary vertex.
    double at_vertices(const LatticeRect& lat, int u, int v) const;
    bool matches(const LatticeRect& lat) const { return lat.nx() == nx_ && lat.ny() == ny_; }

private:
    int nx_;
    int ny_;
    int size_;
    std::vector<double> entries_;
};

inline constexpr int kDenseGreenLimit = 10000;

/// Dense Cholesky solve of the Dirichlet Laplacian. Throws if the interior
/// has more than kDenseGreenLimit vertices.
GreenMatrix dirichlet_green_dense(const LatticeRect& lat);

/// Eigenvalue of the rate-1 generator for sine mode (j,k), 1-based.
double generator_eigenvalue(const LatticeRect& lat, int j, int k);

/// G(u,v) between interior vertices by summing the sine eigen-expansion.
/// O(number of interior vertices); used where the dense solve is too large.
double spectral_green(const LatticeRect& lat, int u, int v);

/// Discrete-harmonic interpolation of boundary data given per vertex id
/// (interior entries are ignored). Residual is below 1e-10 in the max norm.
Field harmonic_extension(const LatticeRect& lat, std::span<const double> boundary_data);

/// Max-norm residual of the mean-value property over interior vertices.
double harmonic_residual(const LatticeRect& lat, std::span<const double> values);

/// Reusable GFF sampler for one lattice and boundary condition. Sampling is a
/// pure function of the supplied RNG state. Not thread-safe; one per worker.
class FieldSampler {
public:
    FieldSampler(const LatticeRect& lat, BoundaryCondition bc,
                 SineTransform2D::Method method = SineTransform2D::Method::Automatic);

    const LatticeRect& lattice() const { return *lat_; }
    const BoundaryCondition& boundary_condition() const { return bc_; }
    /// Harmonic extension of the boundary data.
    const std::vector<double>& mean() const { return mean_; }

    /// Writes one sample into `out` (size = number of vertices).
    void sample(Rng& rng, std::span<double> out);
    Field sample(Rng& rng);

private:
    const LatticeRect* lat_;
    BoundaryCondition bc_;
    std::vector<double> mean_;
    std::vector<double> inv_sqrt_eigen_;
    std::vector<double> work_;
    std::optional<SineTransform2D> transform_;
    std::normal_distribution<double> normal_;
};

/// Centred GFF with Dirichlet covariance; boundary values are exactly 0.
Field sample_zero_boundary(const LatticeRect& lat, Seed seed);

/// Harmonic extension of the boundary condition plus a zero-boundary sample.
Field sample_with_boundary(const LatticeRect& lat, const BoundaryCondition& bc, Seed seed);

/// Binary field dump: 32-byte little-endian header
///   "GFFPERC1" | u32 nx | u32 ny | u32 bc tag | u32 reserved (0) | f64 λ
/// followed by nx·ny little-endian f64 values in vertex-id (row-major) order.
struct FieldDump {
    int nx = 0;
    int ny = 0;
    Field field;
};

void write_field(std::ostream& out, const LatticeRect& lat, const Field& field);
FieldDump read_field(std::istream& in);

}  // namespace gffperc
