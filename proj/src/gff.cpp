#include "gffperc/gff.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <istream>
#include <numbers>
#include <ostream>
#include <stdexcept>

namespace gffperc {

BoundaryCondition BoundaryCondition::alternating(double lambda)
{
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw std::invalid_argument("alternating boundary condition needs lambda > 0");
    return {BoundaryKind::Alternating, lambda};
}

std::string to_string(const BoundaryCondition& bc)
{
    return bc.kind == BoundaryKind::Zero ? "zero" : "alternating";
}

std::vector<double> boundary_values(const LatticeRect& lat, const BoundaryCondition& bc)
{
    std::vector<double> f(static_cast<std::size_t>(lat.num_vertices()), 0.0);
    if (bc.kind == BoundaryKind::Zero) return f;
    for (int v = 0; v < lat.num_vertices(); ++v) {
        const auto arc = lat.boundary_arc(v);
        if (!arc) continue;
        f[v] = (*arc == Arc::Left || *arc == Arc::Right) ? bc.lambda : -bc.lambda;
    }
    return f;
}

GreenMatrix::GreenMatrix(int nx, int ny, std::vector<double> entries)
    : nx_(nx), ny_(ny), entries_(std::move(entries))
{
    size_ = static_cast<int>(std::lround(std::sqrt(static_cast<double>(entries_.size()))));
    if (static_cast<std::size_t>(size_) * size_ != entries_.size())
        throw std::invalid_argument("GreenMatrix: entries are not square");
}

double GreenMatrix::at_vertices(const LatticeRect& lat, int u, int v) const
{
    if (!matches(lat)) throw std::invalid_argument("GreenMatrix: lattice mismatch");
    const int a = lat.interior_index(u);
    const int b = lat.interior_index(v);
    if (a < 0 || b < 0) return 0.0;
    return (*this)(a, b);
}

GreenMatrix dirichlet_green_dense(const LatticeRect& lat)
{
    const int n = lat.num_interior();
    if (n > kDenseGreenLimit)
        throw std::invalid_argument("dirichlet_green_dense: " + std::to_string(n) +
                                    " interior vertices exceed the dense limit");
    Eigen::MatrixXd laplacian = Eigen::MatrixXd::Zero(n, n);
    for (int a = 0; a < n; ++a) {
        laplacian(a, a) = 4.0;
        for (int u : lat.neighbors(lat.interior_vertex(a))) {
            if (u < 0) continue;
            const int b = lat.interior_index(u);
            if (b >= 0) laplacian(a, b) = -1.0;
        }
    }
    Eigen::MatrixXd g = laplacian.llt().solve(4.0 * Eigen::MatrixXd::Identity(n, n));
    // Symmetrize away rounding.
    g = 0.5 * (g + g.transpose()).eval();
    std::vector<double> entries(static_cast<std::size_t>(n) * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) entries[static_cast<std::size_t>(a) * n + b] = g(a, b);
    return GreenMatrix(lat.nx(), lat.ny(), std::move(entries));
}

double generator_eigenvalue(const LatticeRect& lat, int j, int k)
{
    const double mx = lat.interior_nx();
    const double my = lat.interior_ny();
    return 1.0 - 0.5 * (std::cos(std::numbers::pi * j / (mx + 1)) +
                        std::cos(std::numbers::pi * k / (my + 1)));
}

double spectral_green(const LatticeRect& lat, int u, int v)
{
    const int mx = lat.interior_nx();
    const int my = lat.interior_ny();
    if (lat.interior_index(u) < 0 || lat.interior_index(v) < 0) return 0.0;
    const GridPoint pu = lat.coords(u);
    const GridPoint pv = lat.coords(v);
    std::vector<double> ax(static_cast<std::size_t>(mx));
    std::vector<double> ay(static_cast<std::size_t>(my));
    for (int j = 0; j < mx; ++j)
        ax[j] = SineTransform2D::basis(mx, pu.i - 2, j) * SineTransform2D::basis(mx, pv.i - 2, j);
    for (int k = 0; k < my; ++k)
        ay[k] = SineTransform2D::basis(my, pu.j - 2, k) * SineTransform2D::basis(my, pv.j - 2, k);
    double sum = 0.0;
    for (int k = 0; k < my; ++k)
        for (int j = 0; j < mx; ++j) sum += ax[j] * ay[k] / generator_eigenvalue(lat, j + 1, k + 1);
    return sum;
}

double harmonic_residual(const LatticeRect& lat, std::span<const double> values)
{
    double worst = 0.0;
    for (int a = 0; a < lat.num_interior(); ++a) {
        const int v = lat.interior_vertex(a);
        double avg = 0.0;
        for (int u : lat.neighbors(v)) avg += values[u];
        worst = std::max(worst, std::abs(values[v] - 0.25 * avg));
    }
    return worst;
}

Field harmonic_extension(const LatticeRect& lat, std::span<const double> boundary_data)
{
    if (boundary_data.size() != static_cast<std::size_t>(lat.num_vertices()))
        throw std::invalid_argument("harmonic_extension: boundary data size mismatch");
    Field out;
    out.values.assign(static_cast<std::size_t>(lat.num_vertices()), 0.0);
    for (int v = 0; v < lat.num_vertices(); ++v) {
        if (!lat.is_boundary(v)) continue;
        if (!std::isfinite(boundary_data[v]))
            throw std::invalid_argument("harmonic_extension: non-finite boundary value");
        out.values[v] = boundary_data[v];
    }
    const int n = lat.num_interior();
    if (n == 0) return out;

    // Solve (4 - A) x = 4·residual by the sine eigenbasis, then refine.
    const int mx = lat.interior_nx();
    const int my = lat.interior_ny();
    SineTransform2D dst(my, mx);
    std::vector<double> r(static_cast<std::size_t>(n));
    for (int iter = 0; iter < 4; ++iter) {
        for (int a = 0; a < n; ++a) {
            const int v = lat.interior_vertex(a);
            double sum = 0.0;
            for (int u : lat.neighbors(v)) sum += out.values[u];
            r[a] = sum - 4.0 * out.values[v];
        }
        if (harmonic_residual(lat, out.values) < 1e-12) break;
        dst.apply(r, r);
        for (int k = 0; k < my; ++k)
            for (int j = 0; j < mx; ++j)
                r[static_cast<std::size_t>(k) * mx + j] /= 4.0 * generator_eigenvalue(lat, j + 1, k + 1);
        dst.apply(r, r);
        for (int a = 0; a < n; ++a) out.values[lat.interior_vertex(a)] += r[a];
    }
    if (harmonic_residual(lat, out.values) >= 1e-10)
        throw std::logic_error("harmonic_extension: residual did not converge");
    return out;
}

FieldSampler::FieldSampler(const LatticeRect& lat, BoundaryCondition bc, SineTransform2D::Method method)
    : lat_(&lat), bc_(bc)
{
    if (bc.kind == BoundaryKind::Alternating) bc_ = BoundaryCondition::alternating(bc.lambda);
    const auto data = boundary_values(lat, bc_);
    mean_ = harmonic_extension(lat, data).values;

    const int mx = lat.interior_nx();
    const int my = lat.interior_ny();
    if (lat.num_interior() > 0) {
        transform_.emplace(my, mx, method);
        inv_sqrt_eigen_.resize(static_cast<std::size_t>(mx) * my);
        for (int k = 0; k < my; ++k)
            for (int j = 0; j < mx; ++j)
                inv_sqrt_eigen_[static_cast<std::size_t>(k) * mx + j] =
                    1.0 / std::sqrt(generator_eigenvalue(lat, j + 1, k + 1));
        work_.resize(inv_sqrt_eigen_.size());
    }
}

void FieldSampler::sample(Rng& rng, std::span<double> out)
{
    if (out.size() != mean_.size()) throw std::invalid_argument("FieldSampler: output size mismatch");
    std::copy(mean_.begin(), mean_.end(), out.begin());
    if (!transform_) return;
    normal_.reset();
    for (std::size_t m = 0; m < work_.size(); ++m) work_[m] = normal_(rng) * inv_sqrt_eigen_[m];
    transform_->apply(work_, work_);
    for (int a = 0; a < lat_->num_interior(); ++a) out[lat_->interior_vertex(a)] += work_[a];
}

Field FieldSampler::sample(Rng& rng)
{
    Field f;
    f.bc = bc_;
    f.values.resize(mean_.size());
    sample(rng, f.values);
    return f;
}

Field sample_zero_boundary(const LatticeRect& lat, Seed seed)
{
    return sample_with_boundary(lat, BoundaryCondition::zero(), seed);
}

Field sample_with_boundary(const LatticeRect& lat, const BoundaryCondition& bc, Seed seed)
{
    FieldSampler sampler(lat, bc);
    Rng rng = make_rng(seed);
    return sampler.sample(rng);
}

namespace {

constexpr std::array<char, 8> kMagic{'G', 'F', 'F', 'P', 'E', 'R', 'C', '1'};

void put_u32(std::ostream& out, std::uint32_t x)
{
    std::array<char, 4> b{};
    for (int i = 0; i < 4; ++i) b[i] = static_cast<char>((x >> (8 * i)) & 0xffU);
    out.write(b.data(), b.size());
}

void put_f64(std::ostream& out, double x)
{
    const auto bits = std::bit_cast<std::uint64_t>(x);
    std::array<char, 8> b{};
    for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((bits >> (8 * i)) & 0xffU);
    out.write(b.data(), b.size());
}

std::uint64_t get_bytes(std::istream& in, int count)
{
    std::array<unsigned char, 8> b{};
    in.read(reinterpret_cast<char*>(b.data()), count);
    if (!in) throw std::runtime_error("read_field: truncated input");
    std::uint64_t x = 0;
    for (int i = 0; i < count; ++i) x |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return x;
}

}  // namespace

void write_field(std::ostream& out, const LatticeRect& lat, const Field& field)
{
    if (field.values.size() != static_cast<std::size_t>(lat.num_vertices()))
        throw std::invalid_argument("write_field: field does not match lattice");
    out.write(kMagic.data(), kMagic.size());
    put_u32(out, static_cast<std::uint32_t>(lat.nx()));
    put_u32(out, static_cast<std::uint32_t>(lat.ny()));
    put_u32(out, static_cast<std::uint32_t>(field.bc.kind));
    put_u32(out, 0);
    put_f64(out, field.bc.lambda);
    for (double x : field.values) put_f64(out, x);
}

FieldDump read_field(std::istream& in)
{
    std::array<char, 8> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kMagic) throw std::runtime_error("read_field: bad magic");
    FieldDump dump;
    dump.nx = static_cast<int>(get_bytes(in, 4));
    dump.ny = static_cast<int>(get_bytes(in, 4));
    const auto tag = static_cast<std::uint32_t>(get_bytes(in, 4));
    if (tag > 1) throw std::runtime_error("read_field: unknown boundary tag");
    get_bytes(in, 4);
    dump.field.bc.kind = static_cast<BoundaryKind>(tag);
    dump.field.bc.lambda = std::bit_cast<double>(get_bytes(in, 8));
    const std::size_t n = static_cast<std::size_t>(dump.nx) * dump.ny;
    dump.field.values.resize(n);
    for (std::size_t k = 0; k < n; ++k) dump.field.values[k] = std::bit_cast<double>(get_bytes(in, 8));
    return dump;
}

}  // namespace gffperc
