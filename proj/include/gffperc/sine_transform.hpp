#pragma once

#include <memory>
#include <span>
#include <vector>

namespace gffperc {

/// Orthonormal 2-D type-I discrete sine transform on a rows×cols grid stored
/// row-major. The transform is symmetric and its own inverse.
///
/// Small grids use separable dense matrix products; large grids use FFTW's
/// RODFT00. Instances own scratch buffers and are not thread-safe; give each
/// worker its own.
class SineTransform2D {
public:
    enum class Method { Automatic, Dense, Fast };

    /// Below this many points the dense route is used by Automatic.
    static constexpr int kFastThreshold = 64 * 64;

    SineTransform2D(int rows, int cols, Method method = Method::Automatic);
    ~SineTransform2D();
    SineTransform2D(SineTransform2D&&) noexcept;
    SineTransform2D& operator=(SineTransform2D&&) noexcept;
    SineTransform2D(const SineTransform2D&) = delete;
    SineTransform2D& operator=(const SineTransform2D&) = delete;

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool uses_fast_path() const { return fast_ != nullptr; }

    /// out = S_rows · in · S_cols, where S_n(i,j) = sqrt(2/(n+1)) sin(π(i+1)(j+1)/(n+1)).
    /// `in` and `out` may alias.
    void apply(std::span<const double> in, std::span<double> out);

    /// Entry of the orthonormal 1-D basis of size n (0-based indices).
    static double basis(int n, int i, int j);

private:
    struct FastPlan;

    int rows_;
    int cols_;
    std::vector<double> row_basis_;
    std::vector<double> col_basis_;
    std::vector<double> scratch_;
    std::unique_ptr<FastPlan> fast_;
};

}  // namespace gffperc
