#include "gffperc/sine_transform.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace gffperc {

namespace {

// FFTW's planner is not re-entrant.
std::mutex& planner_mutex()
{
    static std::mutex m;
    return m;
}

std::vector<double> dense_basis(int n)
{
    std::vector<double> s(static_cast<std::size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s[static_cast<std::size_t>(i) * n + j] = SineTransform2D::basis(n, i, j);
    return s;
}

}  // namespace

struct SineTransform2D::FastPlan {
    double* buffer = nullptr;
    fftw_plan plan = nullptr;
    double scale = 1.0;

    FastPlan(int rows, int cols)
    {
        const std::size_t n = static_cast<std::size_t>(rows) * cols;
        buffer = fftw_alloc_real(n);
        if (buffer == nullptr) throw std::bad_alloc();
        std::lock_guard lock(planner_mutex());
        plan = fftw_plan_r2r_2d(rows, cols, buffer, buffer, FFTW_RODFT00, FFTW_RODFT00, FFTW_ESTIMATE);
        // RODFT00 omits the orthonormal factor sqrt(2/(n+1)) and carries an extra 2.
        scale = 1.0 / std::sqrt(4.0 * (rows + 1) * (cols + 1));
    }
    ~FastPlan()
    {
        std::lock_guard lock(planner_mutex());
        if (plan != nullptr) fftw_destroy_plan(plan);
        fftw_free(buffer);
    }
    FastPlan(const FastPlan&) = delete;
    FastPlan& operator=(const FastPlan&) = delete;
};

double SineTransform2D::basis(int n, int i, int j)
{
    return std::sqrt(2.0 / (n + 1)) * std::sin(std::numbers::pi * (i + 1) * (j + 1) / (n + 1));
}

SineTransform2D::SineTransform2D(int rows, int cols, Method method)
    : rows_(rows), cols_(cols)
{
    if (rows <= 0 || cols <= 0) throw std::invalid_argument("sine transform: empty grid");
    const bool fast = method == Method::Fast ||
                      (method == Method::Automatic && rows * cols >= kFastThreshold);
    if (fast) {
        fast_ = std::make_unique<FastPlan>(rows, cols);
    } else {
        row_basis_ = dense_basis(rows);
        col_basis_ = rows == cols ? row_basis_ : dense_basis(cols);
        scratch_.resize(static_cast<std::size_t>(rows) * cols);
    }
}

SineTransform2D::~SineTransform2D() = default;
SineTransform2D::SineTransform2D(SineTransform2D&&) noexcept = default;
SineTransform2D& SineTransform2D::operator=(SineTransform2D&&) noexcept = default;

void SineTransform2D::apply(std::span<const double> in, std::span<double> out)
{
    const std::size_t n = static_cast<std::size_t>(rows_) * cols_;
    if (in.size() != n || out.size() != n) throw std::invalid_argument("sine transform: size mismatch");

    if (fast_) {
        std::copy(in.begin(), in.end(), fast_->buffer);
        fftw_execute(fast_->plan);
        for (std::size_t k = 0; k < n; ++k) out[k] = fast_->buffer[k] * fast_->scale;
        return;
    }

    // scratch = in · S_cols
    for (int r = 0; r < rows_; ++r) {
        const double* x = in.data() + static_cast<std::size_t>(r) * cols_;
        double* t = scratch_.data() + static_cast<std::size_t>(r) * cols_;
        std::fill(t, t + cols_, 0.0);
        for (int k = 0; k < cols_; ++k) {
            const double xk = x[k];
            const double* s = col_basis_.data() + static_cast<std::size_t>(k) * cols_;
            for (int c = 0; c < cols_; ++c) t[c] += xk * s[c];
        }
    }
    // out = S_rows · scratch
    std::fill(out.begin(), out.end(), 0.0);
    for (int r = 0; r < rows_; ++r) {
        double* o = out.data() + static_cast<std::size_t>(r) * cols_;
        const double* s = row_basis_.data() + static_cast<std::size_t>(r) * rows_;
        for (int k = 0; k < rows_; ++k) {
            const double srk = s[k];
            const double* t = scratch_.data() + static_cast<std::size_t>(k) * cols_;
            for (int c = 0; c < cols_; ++c) o[c] += srk * t[c];
        }
    }
}

}  // namespace gffperc
