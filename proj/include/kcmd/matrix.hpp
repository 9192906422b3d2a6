#ifndef KCMD_MATRIX_HPP
#define KCMD_MATRIX_HPP

#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace kcmd {

// Dense row-major matrix. Reductions over entries are done with fixed
// iteration order and extended-precision accumulators so that results do not
// depend on the OpenMP thread count.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), a_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
    double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

    double* row(std::size_t i) { return a_.data() + i * cols_; }
    const double* row(std::size_t i) const { return a_.data() + i * cols_; }

    double* data() { return a_.data(); }
    const double* data() const { return a_.data(); }

    bool empty() const { return a_.empty(); }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> a_;
};

// C = A * B, rows distributed over OpenMP threads. Each output entry is a
// serial dot product, so the result is bit-identical for any thread count.
Matrix matmul(const Matrix& a, const Matrix& b);

// Row sums of a square matrix (long double accumulation per row).
std::vector<double> row_sums(const Matrix& m);

// Sum of per_row(i) over i = 0..n-1. Row partials are computed in parallel,
// stored by index and combined serially, which keeps the value independent of
// the schedule.
template <class F>
double reduce_rows(std::size_t n, F&& per_row) {
    std::vector<long double> partial(n, 0.0L);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        partial[static_cast<std::size_t>(i)] =
            per_row(static_cast<std::size_t>(i));
    }
    long double total = 0.0L;
    for (std::size_t i = 0; i < n; ++i) total += partial[i];
    return static_cast<double>(total);
}

namespace reference {
// Serial matmul kept as the reference implementation for tests and the
// benchmark harness.
Matrix matmul(const Matrix& a, const Matrix& b);
}

}  // namespace kcmd

#endif
