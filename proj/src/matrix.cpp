#include "kcmd/matrix.hpp"

#include <stdexcept>

namespace kcmd {

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matmul: shape mismatch");
    const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
    Matrix c(n, m);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long ii = 0; ii < static_cast<long long>(n); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        const double* arow = a.row(i);
        double* crow = c.row(i);
        // i-k-j order: stream over b rows, accumulate into the output row.
        std::vector<long double> acc(m, 0.0L);
        for (std::size_t p = 0; p < k; ++p) {
            const long double aip = arow[p];
            if (aip == 0.0L) continue;
            const double* brow = b.row(p);
            for (std::size_t j = 0; j < m; ++j) acc[j] += aip * brow[j];
        }
        for (std::size_t j = 0; j < m; ++j) crow[j] = static_cast<double>(acc[j]);
    }
    return c;
}

std::vector<double> row_sums(const Matrix& m) {
    std::vector<double> s(m.rows());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long ii = 0; ii < static_cast<long long>(m.rows()); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        const double* row = m.row(i);
        long double acc = 0.0L;
        for (std::size_t j = 0; j < m.cols(); ++j) acc += row[j];
        s[i] = static_cast<double>(acc);
    }
    return s;
}

namespace reference {

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) throw std::invalid_argument("matmul: shape mismatch");
    const std::size_t n = a.rows(), k = a.cols(), m = b.cols();
    Matrix c(n, m);
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<long double> acc(m, 0.0L);
        for (std::size_t p = 0; p < k; ++p) {
            const long double aip = a(i, p);
            if (aip == 0.0L) continue;
            for (std::size_t j = 0; j < m; ++j) acc[j] += aip * b(p, j);
        }
        for (std::size_t j = 0; j < m; ++j) c(i, j) = static_cast<double>(acc[j]);
    }
    return c;
}

}  // namespace reference
}  // namespace kcmd
