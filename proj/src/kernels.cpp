#include "kcmd/kernels.hpp"

#include <cmath>
#include <string>

namespace kcmd {

double epanechnikov(double t) {
    const double t2 = t * t;
    return t2 <= 1.0 ? 0.75 * (1.0 - t2) : 0.0;
}

double poly4(double t) {
    const double t2 = t * t;
    return t2 <= 1.0 ? (15.0 / 32.0) * (1.0 - t2) * (3.0 - 7.0 * t2) : 0.0;
}

SmoothingKernel epanechnikov_kernel() { return SmoothingKernel{2, &epanechnikov}; }
SmoothingKernel poly4_kernel() { return SmoothingKernel{4, &poly4}; }

SmoothingKernel kernel_for_dimension(std::size_t d_c) {
    if (d_c <= 3) return epanechnikov_kernel();
    if (d_c <= 7) return poly4_kernel();
    throw Error(Stage::smoothing,
                "kernel order insufficient for this dimension: d_C=" +
                    std::to_string(d_c) + " needs order > d_C/2 and only 2, 4 ship");
}

double product_kernel(std::span<const double> x, double h, const SmoothingKernel& k) {
    if (!(h > 0.0)) throw Error(Stage::smoothing, "product_kernel: bandwidth must be positive");
    double prod = 1.0;
    for (const double xi : x) {
        const double f = k.eval(xi / h);
        if (f == 0.0) return 0.0;
        prod *= f;
    }
    return prod / std::pow(h, static_cast<double>(x.size()));
}

namespace {

// Pack discrete levels per row so the match test is one vector compare.
std::vector<std::vector<int>> discrete_keys(const std::vector<CategoricalColumn>& x_disc,
                                            std::size_t n) {
    std::vector<std::vector<int>> keys(n);
    if (x_disc.empty()) return keys;
    for (std::size_t i = 0; i < n; ++i) {
        keys[i].reserve(x_disc.size());
        for (const auto& col : x_disc) keys[i].push_back(col.levels[i]);
    }
    return keys;
}

}  // namespace

GramMatrix smoothing_gram(const Matrix& x_cont,
                          const std::vector<CategoricalColumn>& x_disc, double h0,
                          const SmoothingKernel& k) {
    const std::size_t n = x_cont.cols() > 0
                              ? x_cont.rows()
                              : (x_disc.empty() ? 0 : x_disc.front().levels.size());
    const std::size_t d = x_cont.cols();
    if (d > 0 && !(h0 > 0.0))
        throw Error(Stage::smoothing, "smoothing_gram: bandwidth must be positive when d_C > 0");

    const auto keys = discrete_keys(x_disc, n);
    const double inv_hd = d > 0 ? 1.0 / std::pow(h0, static_cast<double>(d)) : 1.0;

    GramMatrix g;
    g.kind = GramKind::smoothing;
    g.m = Matrix(n, n);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8)
#endif
    for (long long ii = 0; ii < static_cast<long long>(n); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        for (std::size_t j = i; j < n; ++j) {
            double v = 0.0;
            if (x_disc.empty() || keys[i] == keys[j]) {
                double prod = 1.0;
                for (std::size_t c = 0; c < d; ++c) {
                    const double f = k.eval((x_cont(i, c) - x_cont(j, c)) / h0);
                    if (f == 0.0) {
                        prod = 0.0;
                        break;
                    }
                    prod *= f;
                }
                v = prod * inv_hd;
            }
            g.m(i, j) = v;
            g.m(j, i) = v;
        }
    }
    return g;
}

GramMatrix smoothing_gram(const Dataset& ds, double h0, const SmoothingKernel& k) {
    return smoothing_gram(ds.x_cont, ds.x_disc, h0, k);
}

double gaussian_c(double z_dist2, const CharKernelParams& params) {
    if (z_dist2 < 0.0) throw Error(Stage::statistic, "gaussian_c: negative squared distance");
    if (!(params.sigma_c2 > 0.0)) throw Error(Stage::statistic, "gaussian_c: sigma_c2 must be positive");
    return std::exp(-z_dist2 / params.sigma_c2);
}

GramMatrix characteristic_gram(const Matrix& dist2, const CharKernelParams& params) {
    const std::size_t n = dist2.rows();
    if (dist2.cols() != n) throw Error(Stage::statistic, "characteristic_gram: matrix not square");
    for (std::size_t i = 0; i < n; ++i) {
        if (dist2(i, i) != 0.0)
            throw Error(Stage::statistic, "characteristic_gram: nonzero diagonal at row " +
                                              std::to_string(i));
        for (std::size_t j = i + 1; j < n; ++j) {
            if (dist2(i, j) < 0.0)
                throw Error(Stage::statistic, "characteristic_gram: negative distance");
            if (dist2(i, j) != dist2(j, i))
                throw Error(Stage::statistic, "characteristic_gram: asymmetric input");
        }
    }
    GramMatrix c;
    c.kind = GramKind::characteristic;
    c.m = Matrix(n, n);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long ii = 0; ii < static_cast<long long>(n); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        c.m(i, i) = 1.0;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) c.m(i, j) = gaussian_c(dist2(i, j), params);
    }
    return c;
}

namespace reference {

GramMatrix smoothing_gram(const Matrix& x_cont,
                          const std::vector<CategoricalColumn>& x_disc, double h0,
                          const SmoothingKernel& k) {
    const std::size_t n = x_cont.cols() > 0
                              ? x_cont.rows()
                              : (x_disc.empty() ? 0 : x_disc.front().levels.size());
    const std::size_t d = x_cont.cols();
    GramMatrix g;
    g.kind = GramKind::smoothing;
    g.m = Matrix(n, n);
    std::vector<double> diff(d);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            bool match = true;
            for (const auto& col : x_disc)
                if (col.levels[i] != col.levels[j]) {
                    match = false;
                    break;
                }
            if (!match) continue;
            if (d == 0) {
                g.m(i, j) = 1.0;
                continue;
            }
            for (std::size_t c = 0; c < d; ++c) diff[c] = x_cont(i, c) - x_cont(j, c);
            g.m(i, j) = product_kernel(diff, h0, k);
        }
    return g;
}

}  // namespace reference
}  // namespace kcmd
