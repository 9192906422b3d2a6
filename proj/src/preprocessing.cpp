#include "kcmd/preprocessing.hpp"

#include <algorithm>
#include <cmath>

namespace kcmd {

double quantile_type7(std::vector<double> values, double p) {
    if (values.empty()) throw Error(Stage::preprocessing, "quantile of empty sample");
    if (!(p > 0.0 && p < 1.0) && p != 0.0 && p != 1.0)
        throw Error(Stage::preprocessing, "quantile order must lie in [0,1]");
    std::sort(values.begin(), values.end());
    const std::size_t m = values.size();
    if (m == 1) return values[0];
    const double rank = p * static_cast<double>(m - 1);
    const std::size_t lo = static_cast<std::size_t>(rank);
    const double frac = rank - static_cast<double>(lo);
    if (lo + 1 >= m) return values[m - 1];
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

ScaleEstimator scale_estimator_for(bool block_has_categorical) {
    return block_has_categorical ? ScaleEstimator::mean : ScaleEstimator::median;
}

namespace {

double center(const std::vector<double>& d2, ScaleEstimator est) {
    if (est == ScaleEstimator::median) return quantile_type7(d2, 0.5);
    long double acc = 0.0L;
    for (const double v : d2) acc += v;
    return static_cast<double>(acc / static_cast<long double>(d2.size()));
}

// Upper-triangle pairwise squared distances of one embedded column.
std::vector<double> pairwise_d2(const ResponseMatrix& e) {
    const std::size_t n = e.n;
    std::vector<double> out(n * (n - 1) / 2);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8)
#endif
    for (long long ii = 0; ii < static_cast<long long>(n); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        // Row i occupies slots [base, base + n-1-i).
        std::size_t base = i * (n - 1) - i * (i + 1) / 2 + i;
        const double* a = e.row(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double* b = e.row(j);
            long double acc = 0.0L;
            for (std::size_t t = 0; t < e.m; ++t) {
                const long double d = a[t] - b[t];
                acc += static_cast<long double>(e.weight[t]) * d * d;
            }
            out[base + (j - i - 1)] = static_cast<double>(acc);
        }
    }
    return out;
}

std::vector<double> upper_triangle(const Matrix& m) {
    const std::size_t n = m.rows();
    std::vector<double> out;
    out.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) out.push_back(m(i, j));
    return out;
}

void add_scaled_d2(Matrix& acc, const ResponseMatrix& e, double scale) {
    const std::size_t n = e.n;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8)
#endif
    for (long long ii = 0; ii < static_cast<long long>(n); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        const double* a = e.row(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double* b = e.row(j);
            long double d2 = 0.0L;
            for (std::size_t t = 0; t < e.m; ++t) {
                const long double d = a[t] - b[t];
                d2 += static_cast<long double>(e.weight[t]) * d * d;
            }
            acc(i, j) += static_cast<double>(d2) / scale;
        }
    }
}

void mirror_lower(Matrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = i + 1; j < m.cols(); ++j) m(j, i) = m(i, j);
}

[[noreturn]] void degenerate(const std::string& block) {
    throw Error(Stage::preprocessing,
                "degenerate covariate; remove or declare discrete: " + block);
}

}  // namespace

ScaledData scale_covariates(const Dataset& ds) {
    const std::size_t n = ds.n;
    if (n < 2) throw Error(Stage::preprocessing, "scaling needs n >= 2");

    ScaledData out;
    out.x_tilde = ds.x_cont;
    Matrix raw_x(n, n, 0.0);
    Matrix raw_w(n, n, 0.0);

    // Step 1 over X components: continuous columns get value scaling, the
    // discrete ones are scaled in distance space only.
    for (std::size_t c = 0; c < ds.x_cont.cols(); ++c) {
        ResponseMatrix col;
        col.n = n;
        col.m = 1;
        col.weight = {1.0};
        col.coeff.resize(n);
        for (std::size_t i = 0; i < n; ++i) col.coeff[i] = ds.x_cont(i, c);
        const auto d2 = pairwise_d2(col);
        const double scale = center(d2, ScaleEstimator::median);
        const std::string name = c < ds.x_cont_names.size() && !ds.x_cont_names[c].empty()
                                     ? ds.x_cont_names[c]
                                     : "x_cont[" + std::to_string(c) + "]";
        if (!(scale > 0.0)) degenerate(name);
        out.report.component_scales_x.push_back(scale);
        out.report.estimator_x.push_back(ScaleEstimator::median);
        const double inv = 1.0 / std::sqrt(scale);
        for (std::size_t i = 0; i < n; ++i) out.x_tilde(i, c) *= inv;
        add_scaled_d2(raw_x, col, scale);
    }
    for (std::size_t c = 0; c < ds.x_disc.size(); ++c) {
        const auto& col = ds.x_disc[c];
        ValueColumn as_value = ValueColumn::categoricals(col.levels, col.level_count, col.name);
        const auto embedded = embed_response(as_value);
        const auto d2 = pairwise_d2(embedded);
        const double scale = center(d2, ScaleEstimator::mean);
        const std::string name =
            col.name.empty() ? "x_disc[" + std::to_string(c) + "]" : col.name;
        if (!(scale > 0.0)) degenerate(name);
        out.report.component_scales_x.push_back(scale);
        out.report.estimator_x.push_back(ScaleEstimator::mean);
        add_scaled_d2(raw_x, embedded, scale);
    }

    // Step 1 over W blocks: one block per declared column, any value kind.
    bool w_has_categorical = false;
    for (std::size_t c = 0; c < ds.w.size(); ++c) {
        const auto& col = ds.w[c];
        if (col.kind == ValueKind::categorical) w_has_categorical = true;
        const auto embedded = embed_response(col);
        const auto d2 = pairwise_d2(embedded);
        const ScaleEstimator est = scale_estimator_for(col.kind == ValueKind::categorical);
        const double scale = center(d2, est);
        const std::string name = col.name.empty() ? "w[" + std::to_string(c) + "]" : col.name;
        if (!(scale > 0.0)) degenerate(name);
        out.report.component_scales_w.push_back(scale);
        out.report.estimator_w.push_back(est);
        add_scaled_d2(raw_w, embedded, scale);
    }

    // Step 2: normalize each block's summed distances by their own center.
    out.report.block_estimator_x = scale_estimator_for(!ds.x_disc.empty());
    out.report.block_scale_x = center(upper_triangle(raw_x), out.report.block_estimator_x);
    if (!(out.report.block_scale_x > 0.0)) degenerate("X block");

    out.report.block_estimator_w = scale_estimator_for(w_has_categorical);
    out.report.block_scale_w = center(upper_triangle(raw_w), out.report.block_estimator_w);
    if (!(out.report.block_scale_w > 0.0)) degenerate("W block");

    out.dist.dist2_x = Matrix(n, n, 0.0);
    out.dist.dist2_w = Matrix(n, n, 0.0);
    out.dist.dist2_z = Matrix(n, n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            out.dist.dist2_x(i, j) = raw_x(i, j) / out.report.block_scale_x;
            out.dist.dist2_w(i, j) = raw_w(i, j) / out.report.block_scale_w;
            out.dist.dist2_z(i, j) = out.dist.dist2_x(i, j) + out.dist.dist2_w(i, j);
        }
    mirror_lower(out.dist.dist2_x);
    mirror_lower(out.dist.dist2_w);
    mirror_lower(out.dist.dist2_z);
    return out;
}

CharKernelParams sigma_c_quantile(const Matrix& dist2_z, double p) {
    if (!(p > 0.0 && p < 1.0))
        throw Error(Stage::preprocessing, "sigma_c quantile order must lie in (0,1)");
    const auto values = upper_triangle(dist2_z);
    bool any_positive = false;
    for (const double v : values)
        if (v > 0.0) {
            any_positive = true;
            break;
        }
    if (!any_positive)
        throw Error(Stage::preprocessing, "sigma_c quantile: all pairwise distances are zero");
    CharKernelParams params;
    params.sigma_c2 = quantile_type7(values, p);
    if (!(params.sigma_c2 > 0.0))
        throw Error(Stage::preprocessing,
                    "sigma_c quantile yielded a nonpositive scale; raise the quantile order");
    return params;
}

}  // namespace kcmd
