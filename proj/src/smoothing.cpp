#include "kcmd/smoothing.hpp"

#include <cmath>
#include <string>

namespace kcmd {

namespace {

std::vector<double> row_means(const GramMatrix& g, bool absolute) {
    const std::size_t n = g.n();
    std::vector<double> out(n);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long ii = 0; ii < static_cast<long long>(n); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        const double* row = g.m.row(i);
        long double acc = 0.0L;
        for (std::size_t k = 0; k < n; ++k) acc += absolute ? std::fabs(row[k]) : row[k];
        out[i] = static_cast<double>(acc / static_cast<long double>(n));
    }
    return out;
}

// One weighted response average. Numerator and denominator accumulate over
// the same term sequence, so fitting a constant reproduces it exactly.
void weighted_row(const GramMatrix& g, const ResponseMatrix& y, std::size_t i,
                  bool absolute, double* out) {
    const std::size_t n = g.n();
    const double* krow = g.m.row(i);
    std::vector<long double> acc(y.m, 0.0L);
    long double den = 0.0L;
    for (std::size_t k = 0; k < n; ++k) {
        const double w = absolute ? std::fabs(krow[k]) : krow[k];
        if (w == 0.0) continue;
        den += w;
        const double* yk = y.row(k);
        for (std::size_t t = 0; t < y.m; ++t) acc[t] += static_cast<long double>(w) * yk[t];
    }
    for (std::size_t t = 0; t < y.m; ++t) out[t] = static_cast<double>(acc[t] / den);
}

SmootherFit nw_fit_impl(const GramMatrix& ktilde, const ResponseMatrix& y,
                        double bandwidth, bool absolute) {
    const std::size_t n = ktilde.n();
    SmootherFit fit;
    fit.bandwidth = bandwidth;
    fit.density = row_means(ktilde, false);
    fit.density_abs = row_means(ktilde, true);
    const std::vector<double>& denom = absolute ? fit.density_abs : fit.density;
    for (std::size_t i = 0; i < n; ++i)
        if (std::fabs(denom[i]) < kDensityFloor)
            throw Error(Stage::smoothing,
                        "degenerate density; increase bandwidth (index " +
                            std::to_string(i) + ")");
    fit.fitted.n = n;
    fit.fitted.m = y.m;
    fit.fitted.weight = y.weight;
    fit.fitted.coeff.resize(n * y.m);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long ii = 0; ii < static_cast<long long>(n); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        weighted_row(ktilde, y, i, absolute, fit.fitted.row(i));
    }
    return fit;
}

}  // namespace

std::vector<double> density_hat(const GramMatrix& ktilde) { return row_means(ktilde, false); }

std::vector<double> density_hat_abs(const GramMatrix& ktilde) { return row_means(ktilde, true); }

SmootherFit nw_fit(const GramMatrix& ktilde, const ResponseMatrix& y, double bandwidth) {
    return nw_fit_impl(ktilde, y, bandwidth, false);
}

SmootherFit nw_fit_abs(const GramMatrix& ktilde, const ResponseMatrix& y, double bandwidth) {
    return nw_fit_impl(ktilde, y, bandwidth, true);
}

double gcv_score(const Matrix& x_tilde, const std::vector<CategoricalColumn>& x_disc,
                 const ResponseMatrix& y, double h0, const SmoothingKernel& k) {
    if (!(h0 > 0.0)) throw Error(Stage::smoothing, "gcv_score: bandwidth must be positive");
    const std::size_t n = y.n;
    const std::size_t d = x_tilde.cols();
    const GramMatrix ktilde = smoothing_gram(x_tilde, x_disc, h0, k);
    const auto density = density_hat(ktilde);

    // Hat-matrix trace term: the NW self weight is K(0)/h^d / (n f-hat).
    const double k0 = std::pow(k.at_zero(), static_cast<double>(d)) /
                      std::pow(h0, static_cast<double>(d));
    long double trace = 0.0L;
    for (std::size_t j = 0; j < n; ++j) {
        if (std::fabs(density[j]) < kDensityFloor)
            return std::numeric_limits<double>::infinity();
        trace += static_cast<long double>(k0) /
                 (static_cast<long double>(n) * density[j]);
    }
    const double denom = 1.0 - static_cast<double>(trace / static_cast<long double>(n));
    if (std::fabs(denom) < kGcvDenominatorFloor)
        return std::numeric_limits<double>::infinity();

    SmootherFit fit;
    try {
        fit = nw_fit(ktilde, y);
    } catch (const Error&) {
        return std::numeric_limits<double>::infinity();
    }
    const double score = reduce_rows(n, [&](std::size_t i) -> long double {
        const double* yi = y.row(i);
        const double* mi = fit.fitted.row(i);
        long double acc = 0.0L;
        for (std::size_t t = 0; t < y.m; ++t) {
            const long double r = yi[t] - mi[t];
            acc += static_cast<long double>(y.weight[t]) * r * r;
        }
        return acc;
    });
    return score / (static_cast<double>(n) * denom * denom);
}

double select_bandwidth(const Matrix& x_tilde,
                        const std::vector<CategoricalColumn>& x_disc,
                        const ResponseMatrix& y, const SmoothingKernel& k, double m_l,
                        double m_u, int* rejected) {
    const std::size_t d = x_tilde.cols();
    if (d < 1) throw Error(Stage::smoothing, "select_bandwidth requires d_C >= 1");
    const std::size_t n = y.n;
    if (m_l <= 0.0) m_l = 0.25 * static_cast<double>(d);
    if (m_u <= 0.0) m_u = 3.0 + static_cast<double>(d);
    const double rate = std::pow(static_cast<double>(n),
                                 -1.0 / (2.0 * k.order + static_cast<double>(d)));
    const double h_l = m_l * rate;
    const double h_u = m_u * rate;

    constexpr int kCandidates = 40;
    const double log_lo = std::log(h_l);
    const double log_hi = std::log(h_u);
    std::vector<double> scores(kCandidates);
    std::vector<double> candidates(kCandidates);
    for (int c = 0; c < kCandidates; ++c)
        candidates[c] = std::exp(log_lo + (log_hi - log_lo) * c / (kCandidates - 1));
    candidates[0] = h_l;
    candidates[kCandidates - 1] = h_u;

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
    for (int c = 0; c < kCandidates; ++c)
        scores[c] = gcv_score(x_tilde, x_disc, y, candidates[c], k);

    int best = -1;
    int dropped = 0;
    for (int c = 0; c < kCandidates; ++c) {
        if (std::isinf(scores[c])) {
            ++dropped;
            continue;
        }
        if (best < 0 || scores[c] < scores[best]) best = c;
    }
    if (rejected) *rejected = dropped;
    if (best < 0) throw Error(Stage::smoothing, "GCV degenerate: every candidate rejected");
    return candidates[best];
}

ModifiedResiduals modified_residuals(const ResponseMatrix& y, const GramMatrix& k_h,
                                     const GramMatrix& k_htilde, double kappa_n) {
    const std::size_t n = y.n;
    const auto f_abs_h = density_hat_abs(k_h);
    const auto f_pilot = density_hat(k_htilde);

    ModifiedResiduals out;
    out.switch_mask.assign(n, 0);
    out.residuals.n = n;
    out.residuals.m = y.m;
    out.residuals.weight = y.weight;
    out.residuals.coeff.resize(n * y.m);

    for (std::size_t i = 0; i < n; ++i)
        out.switch_mask[i] = f_abs_h[i] > std::fabs(f_pilot[i]) * kappa_n ? 1 : 0;

    // When the mask is off the pilot density is bounded below by f'_h/kappa_n,
    // so the division on that branch is safe; still guard against pathologies.
    for (std::size_t i = 0; i < n; ++i) {
        const double denom = out.switch_mask[i] ? f_abs_h[i] : f_pilot[i];
        if (std::fabs(denom) < kDensityFloor)
            throw Error(Stage::smoothing,
                        "degenerate density; increase bandwidth (index " +
                            std::to_string(i) + ")");
    }

#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long ii = 0; ii < static_cast<long long>(n); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        std::vector<double> fitted(y.m);
        if (out.switch_mask[i])
            weighted_row(k_h, y, i, true, fitted.data());
        else
            weighted_row(k_htilde, y, i, false, fitted.data());
        const double* yi = y.row(i);
        double* ri = out.residuals.row(i);
        for (std::size_t t = 0; t < y.m; ++t) ri[t] = yi[t] - fitted[t];
    }
    return out;
}

ModifiedResiduals modified_residuals(const Dataset& ds, const BandwidthSet& bw,
                                     const SmoothingKernel& k) {
    const auto y = embed_response(ds.y);
    if (bw.discrete_only) {
        const GramMatrix indicator = smoothing_gram(Matrix(ds.n, 0), ds.x_disc, 1.0, k);
        return modified_residuals(y, indicator, indicator, 1.0);
    }
    const GramMatrix k_h = smoothing_gram(ds, bw.h, k);
    const GramMatrix k_ht = smoothing_gram(ds, bw.h_tilde, k);
    return modified_residuals(y, k_h, k_ht, bw.kappa_n);
}

}  // namespace kcmd
