#include "kcmd/bootstrap.hpp"

#include <cmath>

#include "kcmd/preprocessing.hpp"

namespace kcmd {

std::vector<double> mammen_sample(std::size_t n, Rng& rng) {
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i)
        r[i] = rng.uniform() < kMammenLowProb ? kMammenLow : kMammenHigh;
    return r;
}

namespace {

// Shared core over a precomputed Hadamard product M = D o Ge:
// (r' M r - sum_i r_i^2 M_ii) / (n - 1).
double boot_stat_core(const Matrix& m, std::span<const double> r) {
    const std::size_t n = m.rows();
    long double acc = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        const double* row = m.row(i);
        long double inner = 0.0L;
        for (std::size_t j = 0; j < n; ++j) inner += static_cast<long double>(row[j]) * r[j];
        inner -= static_cast<long double>(row[i]) * r[i];
        acc += static_cast<long double>(r[i]) * inner;
    }
    return static_cast<double>(acc / (static_cast<long double>(n) - 1.0L));
}

Matrix hadamard(const GramMatrix& d, const GramMatrix& g_resid) {
    const std::size_t n = d.n();
    if (g_resid.n() != n)
        throw Error(Stage::bootstrap, "boot_stat: dimension mismatch between D and residual Gram");
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = d.m(i, j) * g_resid.m(i, j);
    return m;
}

}  // namespace

double boot_stat(const GramMatrix& d, const GramMatrix& g_resid, std::span<const double> r) {
    if (r.size() != d.n()) throw Error(Stage::bootstrap, "boot_stat: multiplier length mismatch");
    return boot_stat_core(hadamard(d, g_resid), r);
}

BootstrapRun run_bootstrap(const GramMatrix& d, const GramMatrix& g_resid,
                           std::size_t n_b, std::uint64_t seed) {
    if (n_b < 1) throw Error(Stage::bootstrap, "run_bootstrap: n_B must be at least 1");
    const Matrix m = hadamard(d, g_resid);
    const std::size_t n = m.rows();

    BootstrapRun run;
    run.seed = seed;
    run.n_b = n_b;
    run.replicates.resize(n_b);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16)
#endif
    for (long long b = 0; b < static_cast<long long>(n_b); ++b) {
        Rng rng = Rng::stream(seed, static_cast<std::uint64_t>(b));
        const auto r = mammen_sample(n, rng);
        run.replicates[static_cast<std::size_t>(b)] = boot_stat_core(m, r);
    }
    return run;
}

BootstrapRun p_value_and_quantile(BootstrapRun run, double observed, double alpha) {
    if (run.replicates.empty())
        throw Error(Stage::bootstrap, "p_value_and_quantile: empty replicate vector");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw Error(Stage::bootstrap, "p_value_and_quantile: alpha must lie in (0,1)");
    std::size_t at_least = 0;
    for (const double rep : run.replicates)
        if (rep >= observed) ++at_least;
    run.observed = observed;
    run.p_value = static_cast<double>(1 + at_least) /
                  static_cast<double>(run.replicates.size() + 1);
    run.q_alpha = quantile_type7(run.replicates, 1.0 - alpha);
    run.reject = observed > run.q_alpha;
    return run;
}

namespace reference {

double boot_stat(const GramMatrix& d, const GramMatrix& g_resid, std::span<const double> r) {
    const std::size_t n = d.n();
    long double acc = 0.0L;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            acc += static_cast<long double>(r[i]) * r[j] * d.m(i, j) * g_resid.m(i, j);
        }
    return static_cast<double>(acc / (static_cast<long double>(n) - 1.0L));
}

}  // namespace reference
}  // namespace kcmd
