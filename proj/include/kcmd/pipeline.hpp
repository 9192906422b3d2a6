#ifndef KCMD_PIPELINE_HPP
#define KCMD_PIPELINE_HPP

#include <optional>
#include <string>

#include "kcmd/bootstrap.hpp"
#include "kcmd/preprocessing.hpp"
#include "kcmd/smoothing.hpp"
#include "kcmd/statistic.hpp"

namespace kcmd {

struct TestConfig {
    double alpha = 0.05;
    double p_sigma = 0.3;        // quantile order for sigma_c^2
    double m_h_tilde = 1.25;     // pilot bandwidth multiplier
    double m_h = 0.0;            // 0 = auto: 1.1 when d_C < 4, else 1.0
    double kappa_scale = 500.0;  // kappa_n = kappa_scale * log n
    int n_boot = 1000;
    std::uint64_t seed = 0;
    int nu = 0;                  // 0 = auto by dimension, else 2 or 4
    std::string quantile_convention = "type7";

    void check() const;
    double m_h_effective(std::size_t d_c) const {
        return m_h > 0.0 ? m_h : (d_c < 4 ? 1.1 : 1.0);
    }
};

struct StageTimings {
    double scaling_ms = 0.0;
    double bandwidth_ms = 0.0;
    double smoothing_ms = 0.0;
    double statistic_ms = 0.0;
    double bootstrap_ms = 0.0;
    double total_ms = 0.0;
};

struct TestReport {
    std::size_t n = 0;
    std::size_t d_c = 0;
    std::size_t d_d = 0;
    BandwidthSet bandwidths;
    double sigma_c2 = 0.0;
    StatisticValue statistic;
    BootstrapRun bootstrap;
    ScalingReport scaling;
    bool reject = false;
    StageTimings timings;
};

// h_gcv by cross validation on the component-scaled X, then
// h_tilde = m_h_tilde * h_gcv and h = m_h * h_tilde * n^{-1/(2 nu + d_C)};
// kappa_n = kappa_scale * log n. Fully discrete X skips all of it.
BandwidthSet resolve_bandwidths(const Dataset& ds, const TestConfig& config);
BandwidthSet resolve_bandwidths_scaled(const Matrix& x_tilde,
                                       const std::vector<CategoricalColumn>& x_disc,
                                       const ResponseMatrix& y, std::size_t n,
                                       const TestConfig& config);

// The complete significance test: scaling, sigma_c, bandwidths, smoothing
// Grams, modified residuals, characteristic Gram, U-statistic, bootstrap
// coefficients and calibration. Deterministic given (dataset, config).
TestReport run_significance_test(const Dataset& ds, const TestConfig& config);

// Smoothing-free variant for independent X and W (arbitrary Hilbertian X):
// tests conditional mean independence of the embedded response
// c_X(X,.) (x) Y on W through the known-m estimator, calibrated by the same
// multiplier bootstrap on the centered embedded Gram.
TestReport run_independence_test(const Dataset& ds, const TestConfig& config);

// Backward elimination over named covariate groups.
struct CovariateGroup {
    std::string name;
    std::vector<ValueColumn> columns;
};

struct EliminationEntry {
    int step = 0;
    std::string group;
    double p_value = 0.0;
    bool removed = false;
};

struct EliminationTrace {
    std::vector<EliminationEntry> entries;
    std::vector<std::string> remaining;
    std::string error;  // nonempty when a step aborted
};

// In each step every remaining group is tested as W against the union of the
// others as X; the group with the largest p-value above alpha_step leaves
// (ties resolved by declaration order). Stops when all p-values are at most
// alpha_step or one group remains.
EliminationTrace backward_eliminate(const ValueColumn& y,
                                    const std::vector<CovariateGroup>& groups,
                                    double alpha_step, const TestConfig& config);

}  // namespace kcmd

#endif
