#ifndef KCMD_SMOOTHING_HPP
#define KCMD_SMOOTHING_HPP

#include <limits>

#include "kcmd/data.hpp"
#include "kcmd/kernels.hpp"

namespace kcmd {

// Guard below which a Nadaraya-Watson denominator counts as degenerate.
inline constexpr double kDensityFloor = 1e-12;

// GCV candidates whose hat-trace denominator falls below this magnitude are
// rejected with an infinite score.
inline constexpr double kGcvDenominatorFloor = 0.05;

struct SmootherFit {
    ResponseMatrix fitted;             // m-hat at the sample points
    std::vector<double> density;       // f-hat at the sample points
    std::vector<double> density_abs;   // f-hat with |K| weights, strictly positive
    double bandwidth = 0.0;
};

struct ModifiedResiduals {
    ResponseMatrix residuals;          // Y_i minus the switched fit
    std::vector<char> switch_mask;     // true where the |K|-weighted branch fired
};

// f-hat(X_i) = (1/n) sum_k Ktilde_ik, self term included.
std::vector<double> density_hat(const GramMatrix& ktilde);

// Same with |Ktilde_ik|; positive because of the self term. Coincides with
// density_hat for order-2 kernels.
std::vector<double> density_hat_abs(const GramMatrix& ktilde);

// m-hat(X_i) = sum_k Ktilde_ik Y_k / sum_k Ktilde_ik. Throws when some
// denominator is below kDensityFloor, naming the index.
SmootherFit nw_fit(const GramMatrix& ktilde, const ResponseMatrix& y,
                   double bandwidth = 0.0);

// Nadaraya-Watson with |Ktilde| weights; the denominator is always positive.
SmootherFit nw_fit_abs(const GramMatrix& ktilde, const ResponseMatrix& y,
                       double bandwidth = 0.0);

// Leave-one-out style generalized cross validation score at bandwidth h0.
// Returns +inf when the candidate is rejected (degenerate density or hat
// denominator below kGcvDenominatorFloor).
double gcv_score(const Matrix& x_tilde, const std::vector<CategoricalColumn>& x_disc,
                 const ResponseMatrix& y, double h0, const SmoothingKernel& k);

// Minimizer of gcv_score over 40 log-spaced candidates in
// [M_l n^{-1/(2 nu + d_C)}, M_u n^{-1/(2 nu + d_C)}], ties resolved toward
// the smaller bandwidth. Defaults: M_l = 0.25 d_C, M_u = 3 + d_C.
// `rejected` (optional) receives the number of discarded candidates.
double select_bandwidth(const Matrix& x_tilde,
                        const std::vector<CategoricalColumn>& x_disc,
                        const ResponseMatrix& y, const SmoothingKernel& k,
                        double m_l = 0.0, double m_u = 0.0, int* rejected = nullptr);

// Modified residuals of the bootstrap scheme: per row the pilot fit at
// h_tilde unless |K|-mass at h exceeds kappa_n times the pilot density, in
// which case the |K|-weighted fit at h is used.
ModifiedResiduals modified_residuals(const ResponseMatrix& y, const GramMatrix& k_h,
                                     const GramMatrix& k_htilde, double kappa_n);
ModifiedResiduals modified_residuals(const Dataset& ds, const BandwidthSet& bw,
                                     const SmoothingKernel& k);

}  // namespace kcmd

#endif
