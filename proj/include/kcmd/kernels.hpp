#ifndef KCMD_KERNELS_HPP
#define KCMD_KERNELS_HPP

#include <span>

#include "kcmd/data.hpp"

namespace kcmd {

// Univariate smoothing kernel of even order supported on [-1,1].
struct SmoothingKernel {
    int order = 2;                 // 2 or 4
    double (*eval)(double) = nullptr;

    double at_zero() const { return eval(0.0); }
};

// (3/4)(1 - t^2) on [-1,1]; order 2.
double epanechnikov(double t);

// (15/32)(1 - t^2)(3 - 7 t^2) on [-1,1]; order 4, takes negative values.
double poly4(double t);

SmoothingKernel epanechnikov_kernel();
SmoothingKernel poly4_kernel();

// Order rule: 2 for d_C <= 3, 4 for 4 <= d_C <= 7; d_C >= 8 is rejected
// because the dimension must stay below twice the kernel order.
SmoothingKernel kernel_for_dimension(std::size_t d_c);

// Scaled product kernel: prod_j K(x_j / h) / h^{d}; zero as soon as one
// coordinate leaves [-h, h].
double product_kernel(std::span<const double> x, double h, const SmoothingKernel& k);

struct BandwidthSet {
    double h = 0.0;        // statistic bandwidth
    double h_tilde = 0.0;  // pilot bandwidth
    double kappa_n = 0.0;
    double h_gcv = 0.0;
    int nu = 2;
    std::size_t d_c = 0;
    bool discrete_only = false;  // d_C = 0: no bandwidths, indicator smoothing
};

struct CharKernelParams {
    double sigma_c2 = 1.0;
};

// exp(-dist2 / sigma_c^2); demands dist2 >= 0.
double gaussian_c(double z_dist2, const CharKernelParams& params);

// K~_ik = K_h(Xc_i - Xc_k) * 1{Xd_i = Xd_k}; with d_C = 0 the entries reduce
// to the discrete-match indicator. `x_cont` is expected to be the
// component-scaled X used for all smoothing.
GramMatrix smoothing_gram(const Matrix& x_cont,
                          const std::vector<CategoricalColumn>& x_disc, double h0,
                          const SmoothingKernel& k);
GramMatrix smoothing_gram(const Dataset& ds, double h0, const SmoothingKernel& k);

// C_ij = gaussian_c(dist2_ij); validates that the input is a symmetric
// nonnegative matrix with zero diagonal.
GramMatrix characteristic_gram(const Matrix& dist2, const CharKernelParams& params);

namespace reference {
// Entrywise double loop over scalar kernel evaluations.
GramMatrix smoothing_gram(const Matrix& x_cont,
                          const std::vector<CategoricalColumn>& x_disc, double h0,
                          const SmoothingKernel& k);
}

}  // namespace kcmd

#endif
