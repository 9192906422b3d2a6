#ifndef KCMD_PREPROCESSING_HPP
#define KCMD_PREPROCESSING_HPP

#include "kcmd/data.hpp"
#include "kcmd/kernels.hpp"

namespace kcmd {

// Quantile of order p for a sample, linear interpolation at rank p*(m-1)
// (the usual "type 7" rule). Used for scaling medians, sigma_c^2 and the
// bootstrap quantile alike.
double quantile_type7(std::vector<double> values, double p);

enum class ScaleEstimator { median, mean };

// Blocks containing a categorical column are scaled by the mean of the
// pairwise squared distances; the median can degenerate to zero there.
ScaleEstimator scale_estimator_for(bool block_has_categorical);

struct ScalingReport {
    std::vector<double> component_scales_x;  // continuous columns then discrete
    std::vector<double> component_scales_w;  // one per W block
    std::vector<ScaleEstimator> estimator_x;
    std::vector<ScaleEstimator> estimator_w;
    double block_scale_x = 1.0;
    double block_scale_w = 1.0;
    ScaleEstimator block_estimator_x = ScaleEstimator::median;
    ScaleEstimator block_estimator_w = ScaleEstimator::median;
};

struct DistanceDecomposition {
    Matrix dist2_x;  // scaled ||X_i - X_j||^2, empirical center 1
    Matrix dist2_w;
    Matrix dist2_z;  // dist2_x + dist2_w
};

struct ScaledData {
    ScalingReport report;
    DistanceDecomposition dist;
    Matrix x_tilde;  // component-scaled continuous X, input to all smoothing
};

// Two-step scaling: each component/block is divided by the square root of
// the center (median or mean) of its pairwise squared distances, then each
// block's summed squared distances are divided by their own center.
ScaledData scale_covariates(const Dataset& ds);

// sigma_c^2 as the p-quantile of the off-diagonal upper triangle of the
// scaled Z distances.
CharKernelParams sigma_c_quantile(const Matrix& dist2_z, double p);

}  // namespace kcmd

#endif
