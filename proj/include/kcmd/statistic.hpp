#ifndef KCMD_STATISTIC_HPP
#define KCMD_STATISTIC_HPP

#include "kcmd/data.hpp"

namespace kcmd {

struct StatisticValue {
    double u_n = 0.0;
    double v_n = 0.0;
    double n_u_n = 0.0;                  // n * u_n, the test statistic
    double collision_correction = 0.0;   // n^4 V_n - n(n-1)(n-2)(n-3) U_n
};

// V_n = (1/n^4) sum_{i,j,k,l} C_ij Kt_ik Kt_jl (G_ij - G_il - G_kj + G_kl),
// computed with two matrix products instead of the quadruple loop.
double v_stat(const GramMatrix& c, const GramMatrix& ktilde, const GramMatrix& g);

// U_n restricts the same sum to distinct index tuples. The fast path removes
// the colliding tuples from n^4 V_n:
//
//   n^4 V_n - n(n-1)(n-2)(n-3) U_n
//     = sum_{i != k != l} (C_ii - C_il - C_ki + C_kl) Kt_ik Kt_il
//         <Y_i - Y_k, Y_i - Y_l>
//     + (3/2) sum_{i,k} (C_ii - 2 C_ik + C_kk) Kt_ik^2 ||Y_i - Y_k||^2,
//
// with the triple sum reduced to O(n) per row after three matrix products.
StatisticValue u_stat(const GramMatrix& c, const GramMatrix& ktilde, const GramMatrix& g);

// Literal distinct-index quadruple loop; the oracle for u_stat. Quartic cost,
// meant for n up to a few dozen.
double u_stat_bruteforce(const GramMatrix& c, const GramMatrix& ktilde,
                         const GramMatrix& g);

// Bootstrap coefficients
//   D_ij = (1/n^2) sum_{k,l} Kt_ik Kt_jl (C_ij - C_il - C_kj + C_kl),
// assembled from row sums and two products; exactly symmetric by mirroring.
GramMatrix d_matrix(const GramMatrix& c, const GramMatrix& ktilde);

// Exclusion-corrected coefficients of the known-m estimator:
//   Ct_ij = (1/((n-2)(n-3))) sum_{k != l, k,l not in {i,j}}
//             (C_ij - C_il - C_kj + C_kl),
// in O(n^2) from row sums, the grand sum and the trace. Diagonal unused.
Matrix ctilde_matrix(const GramMatrix& c);

// KCMD_n = (1/(n(n-1))) sum_{i != j} Ct_ij Gr_ij for a residual Gram Gr.
double kcmd_known(const GramMatrix& c, const GramMatrix& g_resid);

// Tensor identity for independent X and W: the Gram of c_X(X_i,.) (x) Y_i is
// the Hadamard product H_ij = Cx_ij G_ij.
GramMatrix independence_gram(const GramMatrix& c_x, const GramMatrix& g);

// Double centering H_ij - rowmean_i - rowmean_j + grandmean; subtracts the
// empirical mean embedding.
GramMatrix center_gram(const GramMatrix& h);

namespace reference {
// Serial full-index loops; oracles for the fast paths above.
double v_stat(const GramMatrix& c, const GramMatrix& ktilde, const GramMatrix& g);
GramMatrix d_matrix(const GramMatrix& c, const GramMatrix& ktilde);
Matrix ctilde_matrix(const GramMatrix& c);
double kcmd_known(const GramMatrix& c, const GramMatrix& g_resid);
// Independent evaluation of the collision-correction sum (triple loop).
double collision_correction(const GramMatrix& c, const GramMatrix& ktilde,
                            const GramMatrix& g);
}

}  // namespace kcmd

#endif
