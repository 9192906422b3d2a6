#ifndef KCMD_BOOTSTRAP_HPP
#define KCMD_BOOTSTRAP_HPP

#include <cstdint>
#include <span>

#include "kcmd/data.hpp"
#include "kcmd/rng.hpp"

namespace kcmd {

// Two-point multiplier law with moments E r = 0, E r^2 = 1, E r^3 = 1.
inline constexpr double kMammenLow = -0.61803398874989484820;   // (1 - sqrt 5)/2
inline constexpr double kMammenHigh = 1.61803398874989484820;   // (1 + sqrt 5)/2
inline constexpr double kMammenLowProb = 0.72360679774997896964;  // (5 + sqrt 5)/10

std::vector<double> mammen_sample(std::size_t n, Rng& rng);

struct BootstrapRun {
    std::vector<double> replicates;  // n_B draws of n U_n*
    double observed = 0.0;           // n U_n
    double p_value = 0.0;
    double q_alpha = 0.0;
    bool reject = false;
    std::uint64_t seed = 0;
    std::size_t n_b = 0;
};

// n U_n* = (1/(n-1)) sum_{i != j} r_i r_j D_ij Ge_ij.
double boot_stat(const GramMatrix& d, const GramMatrix& g_resid,
                 std::span<const double> r);

// n_b replicates; replicate b draws its multipliers from the stream derived
// from (seed, b), so the run is identical for any parallel schedule.
BootstrapRun run_bootstrap(const GramMatrix& d, const GramMatrix& g_resid,
                           std::size_t n_b, std::uint64_t seed);

// p = (1 + #{replicates >= observed}) / (n_B + 1); q_alpha is the type-7
// empirical (1 - alpha) quantile; reject when observed exceeds it.
BootstrapRun p_value_and_quantile(BootstrapRun run, double observed, double alpha);

namespace reference {
// Explicit i != j double loop.
double boot_stat(const GramMatrix& d, const GramMatrix& g_resid,
                 std::span<const double> r);
}

}  // namespace kcmd

#endif
