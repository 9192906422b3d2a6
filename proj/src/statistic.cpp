#include "kcmd/statistic.hpp"

#include <cmath>

namespace kcmd {

namespace {

void check_square(const GramMatrix& g, std::size_t n, const char* what) {
    if (g.n() != n || g.m.cols() != n)
        throw Error(Stage::statistic, std::string(what) + ": dimension mismatch");
}

std::size_t common_n(const GramMatrix& c, const GramMatrix& kt, const GramMatrix& g) {
    const std::size_t n = c.n();
    check_square(c, n, "C");
    check_square(kt, n, "Ktilde");
    check_square(g, n, "G");
    return n;
}

// n^4 V_n = sum_ij C_ij A_ij with A the Gram of a_i = s_i Y_i - sum_k Kt_ik Y_k:
// A_ij = s_i s_j G_ij - s_i P_ji - s_j P_ij + Q_ij, P = Kt G, Q = P Kt.
double n4_v(const GramMatrix& c, const GramMatrix& kt, const GramMatrix& g,
            const std::vector<double>& s, const Matrix& p, const Matrix& q) {
    const std::size_t n = c.n();
    return reduce_rows(n, [&](std::size_t i) -> long double {
        const double* crow = c.m.row(i);
        const double* grow = g.m.row(i);
        const double* prow = p.row(i);
        const double* qrow = q.row(i);
        const long double si = s[i];
        long double acc = 0.0L;
        for (std::size_t j = 0; j < n; ++j) {
            const long double aij = si * s[j] * grow[j] - si * p(j, i) -
                                    static_cast<long double>(s[j]) * prow[j] + qrow[j];
            acc += static_cast<long double>(crow[j]) * aij;
        }
        return acc;
    });
}

}  // namespace

double v_stat(const GramMatrix& c, const GramMatrix& kt, const GramMatrix& g) {
    const std::size_t n = common_n(c, kt, g);
    const auto s = row_sums(kt.m);
    const Matrix p = matmul(kt.m, g.m);
    const Matrix q = matmul(p, kt.m);
    const double n4 = static_cast<double>(n) * n * n * n;
    return n4_v(c, kt, g, s, p, q) / n4;
}

StatisticValue u_stat(const GramMatrix& c, const GramMatrix& kt, const GramMatrix& g) {
    const std::size_t n = common_n(c, kt, g);
    if (n < 4) throw Error(Stage::statistic, "u_stat needs n >= 4");

    const auto s = row_sums(kt.m);
    const Matrix kg = matmul(kt.m, g.m);
    const Matrix q = matmul(kg, kt.m);
    const Matrix kc = matmul(kt.m, c.m);
    Matrix cg(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) cg(i, j) = c.m(i, j) * g.m(i, j);
    const Matrix kcg = matmul(kt.m, cg);

    const double full = n4_v(c, kt, g, s, kg, q);

    // Pair term: both colliding pairs produce the same i,k sum.
    const double t2 = reduce_rows(n, [&](std::size_t i) -> long double {
        const double* crow = c.m.row(i);
        const double* grow = g.m.row(i);
        const double* krow = kt.m.row(i);
        long double acc = 0.0L;
        for (std::size_t k = 0; k < n; ++k) {
            const long double cc = c.m(i, i) - 2.0L * crow[k] + c.m(k, k);
            const long double gg = g.m(i, i) - 2.0L * grow[k] + g.m(k, k);
            acc += cc * static_cast<long double>(krow[k]) * krow[k] * gg;
        }
        return acc;
    });

    // Triple sum over all k,l expanded into row-local scalars; the k = l
    // diagonal equals t2 and is removed afterwards.
    const double t3_all = reduce_rows(n, [&](std::size_t i) -> long double {
        const double* crow = c.m.row(i);
        const double* grow = g.m.row(i);
        const double* krow = kt.m.row(i);
        const double* kgrow = kg.row(i);
        const double* kcrow = kc.row(i);
        const double* kcgrow = kcg.row(i);
        const long double cii = c.m(i, i);
        const long double gii = g.m(i, i);
        long double si = s[i];
        long double beta = 0.0L, gamma = 0.0L, delta = 0.0L;
        long double kgk = 0.0L, kck = 0.0L, kcgk = 0.0L;
        long double eps = 0.0L, zeta = 0.0L;
        for (std::size_t l = 0; l < n; ++l) {
            const long double a = krow[l];
            beta += a * crow[l];
            gamma += a * grow[l];
            delta += a * crow[l] * grow[l];
            kgk += static_cast<long double>(kgrow[l]) * krow[l];
            kck += static_cast<long double>(kcrow[l]) * krow[l];
            kcgk += static_cast<long double>(kcgrow[l]) * krow[l];
            eps += a * crow[l] * kgrow[l];
            zeta += a * grow[l] * kcrow[l];
        }
        return cii * gii * si * si - 2.0L * cii * si * gamma - 2.0L * gii * si * beta +
               cii * kgk + gii * kck + 2.0L * si * delta + 2.0L * beta * gamma -
               2.0L * eps - 2.0L * zeta + kcgk;
    });

    const double correction = (t3_all - t2) + 1.5 * t2;
    const double dn = static_cast<double>(n);
    const double distinct_tuples = dn * (dn - 1.0) * (dn - 2.0) * (dn - 3.0);

    StatisticValue out;
    out.v_n = full / (dn * dn * dn * dn);
    out.collision_correction = correction;
    out.u_n = (full - correction) / distinct_tuples;
    out.n_u_n = dn * out.u_n;
    return out;
}

double u_stat_bruteforce(const GramMatrix& c, const GramMatrix& kt, const GramMatrix& g) {
    const std::size_t n = common_n(c, kt, g);
    if (n < 4) throw Error(Stage::statistic, "u_stat needs n >= 4");
    long double acc = 0.0L;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            for (std::size_t k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                for (std::size_t l = 0; l < n; ++l) {
                    if (l == i || l == j || l == k) continue;
                    const long double inner =
                        g.m(i, j) - g.m(i, l) - g.m(k, j) + g.m(k, l);
                    acc += static_cast<long double>(c.m(i, j)) * kt.m(i, k) *
                           kt.m(j, l) * inner;
                }
            }
        }
    const double dn = static_cast<double>(n);
    return static_cast<double>(acc) / (dn * (dn - 1.0) * (dn - 2.0) * (dn - 3.0));
}

GramMatrix d_matrix(const GramMatrix& c, const GramMatrix& kt) {
    const std::size_t n = c.n();
    check_square(c, n, "C");
    check_square(kt, n, "Ktilde");
    const auto s = row_sums(kt.m);
    const Matrix kc = matmul(kt.m, c.m);
    const Matrix kck = matmul(kc, kt.m);

    GramMatrix d;
    d.kind = GramKind::bootstrap;
    d.m = Matrix(n, n);
    const double n2 = static_cast<double>(n) * n;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8)
#endif
    for (long long ii = 0; ii < static_cast<long long>(n); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        for (std::size_t j = i; j < n; ++j) {
            const long double v = static_cast<long double>(s[i]) * s[j] * c.m(i, j) -
                                  static_cast<long double>(s[i]) * kc(j, i) -
                                  static_cast<long double>(s[j]) * kc(i, j) + kck(i, j);
            const double dij = static_cast<double>(v) / n2;
            d.m(i, j) = dij;
            d.m(j, i) = dij;
        }
    }
    return d;
}

Matrix ctilde_matrix(const GramMatrix& c) {
    const std::size_t n = c.n();
    if (n < 4) throw Error(Stage::statistic, "ctilde needs n >= 4");
    const auto r = row_sums(c.m);
    long double grand = 0.0L, trace = 0.0L;
    for (std::size_t i = 0; i < n; ++i) {
        grand += r[i];
        trace += c.m(i, i);
    }
    const double dn = static_cast<double>(n);
    const double pairs = (dn - 2.0) * (dn - 3.0);

    Matrix ct(n, n, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long ii = 0; ii < static_cast<long long>(n); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const long double cij = c.m(i, j);
            const long double cii = c.m(i, i);
            const long double cjj = c.m(j, j);
            // Sums over k != l with k, l excluded from {i, j}.
            const long double term_cij = pairs * cij;
            const long double term_il = (dn - 3.0) * (r[i] - cii - cij);
            const long double term_kj = (dn - 3.0) * (r[j] - cjj - cij);
            const long double term_kl = grand - 2.0L * (r[i] + r[j]) + 2.0L * cii +
                                        2.0L * cjj + 2.0L * cij - trace;
            ct(i, j) = static_cast<double>((term_cij - term_il - term_kj + term_kl) / pairs);
        }
    }
    return ct;
}

double kcmd_known(const GramMatrix& c, const GramMatrix& g_resid) {
    const std::size_t n = c.n();
    check_square(g_resid, n, "residual Gram");
    const Matrix ct = ctilde_matrix(c);
    const double total = reduce_rows(n, [&](std::size_t i) -> long double {
        long double acc = 0.0L;
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) acc += static_cast<long double>(ct(i, j)) * g_resid.m(i, j);
        return acc;
    });
    const double dn = static_cast<double>(n);
    return total / (dn * (dn - 1.0));
}

GramMatrix independence_gram(const GramMatrix& c_x, const GramMatrix& g) {
    const std::size_t n = c_x.n();
    check_square(g, n, "G");
    GramMatrix h;
    h.kind = GramKind::response;
    h.m = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) h.m(i, j) = c_x.m(i, j) * g.m(i, j);
    return h;
}

GramMatrix center_gram(const GramMatrix& h) {
    const std::size_t n = h.n();
    const auto rs = row_sums(h.m);
    long double grand = 0.0L;
    for (std::size_t i = 0; i < n; ++i) grand += rs[i];
    const long double gm = grand / (static_cast<long double>(n) * n);

    GramMatrix out;
    out.kind = GramKind::residual;
    out.m = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        const long double ri = static_cast<long double>(rs[i]) / n;
        for (std::size_t j = 0; j < n; ++j) {
            const long double rj = static_cast<long double>(rs[j]) / n;
            out.m(i, j) = static_cast<double>(h.m(i, j) - ri - rj + gm);
        }
    }
    return out;
}

namespace reference {

double v_stat(const GramMatrix& c, const GramMatrix& kt, const GramMatrix& g) {
    const std::size_t n = common_n(c, kt, g);
    long double acc = 0.0L;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l) {
                    const long double inner =
                        g.m(i, j) - g.m(i, l) - g.m(k, j) + g.m(k, l);
                    acc += static_cast<long double>(c.m(i, j)) * kt.m(i, k) *
                           kt.m(j, l) * inner;
                }
    const double dn = static_cast<double>(n);
    return static_cast<double>(acc) / (dn * dn * dn * dn);
}

GramMatrix d_matrix(const GramMatrix& c, const GramMatrix& kt) {
    const std::size_t n = c.n();
    GramMatrix d;
    d.kind = GramKind::bootstrap;
    d.m = Matrix(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            long double acc = 0.0L;
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l)
                    acc += static_cast<long double>(kt.m(i, k)) * kt.m(j, l) *
                           (c.m(i, j) - c.m(i, l) - c.m(k, j) + c.m(k, l));
            d.m(i, j) = static_cast<double>(acc) / (static_cast<double>(n) * n);
        }
    return d;
}

Matrix ctilde_matrix(const GramMatrix& c) {
    const std::size_t n = c.n();
    Matrix ct(n, n, 0.0);
    const double pairs = (static_cast<double>(n) - 2.0) * (static_cast<double>(n) - 3.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            long double acc = 0.0L;
            for (std::size_t k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                for (std::size_t l = 0; l < n; ++l) {
                    if (l == i || l == j || l == k) continue;
                    acc += c.m(i, j) - c.m(i, l) - c.m(k, j) + c.m(k, l);
                }
            }
            ct(i, j) = static_cast<double>(acc) / pairs;
        }
    return ct;
}

double kcmd_known(const GramMatrix& c, const GramMatrix& g_resid) {
    const std::size_t n = c.n();
    const Matrix ct = ctilde_matrix(c);
    long double acc = 0.0L;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (j != i) acc += static_cast<long double>(ct(i, j)) * g_resid.m(i, j);
    const double dn = static_cast<double>(n);
    return static_cast<double>(acc) / (dn * (dn - 1.0));
}

double collision_correction(const GramMatrix& c, const GramMatrix& kt,
                            const GramMatrix& g) {
    const std::size_t n = c.n();
    long double triple = 0.0L;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            if (k == i) continue;
            for (std::size_t l = 0; l < n; ++l) {
                if (l == i || l == k) continue;
                const long double cfac =
                    c.m(i, i) - c.m(i, l) - c.m(k, i) + c.m(k, l);
                const long double gfac =
                    g.m(i, i) - g.m(i, l) - g.m(k, i) + g.m(k, l);
                triple += cfac * kt.m(i, k) * kt.m(i, l) * gfac;
            }
        }
    long double pair = 0.0L;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t k = 0; k < n; ++k) {
            const long double cfac = c.m(i, i) - 2.0L * c.m(i, k) + c.m(k, k);
            const long double gfac = g.m(i, i) - 2.0L * g.m(i, k) + g.m(k, k);
            pair += cfac * static_cast<long double>(kt.m(i, k)) * kt.m(i, k) * gfac;
        }
    return static_cast<double>(triple + 1.5L * pair);
}

}  // namespace reference
}  // namespace kcmd
