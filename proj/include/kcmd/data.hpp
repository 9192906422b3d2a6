#ifndef KCMD_DATA_HPP
#define KCMD_DATA_HPP

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

#include "kcmd/error.hpp"
#include "kcmd/matrix.hpp"

namespace kcmd {

// A function sampled on a strictly increasing grid inside [0,1]. Inner
// products use the trapezoidal rule, so two curves can only be combined when
// they share the same grid.
struct Curve {
    std::vector<double> grid;
    std::vector<double> values;
};

// Trapezoid quadrature weights for a (not necessarily uniform) grid.
std::vector<double> trapezoid_weights(const std::vector<double>& grid);

struct Categorical {
    int level = 0;
    int count = 1;
};

// One observation of a covariate or response.
using Value = std::variant<double, std::vector<double>, Curve, Categorical>;

enum class ValueKind { scalar, vector, functional, categorical };

ValueKind kind_of(const Value& v);

// Symmetric bilinear form on compatible Values: product, dot product,
// trapezoid integral, or one-hot equality indicator. `context` names the
// column in error messages.
double inner_product(const Value& a, const Value& b, const std::string& context = {});

// Homogeneous column of n Values stored columnar. Scalars/vectors keep raw
// coefficients, functional columns share one grid, categorical columns store
// level indices.
struct ValueColumn {
    ValueKind kind = ValueKind::scalar;
    std::string name;
    std::size_t n = 0;
    std::size_t width = 1;            // vector length or grid size; 1 otherwise
    std::vector<double> data;         // n*width, row-major (not used for categorical)
    std::vector<double> grid;         // functional only
    std::vector<int> levels;          // categorical only
    int level_count = 0;              // categorical only

    Value value(std::size_t i) const;

    static ValueColumn scalars(std::vector<double> values, std::string name = {});
    static ValueColumn vectors(Matrix values, std::string name = {});
    static ValueColumn curves(std::vector<double> grid, Matrix values,
                              std::string name = {});
    static ValueColumn categoricals(std::vector<int> levels, int level_count,
                                    std::string name = {});
};

struct CategoricalColumn {
    std::string name;
    std::vector<int> levels;
    int level_count = 0;
};

// Sample of (Y, X, W): response column, continuous X matrix, discrete X
// columns and the covariate blocks under test.
struct Dataset {
    std::size_t n = 0;
    ValueColumn y;
    Matrix x_cont;                         // n x d_C
    std::vector<std::string> x_cont_names;
    std::vector<CategoricalColumn> x_disc;
    std::vector<ValueColumn> w;

    std::size_t d_c() const { return x_cont.cols(); }
    std::size_t d_d() const { return x_disc.size(); }
};

// Checks every dataset invariant; throws Error(Stage::validate) describing
// all violations found.
void validate(const Dataset& ds);

enum class GramKind { characteristic, smoothing, response, residual, bootstrap };

struct GramMatrix {
    GramKind kind = GramKind::response;
    Matrix m;

    std::size_t n() const { return m.rows(); }
    double operator()(std::size_t i, std::size_t j) const { return m(i, j); }
};

// Embedded response rows with quadrature weights: scalar -> [y], vector as
// is, curve -> node values with trapezoid weights, categorical -> one-hot.
// All response algebra downstream (NW fits, residuals, Grams) runs on this.
struct ResponseMatrix {
    std::size_t n = 0;
    std::size_t m = 0;
    std::vector<double> coeff;    // n x m
    std::vector<double> weight;   // m quadrature weights (all 1 when not functional)

    const double* row(std::size_t i) const { return coeff.data() + i * m; }
    double* row(std::size_t i) { return coeff.data() + i * m; }

    double dot(std::size_t i, std::size_t j) const {
        const double* a = row(i);
        const double* b = row(j);
        long double acc = 0.0L;
        for (std::size_t t = 0; t < m; ++t)
            acc += static_cast<long double>(weight[t]) * a[t] * b[t];
        return static_cast<double>(acc);
    }

    double squared_norm(std::size_t i) const { return dot(i, i); }
};

ResponseMatrix embed_response(const ValueColumn& column);

// G_ij = <Y_i, Y_j>; symmetric PSD.
GramMatrix response_gram(const Dataset& ds);
GramMatrix response_gram(const ResponseMatrix& y);

namespace reference {
// Pairwise inner_product loop on Values; the production path goes through
// the embedding.
GramMatrix response_gram(const ValueColumn& y);
}

}  // namespace kcmd

#endif
