#include "kcmd/data.hpp"

#include <cmath>
#include <sstream>

namespace kcmd {

const char* stage_name(Stage stage) {
    switch (stage) {
        case Stage::io: return "io";
        case Stage::validate: return "validate";
        case Stage::preprocessing: return "preprocessing";
        case Stage::smoothing: return "smoothing";
        case Stage::statistic: return "statistic";
        case Stage::bootstrap: return "bootstrap";
        case Stage::internal: return "internal";
    }
    return "unknown";
}

std::vector<double> trapezoid_weights(const std::vector<double>& grid) {
    const std::size_t g = grid.size();
    std::vector<double> w(g, 0.0);
    if (g < 2) throw Error(Stage::validate, "curve grid needs at least 2 points");
    w[0] = 0.5 * (grid[1] - grid[0]);
    for (std::size_t i = 1; i + 1 < g; ++i) w[i] = 0.5 * (grid[i + 1] - grid[i - 1]);
    w[g - 1] = 0.5 * (grid[g - 1] - grid[g - 2]);
    return w;
}

ValueKind kind_of(const Value& v) {
    switch (v.index()) {
        case 0: return ValueKind::scalar;
        case 1: return ValueKind::vector;
        case 2: return ValueKind::functional;
        default: return ValueKind::categorical;
    }
}

namespace {

[[noreturn]] void mismatch(const std::string& context, const std::string& detail) {
    std::string where = context.empty() ? "inner_product" : context;
    throw Error(Stage::validate, where + ": " + detail);
}

}  // namespace

double inner_product(const Value& a, const Value& b, const std::string& context) {
    if (a.index() != b.index()) mismatch(context, "mixed value kinds");
    switch (kind_of(a)) {
        case ValueKind::scalar:
            return std::get<double>(a) * std::get<double>(b);
        case ValueKind::vector: {
            const auto& x = std::get<std::vector<double>>(a);
            const auto& y = std::get<std::vector<double>>(b);
            if (x.size() != y.size()) mismatch(context, "vector length mismatch");
            long double acc = 0.0L;
            for (std::size_t i = 0; i < x.size(); ++i) acc += (long double)x[i] * y[i];
            return static_cast<double>(acc);
        }
        case ValueKind::functional: {
            const auto& f = std::get<Curve>(a);
            const auto& g = std::get<Curve>(b);
            if (f.grid != g.grid) mismatch(context, "curve grid mismatch");
            const auto w = trapezoid_weights(f.grid);
            long double acc = 0.0L;
            for (std::size_t i = 0; i < w.size(); ++i)
                acc += (long double)w[i] * f.values[i] * g.values[i];
            return static_cast<double>(acc);
        }
        case ValueKind::categorical: {
            const auto& x = std::get<Categorical>(a);
            const auto& y = std::get<Categorical>(b);
            return x.level == y.level ? 1.0 : 0.0;
        }
    }
    mismatch(context, "unreachable");
}

Value ValueColumn::value(std::size_t i) const {
    switch (kind) {
        case ValueKind::scalar:
            return data[i];
        case ValueKind::vector:
            return std::vector<double>(data.begin() + i * width,
                                       data.begin() + (i + 1) * width);
        case ValueKind::functional: {
            Curve c;
            c.grid = grid;
            c.values.assign(data.begin() + i * width, data.begin() + (i + 1) * width);
            return c;
        }
        case ValueKind::categorical:
            return Categorical{levels[i], level_count};
    }
    throw Error(Stage::internal, "bad column kind");
}

ValueColumn ValueColumn::scalars(std::vector<double> values, std::string name) {
    ValueColumn c;
    c.kind = ValueKind::scalar;
    c.name = std::move(name);
    c.n = values.size();
    c.width = 1;
    c.data = std::move(values);
    return c;
}

ValueColumn ValueColumn::vectors(Matrix values, std::string name) {
    ValueColumn c;
    c.kind = ValueKind::vector;
    c.name = std::move(name);
    c.n = values.rows();
    c.width = values.cols();
    c.data.assign(values.data(), values.data() + values.rows() * values.cols());
    return c;
}

ValueColumn ValueColumn::curves(std::vector<double> grid, Matrix values, std::string name) {
    ValueColumn c;
    c.kind = ValueKind::functional;
    c.name = std::move(name);
    c.n = values.rows();
    c.width = values.cols();
    if (grid.size() != c.width)
        throw Error(Stage::validate, "curve column " + c.name + ": grid/value length mismatch");
    c.grid = std::move(grid);
    c.data.assign(values.data(), values.data() + values.rows() * values.cols());
    return c;
}

ValueColumn ValueColumn::categoricals(std::vector<int> levels, int level_count,
                                      std::string name) {
    ValueColumn c;
    c.kind = ValueKind::categorical;
    c.name = std::move(name);
    c.n = levels.size();
    c.width = 1;
    c.levels = std::move(levels);
    c.level_count = level_count;
    return c;
}

namespace {

void check_grid(const std::vector<double>& grid, const std::string& name,
                std::vector<std::string>& problems) {
    if (grid.size() < 2) {
        problems.push_back(name + ": grid needs at least 2 points");
        return;
    }
    if (grid.front() < 0.0 || grid.back() > 1.0)
        problems.push_back(name + ": grid must lie in [0,1]");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1])) {
            problems.push_back(name + ": grid not strictly increasing at index " +
                               std::to_string(i));
            break;
        }
}

void check_column(const ValueColumn& col, std::size_t n, const std::string& label,
                  std::vector<std::string>& problems) {
    const std::string name = col.name.empty() ? label : col.name;
    if (col.n != n)
        problems.push_back(name + ": has " + std::to_string(col.n) + " rows, expected " +
                           std::to_string(n));
    if (col.kind == ValueKind::categorical) {
        for (std::size_t i = 0; i < col.levels.size(); ++i)
            if (col.levels[i] < 0 || col.levels[i] >= col.level_count) {
                problems.push_back(name + ": level index out of range at row " +
                                   std::to_string(i));
                break;
            }
        return;
    }
    if (col.kind == ValueKind::functional) check_grid(col.grid, name, problems);
    for (std::size_t i = 0; i < col.data.size(); ++i)
        if (!std::isfinite(col.data[i])) {
            problems.push_back(name + ": non-finite entry at row " +
                               std::to_string(i / col.width) + ", position " +
                               std::to_string(i % col.width));
            break;
        }
}

}  // namespace

void validate(const Dataset& ds) {
    std::vector<std::string> problems;
    if (ds.n < 4)
        problems.push_back("n=" + std::to_string(ds.n) +
                           " < 4: U-statistic needs four distinct indices");
    if (ds.d_c() + ds.d_d() < 1) problems.push_back("dataset has no X covariate");
    if (ds.w.empty()) problems.push_back("dataset has no W covariate");

    check_column(ds.y, ds.n, "y", problems);

    if (ds.x_cont.rows() != ds.n && ds.x_cont.cols() > 0)
        problems.push_back("x_cont: row count mismatch");
    for (std::size_t i = 0; i < ds.x_cont.rows(); ++i)
        for (std::size_t j = 0; j < ds.x_cont.cols(); ++j)
            if (!std::isfinite(ds.x_cont(i, j))) {
                problems.push_back("x_cont: non-finite entry at row " + std::to_string(i) +
                                   ", column " + std::to_string(j));
                i = ds.x_cont.rows();
                break;
            }

    for (std::size_t c = 0; c < ds.x_disc.size(); ++c) {
        const auto& col = ds.x_disc[c];
        const std::string name = col.name.empty() ? "x_disc[" + std::to_string(c) + "]" : col.name;
        if (col.levels.size() != ds.n) problems.push_back(name + ": row count mismatch");
        for (std::size_t i = 0; i < col.levels.size(); ++i)
            if (col.levels[i] < 0 || col.levels[i] >= col.level_count) {
                problems.push_back(name + ": level index out of range at row " +
                                   std::to_string(i));
                break;
            }
    }

    for (std::size_t c = 0; c < ds.w.size(); ++c)
        check_column(ds.w[c], ds.n, "w[" + std::to_string(c) + "]", problems);

    if (!problems.empty()) {
        std::ostringstream out;
        for (std::size_t i = 0; i < problems.size(); ++i) {
            if (i) out << "; ";
            out << problems[i];
        }
        throw Error(Stage::validate, out.str());
    }
}

ResponseMatrix embed_response(const ValueColumn& column) {
    ResponseMatrix r;
    r.n = column.n;
    switch (column.kind) {
        case ValueKind::scalar:
        case ValueKind::vector:
            r.m = column.width;
            r.coeff = column.data;
            r.weight.assign(r.m, 1.0);
            break;
        case ValueKind::functional:
            r.m = column.width;
            r.coeff = column.data;
            r.weight = trapezoid_weights(column.grid);
            break;
        case ValueKind::categorical:
            r.m = static_cast<std::size_t>(column.level_count);
            r.coeff.assign(r.n * r.m, 0.0);
            for (std::size_t i = 0; i < r.n; ++i)
                r.coeff[i * r.m + static_cast<std::size_t>(column.levels[i])] = 1.0;
            r.weight.assign(r.m, 1.0);
            break;
    }
    return r;
}

GramMatrix response_gram(const ResponseMatrix& y) {
    const std::size_t n = y.n;
    GramMatrix g;
    g.kind = GramKind::response;
    g.m = Matrix(n, n);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8)
#endif
    for (long long ii = 0; ii < static_cast<long long>(n); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        for (std::size_t j = i; j < n; ++j) {
            const double v = y.dot(i, j);
            g.m(i, j) = v;
            g.m(j, i) = v;
        }
    }
    return g;
}

GramMatrix response_gram(const Dataset& ds) { return response_gram(embed_response(ds.y)); }

namespace reference {

GramMatrix response_gram(const ValueColumn& y) {
    GramMatrix g;
    g.kind = GramKind::response;
    g.m = Matrix(y.n, y.n);
    for (std::size_t i = 0; i < y.n; ++i)
        for (std::size_t j = 0; j <= i; ++j) {
            const double v = inner_product(y.value(i), y.value(j), y.name);
            g.m(i, j) = v;
            g.m(j, i) = v;
        }
    return g;
}

}  // namespace reference
}  // namespace kcmd
