#include "lipext/metric_space.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "lipext/geometry.hpp"

namespace lipext {

std::string MetricViolation::describe() const {
    std::ostringstream os;
    switch (kind) {
        case Kind::Negative:
            os << "negative distance at (" << i << "," << j << "): " << amount;
            break;
        case Kind::Diagonal:
            os << "nonzero diagonal at " << i << ": " << amount;
            break;
        case Kind::Asymmetry:
            os << "asymmetry at (" << i << "," << j << "): " << amount;
            break;
        case Kind::Triangle:
            os << "triangle violation d(" << i << "," << k << ") > d(" << i << "," << j << ") + d("
               << j << "," << k << ") by " << amount;
            break;
    }
    return os.str();
}

double FiniteMetricSpace::min_positive_distance() const {
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_; ++i)
        for (int j = i + 1; j < n_; ++j) m = std::min(m, distance(i, j));
    return m;
}

MetricValidation validate_metric_rowmajor(int n, std::span<const double> table) {
    if (n < 1) throw PreconditionError("validate_metric: need at least one point");
    if (table.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n))
        throw PreconditionError("validate_metric: table is not square");
    for (double v : table)
        if (!std::isfinite(v)) throw PreconditionError("validate_metric: non-finite entry");

    MetricValidation out;
    auto at = [&](int i, int j) { return table[static_cast<std::size_t>(i) * n + j]; };
    for (int i = 0; i < n; ++i) {
        if (at(i, i) != 0.0)
            out.violations.push_back({MetricViolation::Kind::Diagonal, i, i, -1, at(i, i)});
        for (int j = 0; j < n; ++j) {
            if (at(i, j) < 0.0)
                out.violations.push_back({MetricViolation::Kind::Negative, i, j, -1, at(i, j)});
            if (j > i && at(i, j) != at(j, i))
                out.violations.push_back(
                    {MetricViolation::Kind::Asymmetry, i, j, -1, at(i, j) - at(j, i)});
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j == i) continue;
            for (int k = 0; k < n; ++k) {
                if (k == i || k == j) continue;
                const double lhs = at(i, k);
                const double rhs = at(i, j) + at(j, k);
                const double tol = FiniteMetricSpace::kTriangleRelTol * std::max({1.0, lhs, rhs});
                if (lhs > rhs + tol)
                    out.violations.push_back(
                        {MetricViolation::Kind::Triangle, i, j, k, lhs - rhs});
            }
        }
    }
    if (out.violations.empty()) {
        FiniteMetricSpace s;
        s.n_ = n;
        s.d_.assign(table.begin(), table.end());
        out.space = std::move(s);
    }
    return out;
}

MetricValidation validate_metric(const std::vector<std::vector<double>>& table) {
    const int n = static_cast<int>(table.size());
    if (n < 1) throw PreconditionError("validate_metric: need at least one point");
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(n) * n);
    for (const auto& row : table) {
        if (static_cast<int>(row.size()) != n)
            throw PreconditionError("validate_metric: table is not square");
        flat.insert(flat.end(), row.begin(), row.end());
    }
    return validate_metric_rowmajor(n, flat);
}

FiniteMetricSpace metric_from_table(int n, std::span<const double> table) {
    MetricValidation v = validate_metric_rowmajor(n, table);
    if (!v.ok()) {
        std::string msg = "metric_from_table: axioms violated: " + v.violations[0].describe();
        throw PreconditionError(msg);
    }
    return *std::move(v.space);
}

FiniteMetricSpace metric_from_points(std::span<const std::vector<double>> points) {
    const int n = static_cast<int>(points.size());
    if (n < 1) throw PreconditionError("metric_from_points: need at least one point");
    for (const auto& p : points) {
        if (p.size() != points[0].size())
            throw PreconditionError("metric_from_points: inconsistent dimensions");
        if (!all_finite(p)) throw PreconditionError("metric_from_points: non-finite coordinate");
    }
    std::vector<double> d(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double dist = euclidean_distance(points[i], points[j]);
            d[static_cast<std::size_t>(i) * n + j] = dist;
            d[static_cast<std::size_t>(j) * n + i] = dist;
        }
    return metric_from_table(n, d);
}

}  // namespace lipext
