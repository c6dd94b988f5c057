#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lipext/errors.hpp"

namespace lipext {

struct MetricViolation {
    enum class Kind { Negative, Diagonal, Asymmetry, Triangle };
    Kind kind;
    int i = -1;
    int j = -1;
    int k = -1;
    double amount = 0.0;  // size of the violation
    std::string describe() const;
};

struct MetricValidation;
class FiniteMetricSpace;
MetricValidation validate_metric_rowmajor(int n, std::span<const double> table);

// A finite metric space given by a full distance table. Instances are only
// constructible through validate_metric (or from_table, which throws), so a
// held FiniteMetricSpace always satisfies the three axioms.
class FiniteMetricSpace {
public:
    // relative tolerance on triangle slack, absorbs shortest-path float noise
    static constexpr double kTriangleRelTol = 1e-12;

    FiniteMetricSpace() = default;

    int size() const { return n_; }
    double distance(int i, int j) const { return d_[static_cast<std::size_t>(i) * n_ + j]; }
    std::span<const double> row(int i) const {
        return std::span<const double>(d_).subspan(static_cast<std::size_t>(i) * n_, n_);
    }
    const std::vector<double>& table() const { return d_; }

    // smallest distance over pairs of distinct indices (infinity for n < 2)
    double min_positive_distance() const;

private:
    int n_ = 0;
    std::vector<double> d_;  // row-major n*n

    friend MetricValidation validate_metric_rowmajor(int n, std::span<const double> table);
};

struct MetricValidation {
    std::optional<FiniteMetricSpace> space;  // set iff all axioms hold
    std::vector<MetricViolation> violations;
    bool ok() const { return space.has_value(); }
};

// Checks nonnegativity, zero diagonal, symmetry and the triangle inequality
// (the latter within kTriangleRelTol relative). Throws PreconditionError on a
// non-square table or non-finite entries; axiom failures are returned, not thrown.
MetricValidation validate_metric(const std::vector<std::vector<double>>& table);

// Convenience: validate and throw PreconditionError on any axiom violation.
FiniteMetricSpace metric_from_table(int n, std::span<const double> table);

// Distance table induced by points in Euclidean space (always a valid metric).
FiniteMetricSpace metric_from_points(std::span<const std::vector<double>> points);

}  // namespace lipext
