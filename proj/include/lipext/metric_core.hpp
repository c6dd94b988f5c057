#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <vector>

#include "lipext/geometry.hpp"
#include "lipext/metric_space.hpp"

namespace lipext {

// Target geometries. Each one provides a Point type, a distance, and point
// validation; the extension machinery is written against this shape.

struct EuclideanGeometry {
    int dim = 1;
    using Point = VecD;
    double distance(const Point& a, const Point& b) const { return euclidean_distance(a, b); }
    bool valid_point(const Point& p) const {
        return static_cast<int>(p.size()) == dim && all_finite(p);
    }
};

struct SupNormGeometry {
    int dim = 1;
    using Point = VecD;
    double distance(const Point& a, const Point& b) const { return supnorm_distance(a, b); }
    bool valid_point(const Point& p) const {
        return static_cast<int>(p.size()) == dim && all_finite(p);
    }
};

// Values of a map on a subset A of a finite source space, into one target geometry.
template <class G>
struct PartialMap {
    FiniteMetricSpace source;
    std::vector<int> domain;                  // A: distinct indices into the source
    std::vector<typename G::Point> values;    // f(a) for each a in domain order
    G target;

    void validate() const {
        if (domain.empty()) throw PreconditionError("PartialMap: domain must be nonempty");
        if (domain.size() != values.size())
            throw PreconditionError("PartialMap: domain/values size mismatch");
        std::vector<char> seen(static_cast<std::size_t>(source.size()), 0);
        for (int a : domain) {
            if (a < 0 || a >= source.size())
                throw PreconditionError("PartialMap: domain index out of range");
            if (seen[static_cast<std::size_t>(a)])
                throw PreconditionError("PartialMap: repeated domain index");
            seen[static_cast<std::size_t>(a)] = 1;
        }
        for (const auto& v : values)
            if (!target.valid_point(v)) throw PreconditionError("PartialMap: invalid target point");
    }
};

// A full map on the source plus its certificates.
template <class G>
struct ExtensionResult {
    std::vector<typename G::Point> values;   // one target point per source index
    double lip_achieved = 0.0;               // Lip of the full map
    double max_constraint_violation = 0.0;   // worst positive feasibility residual
};

namespace detail {

// Shared pair scan. Throws if two source-identical points carry different values.
template <class G>
double lip_over_positions(const FiniteMetricSpace& X, std::span<const int> idx,
                          std::span<const typename G::Point> vals, const G& g) {
    double best = 0.0;
    for (std::size_t p = 0; p < idx.size(); ++p) {
        for (std::size_t q = p + 1; q < idx.size(); ++q) {
            const double dx = X.distance(idx[p], idx[q]);
            const double dy = g.distance(vals[p], vals[q]);
            if (dx == 0.0) {
                if (dy == 0.0) continue;  // consistent duplicate, constrains nothing
                throw PreconditionError(
                    "lip_constant: identical source points with different values "
                    "(infinite constant)");
            }
            best = std::max(best, dy / dx);
        }
    }
    return best;
}

}  // namespace detail

// Smallest Lipschitz constant of f restricted to B (source indices, B ⊆ A).
// Exact max over unordered pairs; 0 when |B| = 1.
template <class G>
double lip_constant(const PartialMap<G>& f, std::span<const int> B) {
    std::vector<int> pos;
    std::vector<typename G::Point> vals;
    pos.reserve(B.size());
    vals.reserve(B.size());
    for (int b : B) {
        auto it = std::find(f.domain.begin(), f.domain.end(), b);
        if (it == f.domain.end())
            throw PreconditionError("lip_constant: B contains an index outside the domain");
        pos.push_back(b);
        vals.push_back(f.values[static_cast<std::size_t>(it - f.domain.begin())]);
    }
    if (pos.empty()) throw PreconditionError("lip_constant: B must be nonempty");
    return detail::lip_over_positions<G>(f.source, pos, vals, f.target);
}

template <class G>
double lip_constant(const PartialMap<G>& f) {
    f.validate();
    return detail::lip_over_positions<G>(f.source, f.domain, f.values, f.target);
}

// Lip of a full map (one value per source index).
template <class G>
double lip_constant_full(const FiniteMetricSpace& X, std::span<const typename G::Point> vals,
                         const G& g) {
    if (static_cast<int>(vals.size()) != X.size())
        throw PreconditionError("lip_constant_full: one value per source point required");
    std::vector<int> idx(vals.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
    return detail::lip_over_positions<G>(X, idx, vals, g);
}

// Supremum distance between two maps on the same domain.
template <class G>
double sup_distance(std::span<const typename G::Point> a, std::span<const typename G::Point> b,
                    const G& g) {
    if (a.size() != b.size()) throw PreconditionError("sup_distance: domain mismatch");
    if (a.empty()) throw PreconditionError("sup_distance: empty domain");
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, g.distance(a[i], b[i]));
    return m;
}

// Pompeiu-Hausdorff distance between two finite point sets.
template <class G>
double hausdorff(std::span<const typename G::Point> P, std::span<const typename G::Point> Q,
                 const G& g) {
    if (P.empty() || Q.empty()) throw PreconditionError("hausdorff: empty set");
    double h = 0.0;
    auto one_sided = [&](std::span<const typename G::Point> from,
                         std::span<const typename G::Point> to) {
        for (const auto& p : from) {
            double best = g.distance(p, to[0]);
            for (std::size_t j = 1; j < to.size(); ++j)
                best = std::min(best, g.distance(p, to[j]));
            h = std::max(h, best);
        }
    };
    one_sided(P, Q);
    one_sided(Q, P);
    return h;
}

// Distance on the direct product of the source with the Euclidean plane:
// sqrt(d_X(x1,x2)^2 + |a1-a2|^2).
inline double product_distance(const FiniteMetricSpace& X, int x1, std::array<double, 2> a1,
                               int x2, std::array<double, 2> a2) {
    if (x1 < 0 || x1 >= X.size() || x2 < 0 || x2 >= X.size())
        throw PreconditionError("product_distance: source index out of range");
    const double dx = X.distance(x1, x2);
    const double du = a1[0] - a2[0];
    const double dv = a1[1] - a2[1];
    return std::sqrt(dx * dx + du * du + dv * dv);
}

}  // namespace lipext
