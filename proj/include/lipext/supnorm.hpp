#pragma once

#include <optional>
#include <span>
#include <vector>

#include "lipext/metric_core.hpp"

namespace lipext {

// Map into l_inf^m given on a subset of a finite source space.
struct SupNormInstance {
    FiniteMetricSpace source;
    std::vector<int> domain;     // A
    std::vector<VecD> values;    // f(a)
    int target_dim = 1;

    SupNormGeometry geometry() const { return SupNormGeometry{target_dim}; }
    PartialMap<SupNormGeometry> partial_map() const;
    void validate() const;
};

using SupNormExtension = ExtensionResult<SupNormGeometry>;

// Axis-aligned box; balls in l_inf^m are cubes, so every ball intersection is one.
// Emptiness is an explicit flag, never inverted bounds.
struct Box {
    VecD lower;
    VecD upper;
    bool is_empty = false;

    bool contains(std::span<const double> p) const;
    VecD clamp(std::span<const double> p) const;
    // half the longest side: the l_inf circumradius of the box
    double circumradius() const;
};

// Per-coordinate lower/upper envelopes of the L-Lipschitz extensions at source
// index x: lower_i = max_a (f_i(a) - L d(x,a)), upper_i = min_a (f_i(a) + L d(x,a)).
struct CoordinateEnvelope {
    VecD lower;
    VecD upper;
};
CoordinateEnvelope envelopes(const SupNormInstance& f, double L, int x);

// Extension whose value at x is the coordinatewise envelope midpoint; values on
// A are copied bitwise. Lip(output) <= L.
SupNormExtension midpoint_operator(const SupNormInstance& f, double L);

// Intersection of all closed balls containing the set; in l_inf^m this is the
// coordinatewise bounding box (every cube containing the set contains its
// bounding box, and the box is itself an intersection of cubes).
Box admissible_hull(std::span<const VecD> values);

// Midpoint extension clamped coordinatewise into the admissible hull of f(A).
// Clamping is 1-Lipschitz per coordinate and fixes the A-values, so the output
// still extends f, keeps Lip <= L, and lies in the hull exactly.
SupNormExtension clamped_operator(const SupNormInstance& f, double L);

struct SupBall {
    VecD center;
    double radius;
};

// Per-coordinate interval intersection of cubes. Nonempty iff all pairwise
// center distances are at most the radius sums; both computations are made and
// must agree.
Box ball_intersection(std::span<const SupBall> balls);

struct TransportOptions {
    // Adds the admissible hull of g(A) (resp. f(A)) to every feasible set, the
    // hull-constrained variant of the greedy construction.
    bool constrain_to_admissible_hull = false;
};

// Greedy pointwise transport: given a nonexpansive extension f_ext of f and a
// nonexpansive g on the same A, builds a nonexpansive extension g' of g with
// sup-distance to f_ext at most r = sup_A |f - g|. Each pick is the clamp of
// f_ext(x) into the feasible box, which reproduces f_ext bit-for-bit when g = f.
SupNormExtension transport_extension(const SupNormInstance& f, const SupNormExtension& f_ext,
                                     const std::vector<VecD>& g_values,
                                     std::span<const int> order = {},
                                     const TransportOptions& topts = {});

// One member of the external family: a full nonexpansive map, its radius, and a
// witness extension of f certifying dist(map, extensions of f) <= radius.
struct FamilyMember {
    std::vector<VecD> map_values;  // f_alpha on all of X
    double radius;                 // r_alpha
    std::vector<VecD> witness;     // an extension of f with sup|f_alpha - witness| <= r_alpha
};

// Greedy construction of a nonexpansive extension of f lying within r_alpha of
// every family member. Feasible sets are boxes; each pick is the box point
// nearest the centroid of the family values.
SupNormExtension external_intersection(const SupNormInstance& f,
                                       std::span<const FamilyMember> family,
                                       std::span<const int> order = {},
                                       const TransportOptions& topts = {});

}  // namespace lipext
