#pragma once

#include <span>
#include <vector>

#include "lipext/metric_core.hpp"

namespace lipext {

// Finite weighted tree with points allowed anywhere on edges: a concrete
// complete R-tree. All minimizations on it are exact and combinatorial.
class WeightedTree {
public:
    struct Edge {
        int u;  // u < v after normalization
        int v;
        double length;
    };
    struct EdgeSpec {
        int u;
        int v;
        double length;
    };

    // Validates: vertex_count >= 2, exactly vertex_count-1 edges, connected,
    // positive finite lengths. Throws PreconditionError otherwise.
    static WeightedTree build(int vertex_count, std::span<const EdgeSpec> edges);

    int vertex_count() const { return vc_; }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const Edge& edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }
    double vertex_distance(int u, int v) const {
        return vdist_[static_cast<std::size_t>(u) * vc_ + v];
    }
    int lowest_incident_edge(int v) const { return lowest_edge_[static_cast<std::size_t>(v)]; }
    // sequence of vertices from u to v along the unique path
    std::vector<int> vertex_path(int u, int v) const;

private:
    int vc_ = 0;
    std::vector<Edge> edges_;
    std::vector<std::vector<std::pair<int, int>>> adj_;  // vertex -> (neighbor, edge id)
    std::vector<double> vdist_;
    std::vector<int> lowest_edge_;
};

// A point on an edge. Canonical form: offsets strictly inside the edge stay as
// given; a point sitting on a vertex is represented on the lowest incident
// edge of that vertex. Equality of canonical forms is geometric equality.
struct TreePoint {
    int edge = 0;
    double offset = 0.0;
};

TreePoint canonicalize(const WeightedTree& tree, TreePoint p);
TreePoint vertex_point(const WeightedTree& tree, int v);
bool same_point(const WeightedTree& tree, TreePoint a, TreePoint b);

// Exact geodesic distance: path length through the unique vertex path plus
// edge offsets.
double tree_distance(const WeightedTree& tree, TreePoint p, TreePoint q);
double point_vertex_distance(const WeightedTree& tree, TreePoint p, int v);

// The point at distance s from `from` along the geodesic toward `to`.
TreePoint point_along(const WeightedTree& tree, TreePoint from, TreePoint to, double s);

struct TreeGeometry {
    const WeightedTree* tree = nullptr;
    using Point = TreePoint;
    double distance(const Point& a, const Point& b) const { return tree_distance(*tree, a, b); }
    bool valid_point(const Point& p) const;
};

struct TreeBall {
    TreePoint center;
    double radius;
};

struct TreeIntersection {
    bool feasible;      // min_h <= 0, cross-checked against the pairwise radius test
    TreePoint witness;  // exact minimizer of h(p) = max_j (d(p, c_j) - r_j)
    double min_h;
};

// Exact minimization of h over the whole tree: distances restricted to an edge
// are piecewise linear with at most one breakpoint, so candidates are edge
// endpoints, breakpoints, and pairwise piece crossings. Ties resolve to the
// lowest (edge id, offset).
TreeIntersection tree_ball_intersection(const WeightedTree& tree, std::span<const TreeBall> balls);

struct TreeNearestResult {
    bool feasible;
    TreePoint point;      // feasible point minimizing distance to the anchor
    double violation;     // max over balls of (d(point, c) - r), clamped at 0
};

// Nearest-to-anchor point of the ball intersection, exact on the same candidate
// grid; feasibility is tested with a 1-ulp guard so exactly-active constraints
// do not spuriously empty the set.
TreeNearestResult tree_constrained_nearest(const WeightedTree& tree,
                                           std::span<const TreeBall> balls, TreePoint anchor);

// Map into a tree given on a subset of a finite source space.
struct TreeInstance {
    FiniteMetricSpace source;
    WeightedTree target;
    std::vector<int> domain;
    std::vector<TreePoint> values;

    TreeGeometry geometry() const { return TreeGeometry{&target}; }
    PartialMap<TreeGeometry> partial_map() const;
    void validate() const;
};

using TreeExtension = ExtensionResult<TreeGeometry>;

// Greedy Lipschitz extension with Lip(f', X) = Lip(f, A): each point picks the
// exact minimizer of the ball-intersection objective with radii L * source
// distances. Works for any finite source metric.
TreeExtension lipschitz_extend_tree(const TreeInstance& inst, double L,
                                    std::span<const int> order = {});

// Greedy transport with the extra anchor ball B(f_ext(x), r), r = sup_A |f - g|;
// each pick is the feasible point nearest f_ext(x), so g = f reproduces f_ext
// bit-for-bit.
TreeExtension transport_extension_tree(const TreeInstance& f, const TreeExtension& f_ext,
                                       const std::vector<TreePoint>& g_values,
                                       std::span<const int> order = {});

}  // namespace lipext
