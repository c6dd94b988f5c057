#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lipext/metric_core.hpp"

namespace lipext {

// ---------------------------------------------------------------------------
// Instance
// ---------------------------------------------------------------------------

// Source space with a map into R^m given on a subset A. The source table must
// pass metric validation; when the instance is built from explicit points the
// table is induced by them.
struct EuclideanInstance {
    FiniteMetricSpace source;
    std::vector<VecD> source_points;  // optional; empty when loaded from a table
    std::vector<int> domain;          // A
    std::vector<VecD> values;         // f(a), points in R^target_dim
    int target_dim = 1;

    static EuclideanInstance from_points(std::vector<VecD> points, std::vector<int> domain,
                                         std::vector<VecD> values);

    EuclideanGeometry geometry() const { return EuclideanGeometry{target_dim}; }
    PartialMap<EuclideanGeometry> partial_map() const;
    void validate() const;
};

using EuclideanExtension = ExtensionResult<EuclideanGeometry>;

// ---------------------------------------------------------------------------
// Single-point feasibility step
// ---------------------------------------------------------------------------

struct BallConstraint {
    VecD center;     // point in R^m
    double radius;   // scaled by L inside the solver
};

struct MinimaxOptions {
    double tol = 1e-7;
    int iteration_cap = 100000;
};

struct MinimaxPoint {
    VecD point;
    double residual;   // V(point) = max_i (|point - c_i| - L r_i); <= tol when feasible
    int iterations;
};

// Minimizes V(y) = max_i (|y - c_i| - L r_i). Deterministic: initialization at
// the mean of the centers, diminishing-step subgradient warm start, then a
// smoothed damped-Newton continuation down to the tolerance.
MinimaxPoint extend_point(std::span<const BallConstraint> constraints, double L,
                          const MinimaxOptions& opts = {});

// ---------------------------------------------------------------------------
// Sequential extension and the continuity transports
// ---------------------------------------------------------------------------

// Assigns the points of X \ A in the given order (default: ascending index);
// each assignment solves the ball feasibility problem against A plus all
// previously assigned points. Requires lip_constant(f, A) <= L * (1 + 1e-9).
EuclideanExtension kirszbraun_extend(const EuclideanInstance& inst, double L,
                                     std::span<const int> order = {},
                                     const MinimaxOptions& opts = {});

struct PhiConstants {
    int z_index;      // lowest A index; z = f(z_index)
    double m_bound;   // M = max(1, sup_x |z - f(x)|)
    double delta;     // eps^2 / (8 M)
};
PhiConstants phi_constants(const EuclideanInstance& inst, const EuclideanExtension& f_full,
                           double eps);

struct PhiTransport {
    EuclideanExtension g_prime;
    PhiConstants constants;
};

// Nonexpansive transport: given a nonexpansive f on X and g on A with
// sup_A |f - g| < delta, produces a nonexpansive extension g' of g with
// sup_X |f - g'| <= eps (plus solver tolerance). Works on the product of the
// source with the plane, two sheets at height 0 and eps.
PhiTransport transport_phi(const EuclideanInstance& inst, const EuclideanExtension& f_full,
                           const std::vector<VecD>& g_values, double eps,
                           const MinimaxOptions& opts = {});

struct PsiConstants {
    bool constant_f = false;
    int z_index = 0;
    double m_bound = 1.0;
    double s = 0.0;          // 1 - 2^-k, smallest k with (1-s)/s^2 < eps^2/(32 M (4M+1))
    int s_exponent = 0;      // the k above
    double delta = 0.0;
    int witness_a = -1;      // pair in A realizing the Lipschitz constant
    int witness_b = -1;
    double lip_full = 0.0;   // Lip(f, X)
};
PsiConstants psi_constants(const EuclideanInstance& inst, const EuclideanExtension& f_full,
                           double eps);

struct PsiTransport {
    EuclideanExtension g_prime;
    PsiConstants constants;
    int branch = 0;  // 0: constant-f shortcut, 1: product construction, 2: far-set construction
};

// Lipschitz-constant-preserving transport: requires Lip(f,A) = Lip(f,X)
// (relative 1e-6) and sup_A |f - g| < delta; returns g' extending g with
// Lip(g', X) = Lip(g, A) and sup_X |f - g'| <= eps (plus solver tolerance).
PsiTransport transport_psi(const EuclideanInstance& inst, const EuclideanExtension& f_full,
                           const std::vector<VecD>& g_values, double eps,
                           const MinimaxOptions& opts = {});

// ---------------------------------------------------------------------------
// Convex-hull projection and the composed operator
// ---------------------------------------------------------------------------

struct HullVertexSet {
    std::vector<VecD> vertices;  // nonempty; the hull is their convex hull
};

struct ProjectionOptions {
    double tol = 1e-9;
    int iteration_cap = 10000;
};

// Nearest point of co(vertices) to p, computed over convex-combination weights
// (Wolfe's minimum-norm-point iteration). Returns p itself, bitwise, when p
// lies in the hull up to rounding resolution.
VecD min_norm_projection(const VecD& p, const HullVertexSet& hull,
                         const ProjectionOptions& opts = {});

double hull_distance(const VecD& p, const HullVertexSet& hull, const ProjectionOptions& opts = {});

// Hausdorff distance between the convex hulls of two vertex sets; exact at the
// vertex level because point-to-convex-set distance is convex.
double hull_hausdorff(const HullVertexSet& a, const HullVertexSet& b,
                      const ProjectionOptions& opts = {});

// Composes every value of an extension with the projection onto the hull.
// Values already inside the hull (in particular the A-values, which are hull
// vertices) are returned unchanged.
EuclideanExtension alpha_c_compose(const FiniteMetricSpace& source, const EuclideanExtension& ext,
                                   const HullVertexSet& hull, int target_dim,
                                   const ProjectionOptions& opts = {});

// ---------------------------------------------------------------------------
// Inequality slacks
// ---------------------------------------------------------------------------

// Four-point quadrilateral inequality slack (RHS - LHS):
// d(x,v)^2 + d(y,u)^2 + 2 d(x,u) d(y,v) - d(x,y)^2 - d(u,v)^2. Nonnegative in
// Euclidean space.
double reshetnyak_slack(const VecD& x, const VecD& y, const VecD& u, const VecD& v);

// Stability of projections onto two hulls contained in B(z, r1), evaluated at
// x in B(z, r2): 2 (r1+r2) H(co V1, co V2) - |P_1(x) - P_2(x)|^2.
double projection_stability_slack(const HullVertexSet& v1, const HullVertexSet& v2, const VecD& z,
                                  double r1, const VecD& x, double r2,
                                  const ProjectionOptions& opts = {});

// Per-audit slack ledger used by the experiment harness.
struct SlackReport {
    std::string tag;
    std::vector<double> slacks;              // RHS - LHS per trial
    double min_slack = 0.0;
    std::optional<std::size_t> witness;      // set iff min_slack < -tolerance
    std::string witness_detail;

    static SlackReport build(std::string tag, std::vector<double> slacks, double tol = 1e-9,
                             std::string witness_detail = {});
};

}  // namespace lipext
