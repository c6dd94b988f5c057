#include "lipext/tree.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <deque>
#include <limits>
#include <sstream>

namespace lipext {

// ---------------------------------------------------------------------------
// WeightedTree
// ---------------------------------------------------------------------------

WeightedTree WeightedTree::build(int vertex_count, std::span<const EdgeSpec> edges) {
    if (vertex_count < 2)
        throw PreconditionError("WeightedTree: need at least two vertices (one edge)");
    if (static_cast<int>(edges.size()) != vertex_count - 1)
        throw PreconditionError("WeightedTree: a tree on n vertices has exactly n-1 edges");
    WeightedTree t;
    t.vc_ = vertex_count;
    t.adj_.assign(static_cast<std::size_t>(vertex_count), {});
    for (std::size_t e = 0; e < edges.size(); ++e) {
        int u = edges[e].u, v = edges[e].v;
        const double len = edges[e].length;
        if (u < 0 || u >= vertex_count || v < 0 || v >= vertex_count || u == v)
            throw PreconditionError("WeightedTree: bad edge endpoints");
        if (!(len > 0.0) || !std::isfinite(len))
            throw PreconditionError("WeightedTree: edge lengths must be positive and finite");
        if (u > v) std::swap(u, v);
        t.edges_.push_back(Edge{u, v, len});
        t.adj_[static_cast<std::size_t>(u)].push_back({v, static_cast<int>(e)});
        t.adj_[static_cast<std::size_t>(v)].push_back({u, static_cast<int>(e)});
    }
    // connectivity (acyclicity then follows from the edge count)
    std::vector<char> seen(static_cast<std::size_t>(vertex_count), 0);
    std::deque<int> queue{0};
    seen[0] = 1;
    int reached = 1;
    while (!queue.empty()) {
        const int v = queue.front();
        queue.pop_front();
        for (auto [w, e] : t.adj_[static_cast<std::size_t>(v)])
            if (!seen[static_cast<std::size_t>(w)]) {
                seen[static_cast<std::size_t>(w)] = 1;
                ++reached;
                queue.push_back(w);
            }
    }
    if (reached != vertex_count) throw PreconditionError("WeightedTree: edge list is not connected");

    t.vdist_.assign(static_cast<std::size_t>(vertex_count) * vertex_count, 0.0);
    for (int s = 0; s < vertex_count; ++s) {
        std::vector<char> vis(static_cast<std::size_t>(vertex_count), 0);
        std::deque<int> q{s};
        vis[static_cast<std::size_t>(s)] = 1;
        while (!q.empty()) {
            const int v = q.front();
            q.pop_front();
            for (auto [w, e] : t.adj_[static_cast<std::size_t>(v)]) {
                if (vis[static_cast<std::size_t>(w)]) continue;
                vis[static_cast<std::size_t>(w)] = 1;
                t.vdist_[static_cast<std::size_t>(s) * vertex_count + w] =
                    t.vdist_[static_cast<std::size_t>(s) * vertex_count + v] + t.edges_[static_cast<std::size_t>(e)].length;
                q.push_back(w);
            }
        }
    }
    t.lowest_edge_.assign(static_cast<std::size_t>(vertex_count), -1);
    for (int v = 0; v < vertex_count; ++v) {
        int best = std::numeric_limits<int>::max();
        for (auto [w, e] : t.adj_[static_cast<std::size_t>(v)]) best = std::min(best, e);
        t.lowest_edge_[static_cast<std::size_t>(v)] = best;
    }
    return t;
}

std::vector<int> WeightedTree::vertex_path(int u, int v) const {
    std::vector<int> parent(static_cast<std::size_t>(vc_), -2);
    parent[static_cast<std::size_t>(u)] = -1;
    std::deque<int> q{u};
    while (!q.empty()) {
        const int a = q.front();
        q.pop_front();
        if (a == v) break;
        for (auto [w, e] : adj_[static_cast<std::size_t>(a)])
            if (parent[static_cast<std::size_t>(w)] == -2) {
                parent[static_cast<std::size_t>(w)] = a;
                q.push_back(w);
            }
    }
    std::vector<int> path;
    for (int a = v; a != -1; a = parent[static_cast<std::size_t>(a)]) path.push_back(a);
    std::reverse(path.begin(), path.end());
    return path;
}

// ---------------------------------------------------------------------------
// TreePoint
// ---------------------------------------------------------------------------

TreePoint canonicalize(const WeightedTree& tree, TreePoint p) {
    if (p.edge < 0 || p.edge >= tree.edge_count())
        throw PreconditionError("TreePoint: edge id out of range");
    const auto& e = tree.edge(p.edge);
    if (!(p.offset >= 0.0) || !(p.offset <= e.length) || !std::isfinite(p.offset))
        throw PreconditionError("TreePoint: offset outside [0, edge length]");
    int vertex = -1;
    if (p.offset == 0.0)
        vertex = e.u;
    else if (p.offset == e.length)
        vertex = e.v;
    else
        return p;
    const int le = tree.lowest_incident_edge(vertex);
    const auto& canon = tree.edge(le);
    return TreePoint{le, canon.u == vertex ? 0.0 : canon.length};
}

TreePoint vertex_point(const WeightedTree& tree, int v) {
    if (v < 0 || v >= tree.vertex_count())
        throw PreconditionError("vertex_point: vertex id out of range");
    const int le = tree.lowest_incident_edge(v);
    const auto& e = tree.edge(le);
    return TreePoint{le, e.u == v ? 0.0 : e.length};
}

bool same_point(const WeightedTree& tree, TreePoint a, TreePoint b) {
    const TreePoint ca = canonicalize(tree, a);
    const TreePoint cb = canonicalize(tree, b);
    return ca.edge == cb.edge && ca.offset == cb.offset;
}

bool TreeGeometry::valid_point(const Point& p) const {
    if (tree == nullptr) return false;
    if (p.edge < 0 || p.edge >= tree->edge_count()) return false;
    return p.offset >= 0.0 && p.offset <= tree->edge(p.edge).length && std::isfinite(p.offset);
}

double point_vertex_distance(const WeightedTree& tree, TreePoint p, int v) {
    const TreePoint c = canonicalize(tree, p);
    const auto& e = tree.edge(c.edge);
    return std::min(c.offset + tree.vertex_distance(e.u, v),
                    (e.length - c.offset) + tree.vertex_distance(e.v, v));
}

double tree_distance(const WeightedTree& tree, TreePoint p, TreePoint q) {
    const TreePoint a = canonicalize(tree, p);
    const TreePoint b = canonicalize(tree, q);
    if (a.edge == b.edge) return std::fabs(a.offset - b.offset);
    const auto& ea = tree.edge(a.edge);
    const auto& eb = tree.edge(b.edge);
    const double au = a.offset, av = ea.length - a.offset;
    const double bu = b.offset, bv = eb.length - b.offset;
    double best = au + tree.vertex_distance(ea.u, eb.u) + bu;
    best = std::min(best, au + tree.vertex_distance(ea.u, eb.v) + bv);
    best = std::min(best, av + tree.vertex_distance(ea.v, eb.u) + bu);
    best = std::min(best, av + tree.vertex_distance(ea.v, eb.v) + bv);
    return best;
}

TreePoint point_along(const WeightedTree& tree, TreePoint from, TreePoint to, double s) {
    const TreePoint a = canonicalize(tree, from);
    const TreePoint b = canonicalize(tree, to);
    const double total = tree_distance(tree, a, b);
    if (!(s >= 0.0)) throw PreconditionError("point_along: s must be nonnegative");
    if (s >= total) return b;
    if (s == 0.0) return a;
    const auto& ea = tree.edge(a.edge);
    if (a.edge == b.edge) {
        const double t = b.offset >= a.offset ? a.offset + s : a.offset - s;
        return canonicalize(tree, TreePoint{a.edge, std::clamp(t, 0.0, ea.length)});
    }
    // pick the exit/entry endpoints realizing the geodesic (lowest combo on ties)
    const auto& eb = tree.edge(b.edge);
    const int acand[2] = {ea.u, ea.v};
    const int bcand[2] = {eb.u, eb.v};
    int best_w = ea.u, best_wb = eb.u;
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            const double aoff = (i == 0) ? a.offset : ea.length - a.offset;
            const double boff = (j == 0) ? b.offset : eb.length - b.offset;
            const double d = aoff + tree.vertex_distance(acand[i], bcand[j]) + boff;
            if (d < best) {
                best = d;
                best_w = acand[i];
                best_wb = bcand[j];
            }
        }
    const double d1 = best_w == ea.u ? a.offset : ea.length - a.offset;
    if (s <= d1) {
        const double t = best_w == ea.u ? a.offset - s : a.offset + s;
        return canonicalize(tree, TreePoint{a.edge, std::clamp(t, 0.0, ea.length)});
    }
    double rem = s - d1;
    const std::vector<int> path = tree.vertex_path(best_w, best_wb);
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        int eid = -1;
        double len = 0.0;
        // adjacency lookup for the path edge
        for (int e = 0; e < tree.edge_count(); ++e) {
            const auto& ed = tree.edge(e);
            if ((ed.u == path[i] && ed.v == path[i + 1]) || (ed.v == path[i] && ed.u == path[i + 1])) {
                eid = e;
                len = ed.length;
                break;
            }
        }
        if (rem <= len) {
            const double t = tree.edge(eid).u == path[i] ? rem : len - rem;
            return canonicalize(tree, TreePoint{eid, std::clamp(t, 0.0, len)});
        }
        rem -= len;
    }
    const double t = eb.u == best_wb ? rem : eb.length - rem;
    return canonicalize(tree, TreePoint{b.edge, std::clamp(t, 0.0, eb.length)});
}

// ---------------------------------------------------------------------------
// Ball intersections: exact piecewise-linear minimization
// ---------------------------------------------------------------------------

namespace {

struct Piece {
    double t0, t1;   // sub-interval of [0, edge length]
    double alpha;    // value(t) = alpha + slope * t
    int slope;       // -1 or +1
};

// distance-to-center restricted to one edge, as at most two linear pieces
void pieces_for_center(const WeightedTree& tree, int e, const TreePoint& c,
                       std::vector<Piece>& out) {
    const auto& ed = tree.edge(e);
    const double len = ed.length;
    if (c.edge == e) {
        if (c.offset > 0.0) out.push_back(Piece{0.0, c.offset, c.offset, -1});
        if (c.offset < len) out.push_back(Piece{c.offset, len, -c.offset, +1});
        return;
    }
    const double a = point_vertex_distance(tree, c, ed.u);
    const double b = point_vertex_distance(tree, c, ed.v);
    const double tstar = 0.5 * (len + b - a);
    if (tstar <= 0.0) {
        out.push_back(Piece{0.0, len, b + len, -1});
    } else if (tstar >= len) {
        out.push_back(Piece{0.0, len, a, +1});
    } else {
        out.push_back(Piece{0.0, tstar, a, +1});
        out.push_back(Piece{tstar, len, b + len, -1});
    }
}

double tree_scale(const WeightedTree& tree, std::span<const TreeBall> balls) {
    double s = 1.0;
    for (int v = 0; v < tree.vertex_count(); ++v)
        s = std::max(s, tree.vertex_distance(0, v));
    for (const auto& b : balls) s = std::max(s, b.radius);
    return s;
}

struct BestPoint {
    double score = std::numeric_limits<double>::infinity();
    TreePoint point{0, 0.0};
    bool set = false;

    void consider(double value, const TreePoint& canon) {
        if (!set || value < score ||
            (value == score &&
             (canon.edge < point.edge || (canon.edge == point.edge && canon.offset < point.offset)))) {
            score = value;
            point = canon;
            set = true;
        }
    }
};

void worst_pair(const WeightedTree& tree, std::span<const TreeBall> balls, int& wa, int& wb) {
    double worst = -std::numeric_limits<double>::infinity();
    wa = wb = -1;
    for (std::size_t i = 0; i < balls.size(); ++i)
        for (std::size_t j = i + 1; j < balls.size(); ++j) {
            const double ex = tree_distance(tree, balls[i].center, balls[j].center) -
                              balls[i].radius - balls[j].radius;
            if (ex > worst) {
                worst = ex;
                wa = static_cast<int>(i);
                wb = static_cast<int>(j);
            }
        }
}

std::vector<TreeBall> canonical_balls(const WeightedTree& tree, std::span<const TreeBall> balls,
                                      const char* who) {
    if (balls.empty()) throw PreconditionError(std::string(who) + ": empty ball list");
    std::vector<TreeBall> canon(balls.size());
    for (std::size_t i = 0; i < balls.size(); ++i) {
        canon[i].center = canonicalize(tree, balls[i].center);
        canon[i].radius = balls[i].radius;
        if (!(canon[i].radius >= 0.0) || !std::isfinite(canon[i].radius))
            throw PreconditionError(std::string(who) + ": bad radius");
    }
    return canon;
}

// Exact minimizer of h(p) = max_j (d(p, c_j) - r_j): every edge restriction of
// h is a max of <= 2-piece linear functions with slopes +-1, so the minimum is
// attained at an endpoint, a kink, or a crossing of two opposite-slope pieces.
TreeIntersection minimize_h(const WeightedTree& tree, std::span<const TreeBall> canon) {
    auto h_at = [&](const TreePoint& p) {
        double h = -std::numeric_limits<double>::infinity();
        for (const auto& b : canon) h = std::max(h, tree_distance(tree, p, b.center) - b.radius);
        return h;
    };

    BestPoint best;
    std::vector<Piece> pieces;
    std::vector<std::size_t> owner;  // ball index per piece
    std::vector<double> cand;
    for (int e = 0; e < tree.edge_count(); ++e) {
        const double len = tree.edge(e).length;
        pieces.clear();
        owner.clear();
        for (std::size_t j = 0; j < canon.size(); ++j) {
            const std::size_t before = pieces.size();
            pieces_for_center(tree, e, canon[j].center, pieces);
            for (std::size_t p = before; p < pieces.size(); ++p) owner.push_back(j);
        }
        cand.clear();
        cand.push_back(0.0);
        cand.push_back(len);
        for (const auto& p : pieces) {
            cand.push_back(p.t0);
            cand.push_back(p.t1);
        }
        for (std::size_t p = 0; p < pieces.size(); ++p)
            for (std::size_t q = p + 1; q < pieces.size(); ++q) {
                if (owner[p] == owner[q] || pieces[p].slope == pieces[q].slope) continue;
                const double ap = pieces[p].alpha - canon[owner[p]].radius;
                const double aq = pieces[q].alpha - canon[owner[q]].radius;
                const double t = (aq - ap) / static_cast<double>(pieces[p].slope - pieces[q].slope);
                if (t >= 0.0 && t <= len) cand.push_back(t);
            }
        for (double t : cand) {
            const TreePoint cp = canonicalize(tree, TreePoint{e, std::clamp(t, 0.0, len)});
            best.consider(h_at(cp), cp);
        }
    }

    TreeIntersection out;
    out.min_h = best.score;
    out.witness = best.point;
    out.feasible = best.score <= 0.0;
    return out;
}

}  // namespace

TreeIntersection tree_ball_intersection(const WeightedTree& tree, std::span<const TreeBall> balls) {
    const std::vector<TreeBall> canon = canonical_balls(tree, balls, "tree_ball_intersection");
    TreeIntersection out = minimize_h(tree, canon);

    bool pairwise_ok = true;
    for (std::size_t i = 0; i < canon.size() && pairwise_ok; ++i)
        for (std::size_t j = i + 1; j < canon.size() && pairwise_ok; ++j)
            if (tree_distance(tree, canon[i].center, canon[j].center) >
                canon[i].radius + canon[j].radius)
                pairwise_ok = false;
    if (pairwise_ok != out.feasible)
        throw SolverError("tree_ball_intersection: minimizer and pairwise radius test disagree");
    return out;
}

TreeNearestResult tree_constrained_nearest(const WeightedTree& tree,
                                           std::span<const TreeBall> balls, TreePoint anchor) {
    const std::vector<TreeBall> canon = canonical_balls(tree, balls, "tree_constrained_nearest");
    const TreePoint canchor = canonicalize(tree, anchor);
    const double slack = 64.0 * DBL_EPSILON * tree_scale(tree, canon);

    auto h_at = [&](const TreePoint& p) {
        double h = -std::numeric_limits<double>::infinity();
        for (const auto& b : canon) h = std::max(h, tree_distance(tree, p, b.center) - b.radius);
        return h;
    };

    BestPoint best;
    std::vector<Piece> pieces;
    std::vector<std::size_t> owner;
    std::vector<Piece> anchor_pieces;
    std::vector<double> cand;
    for (int e = 0; e < tree.edge_count(); ++e) {
        const double len = tree.edge(e).length;
        pieces.clear();
        owner.clear();
        for (std::size_t j = 0; j < canon.size(); ++j) {
            const std::size_t before = pieces.size();
            pieces_for_center(tree, e, canon[j].center, pieces);
            for (std::size_t p = before; p < pieces.size(); ++p) owner.push_back(j);
        }
        anchor_pieces.clear();
        pieces_for_center(tree, e, canchor, anchor_pieces);

        cand.clear();
        cand.push_back(0.0);
        cand.push_back(len);
        for (const auto& p : anchor_pieces) {
            cand.push_back(p.t0);
            cand.push_back(p.t1);
        }
        for (std::size_t p = 0; p < pieces.size(); ++p) {
            cand.push_back(pieces[p].t0);
            cand.push_back(pieces[p].t1);
            // feasibility boundary: piece value equals the radius (and radius + guard)
            const double r = canon[owner[p]].radius;
            for (const double level : {r, r + slack}) {
                const double t = (level - pieces[p].alpha) / static_cast<double>(pieces[p].slope);
                if (t >= 0.0 && t <= len) cand.push_back(t);
            }
        }
        for (double t : cand) {
            const TreePoint cp = canonicalize(tree, TreePoint{e, std::clamp(t, 0.0, len)});
            if (h_at(cp) > slack) continue;
            best.consider(tree_distance(tree, cp, canchor), cp);
        }
    }

    TreeNearestResult out;
    out.feasible = best.set;
    if (best.set) {
        out.point = best.point;
        out.violation = std::max(0.0, h_at(best.point));
    } else {
        out.point = canchor;
        out.violation = std::numeric_limits<double>::infinity();
    }
    return out;
}

// ---------------------------------------------------------------------------
// Extensions
// ---------------------------------------------------------------------------

PartialMap<TreeGeometry> TreeInstance::partial_map() const {
    return PartialMap<TreeGeometry>{source, domain, values, geometry()};
}

void TreeInstance::validate() const {
    partial_map().validate();
}

namespace {

std::vector<int> resolve_order_tree(int n, std::span<const int> domain, std::span<const int> order) {
    std::vector<char> in_domain(static_cast<std::size_t>(n), 0);
    for (int a : domain) in_domain[static_cast<std::size_t>(a)] = 1;
    std::vector<int> result;
    if (order.empty()) {
        for (int i = 0; i < n; ++i)
            if (!in_domain[static_cast<std::size_t>(i)]) result.push_back(i);
        return result;
    }
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    for (int x : order) {
        if (x < 0 || x >= n || in_domain[static_cast<std::size_t>(x)] || seen[static_cast<std::size_t>(x)])
            throw PreconditionError("order must be a permutation of the complement of A");
        seen[static_cast<std::size_t>(x)] = 1;
        result.push_back(x);
    }
    for (int i = 0; i < n; ++i)
        if (!in_domain[static_cast<std::size_t>(i)] && !seen[static_cast<std::size_t>(i)])
            throw PreconditionError("order must cover all of X \\ A");
    return result;
}

}  // namespace

TreeExtension lipschitz_extend_tree(const TreeInstance& inst, double L, std::span<const int> order) {
    inst.validate();
    if (!(L >= 0.0) || !std::isfinite(L)) throw PreconditionError("lipschitz_extend_tree: bad L");
    const double lip_a = lip_constant(inst.partial_map());
    if (lip_a > L * (1.0 + 1e-9))
        throw PreconditionError("lipschitz_extend_tree: lip_constant(f, A) exceeds L");

    const int n = inst.source.size();
    std::vector<TreePoint> values(static_cast<std::size_t>(n));
    std::vector<int> assigned;
    for (std::size_t i = 0; i < inst.domain.size(); ++i) {
        values[static_cast<std::size_t>(inst.domain[i])] = inst.values[i];  // as given
        assigned.push_back(inst.domain[i]);
    }

    const double accept = 64.0 * DBL_EPSILON *
                          tree_scale(inst.target, std::span<const TreeBall>{});
    double viol = 0.0;
    std::vector<TreeBall> balls;
    for (int x : resolve_order_tree(n, inst.domain, order)) {
        balls.clear();
        for (int p : assigned)
            balls.push_back(TreeBall{values[static_cast<std::size_t>(p)], L * inst.source.distance(p, x)});
        // exact minimizer of max_j (d - L d_X); a 1-ulp positive minimum from an
        // exactly-active constraint is absorbed, anything larger is reported
        const std::vector<TreeBall> canon = canonical_balls(inst.target, balls,
                                                            "lipschitz_extend_tree");
        const TreeIntersection ix = minimize_h(inst.target, canon);
        if (ix.min_h > accept) {
            int wa, wb;
            worst_pair(inst.target, balls, wa, wb);
            std::ostringstream os;
            os << "lipschitz_extend_tree: internal error, empty ball intersection at source "
               << "index " << x << " (constraints " << wa << "," << wb << ")";
            throw InfeasibleError(os.str(), x, wa, wb);
        }
        viol = std::max(viol, std::max(0.0, ix.min_h));
        values[static_cast<std::size_t>(x)] = ix.witness;
        assigned.push_back(x);
    }

    TreeExtension out;
    out.lip_achieved = lip_constant_full<TreeGeometry>(inst.source, values, inst.geometry());
    out.values = std::move(values);
    out.max_constraint_violation = viol;
    return out;
}

TreeExtension transport_extension_tree(const TreeInstance& f, const TreeExtension& f_ext,
                                       const std::vector<TreePoint>& g_values,
                                       std::span<const int> order) {
    f.validate();
    if (static_cast<int>(f_ext.values.size()) != f.source.size())
        throw PreconditionError("transport_extension_tree: full map must cover the source");
    const auto geom = f.geometry();
    for (const auto& v : f_ext.values)
        if (!geom.valid_point(v))
            throw PreconditionError("transport_extension_tree: invalid f_ext value");
    for (std::size_t i = 0; i < f.domain.size(); ++i)
        if (tree_distance(f.target, f_ext.values[static_cast<std::size_t>(f.domain[i])], f.values[i]) >
            1e-12)
            throw PreconditionError("transport_extension_tree: f_ext does not extend f");
    if (lip_constant_full<TreeGeometry>(f.source, f_ext.values, geom) > 1.0 + 1e-9)
        throw PreconditionError("transport_extension_tree: f_ext must be nonexpansive");
    if (g_values.size() != f.domain.size())
        throw PreconditionError("transport_extension_tree: g must be defined exactly on A");
    TreeInstance g_inst = f;
    g_inst.values = g_values;
    if (lip_constant(g_inst.partial_map()) > 1.0 + 1e-9)
        throw PreconditionError("transport_extension_tree: Lip(g, A) must be at most 1");

    double r = 0.0;
    for (std::size_t i = 0; i < f.domain.size(); ++i)
        r = std::max(r, tree_distance(f.target, f.values[i], g_values[i]));

    const int n = f.source.size();
    std::vector<TreePoint> values(static_cast<std::size_t>(n));
    std::vector<int> assigned;
    for (std::size_t i = 0; i < f.domain.size(); ++i) {
        values[static_cast<std::size_t>(f.domain[i])] = g_values[i];  // as given
        assigned.push_back(f.domain[i]);
    }

    double viol = 0.0;
    std::vector<TreeBall> balls;
    for (int x : resolve_order_tree(n, f.domain, order)) {
        balls.clear();
        for (int p : assigned)
            balls.push_back(TreeBall{values[static_cast<std::size_t>(p)], f.source.distance(p, x)});
        const TreePoint anchor = f_ext.values[static_cast<std::size_t>(x)];
        balls.push_back(TreeBall{anchor, r});
        TreeNearestResult nr = tree_constrained_nearest(f.target, balls, anchor);
        if (!nr.feasible) {
            int wa, wb;
            worst_pair(f.target, balls, wa, wb);
            std::ostringstream os;
            os << "transport_extension_tree: empty feasible set at source index " << x
               << " (constraints " << wa << "," << wb << ")";
            throw InfeasibleError(os.str(), x, wa, wb);
        }
        viol = std::max(viol, nr.violation);
        values[static_cast<std::size_t>(x)] = nr.point;
        assigned.push_back(x);
    }

    TreeExtension out;
    out.lip_achieved = lip_constant_full<TreeGeometry>(f.source, values, geom);
    out.values = std::move(values);
    out.max_constraint_violation = viol;
    return out;
}

}  // namespace lipext
