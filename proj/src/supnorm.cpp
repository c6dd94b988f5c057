#include "lipext/supnorm.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <sstream>

namespace lipext {

PartialMap<SupNormGeometry> SupNormInstance::partial_map() const {
    return PartialMap<SupNormGeometry>{source, domain, values, geometry()};
}

void SupNormInstance::validate() const {
    if (target_dim < 1) throw PreconditionError("SupNormInstance: target_dim must be >= 1");
    partial_map().validate();
}

bool Box::contains(std::span<const double> p) const {
    if (is_empty) return false;
    for (std::size_t i = 0; i < lower.size(); ++i)
        if (p[i] < lower[i] || p[i] > upper[i]) return false;
    return true;
}

VecD Box::clamp(std::span<const double> p) const {
    if (is_empty) throw PreconditionError("Box::clamp on an empty box");
    VecD out(p.begin(), p.end());
    for (std::size_t i = 0; i < lower.size(); ++i)
        out[i] = std::min(std::max(out[i], lower[i]), upper[i]);
    return out;
}

double Box::circumradius() const {
    if (is_empty) return 0.0;
    double side = 0.0;
    for (std::size_t i = 0; i < lower.size(); ++i) side = std::max(side, upper[i] - lower[i]);
    return 0.5 * side;
}

CoordinateEnvelope envelopes(const SupNormInstance& f, double L, int x) {
    f.validate();
    if (x < 0 || x >= f.source.size()) throw PreconditionError("envelopes: x out of range");
    if (!(L >= 0.0) || !std::isfinite(L)) throw PreconditionError("envelopes: bad L");
    const double lip = lip_constant(f.partial_map());
    if (lip > L * (1.0 + 1e-9))
        throw PreconditionError("envelopes: lip_constant(f, A) exceeds L");
    const int m = f.target_dim;
    CoordinateEnvelope env;
    env.lower.assign(static_cast<std::size_t>(m), -std::numeric_limits<double>::infinity());
    env.upper.assign(static_cast<std::size_t>(m), std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < f.domain.size(); ++i) {
        const double d = f.source.distance(f.domain[i], x);
        for (int c = 0; c < m; ++c) {
            env.lower[static_cast<std::size_t>(c)] =
                std::max(env.lower[static_cast<std::size_t>(c)], f.values[i][static_cast<std::size_t>(c)] - L * d);
            env.upper[static_cast<std::size_t>(c)] =
                std::min(env.upper[static_cast<std::size_t>(c)], f.values[i][static_cast<std::size_t>(c)] + L * d);
        }
    }
    return env;
}

SupNormExtension midpoint_operator(const SupNormInstance& f, double L) {
    f.validate();
    if (!(L >= 0.0) || !std::isfinite(L)) throw PreconditionError("midpoint_operator: bad L");
    const double lip = lip_constant(f.partial_map());
    if (lip > L * (1.0 + 1e-9))
        throw PreconditionError("midpoint_operator: lip_constant(f, A) exceeds L");

    const int n = f.source.size();
    const int m = f.target_dim;
    std::vector<VecD> values(static_cast<std::size_t>(n));
    std::vector<char> in_a(static_cast<std::size_t>(n), 0);
    for (std::size_t i = 0; i < f.domain.size(); ++i) {
        values[static_cast<std::size_t>(f.domain[i])] = f.values[i];  // bitwise
        in_a[static_cast<std::size_t>(f.domain[i])] = 1;
    }
    for (int x = 0; x < n; ++x) {
        if (in_a[static_cast<std::size_t>(x)]) continue;
        VecD v(static_cast<std::size_t>(m));
        for (int c = 0; c < m; ++c) {
            double lo = -std::numeric_limits<double>::infinity();
            double hi = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < f.domain.size(); ++i) {
                const double d = L * f.source.distance(f.domain[i], x);
                lo = std::max(lo, f.values[i][static_cast<std::size_t>(c)] - d);
                hi = std::min(hi, f.values[i][static_cast<std::size_t>(c)] + d);
            }
            v[static_cast<std::size_t>(c)] = 0.5 * (lo + hi);
        }
        values[static_cast<std::size_t>(x)] = std::move(v);
    }
    SupNormExtension out;
    out.lip_achieved = lip_constant_full<SupNormGeometry>(f.source, values, f.geometry());
    out.values = std::move(values);
    out.max_constraint_violation = 0.0;
    return out;
}

Box admissible_hull(std::span<const VecD> values) {
    if (values.empty()) throw PreconditionError("admissible_hull: empty set");
    const std::size_t m = values[0].size();
    Box box;
    box.lower = values[0];
    box.upper = values[0];
    for (const auto& v : values) {
        if (v.size() != m) throw PreconditionError("admissible_hull: dimension mismatch");
        for (std::size_t c = 0; c < m; ++c) {
            box.lower[c] = std::min(box.lower[c], v[c]);
            box.upper[c] = std::max(box.upper[c], v[c]);
        }
    }
    return box;
}

SupNormExtension clamped_operator(const SupNormInstance& f, double L) {
    SupNormExtension out = midpoint_operator(f, L);
    const Box hull = admissible_hull(f.values);
    std::vector<char> in_a(static_cast<std::size_t>(f.source.size()), 0);
    for (int a : f.domain) in_a[static_cast<std::size_t>(a)] = 1;
    for (int x = 0; x < f.source.size(); ++x) {
        if (in_a[static_cast<std::size_t>(x)]) continue;  // A-values already sit in their own hull
        out.values[static_cast<std::size_t>(x)] = hull.clamp(out.values[static_cast<std::size_t>(x)]);
    }
    out.lip_achieved = lip_constant_full<SupNormGeometry>(f.source, out.values, f.geometry());
    return out;
}

Box ball_intersection(std::span<const SupBall> balls) {
    if (balls.empty()) throw PreconditionError("ball_intersection: empty ball list");
    const std::size_t m = balls[0].center.size();
    for (const auto& b : balls) {
        if (b.center.size() != m || !all_finite(b.center))
            throw PreconditionError("ball_intersection: bad center");
        if (!(b.radius >= 0.0) || !std::isfinite(b.radius))
            throw PreconditionError("ball_intersection: bad radius");
    }
    Box box;
    box.lower.assign(m, -std::numeric_limits<double>::infinity());
    box.upper.assign(m, std::numeric_limits<double>::infinity());
    for (const auto& b : balls)
        for (std::size_t c = 0; c < m; ++c) {
            box.lower[c] = std::max(box.lower[c], b.center[c] - b.radius);
            box.upper[c] = std::min(box.upper[c], b.center[c] + b.radius);
        }
    bool empty = false;
    for (std::size_t c = 0; c < m; ++c)
        if (box.lower[c] > box.upper[c]) empty = true;

    // hyperconvexity cross-check: nonempty iff all pairwise radius tests pass
    bool pairwise_ok = true;
    for (std::size_t i = 0; i < balls.size() && pairwise_ok; ++i)
        for (std::size_t j = i + 1; j < balls.size() && pairwise_ok; ++j)
            if (supnorm_distance(balls[i].center, balls[j].center) >
                balls[i].radius + balls[j].radius)
                pairwise_ok = false;
    if (pairwise_ok == empty)
        throw SolverError("ball_intersection: interval test and pairwise radius test disagree");

    if (empty) {
        box.is_empty = true;
        box.lower.assign(m, 0.0);
        box.upper.assign(m, 0.0);
    }
    return box;
}

// ---------------------------------------------------------------------------
// Greedy constructions
// ---------------------------------------------------------------------------

namespace {

// Feasible-box accumulator with a 1-ulp guard per constraint: a real-arithmetic
// feasible point can fail the rounded interval test by one rounding when a
// constraint is exactly active, and the widening keeps such points inside.
struct BoxBuilder {
    VecD lower;
    VecD upper;
    // origin of the binding bound per coordinate, for infeasibility reports
    std::vector<int> lower_origin;
    std::vector<int> upper_origin;

    explicit BoxBuilder(std::size_t m)
        : lower(m, -std::numeric_limits<double>::infinity()),
          upper(m, std::numeric_limits<double>::infinity()),
          lower_origin(m, -1),
          upper_origin(m, -1) {}

    void add(std::span<const double> center, double radius, int origin) {
        double sc = std::max(1.0, radius);
        for (double c : center) sc = std::max(sc, std::fabs(c));
        const double slack = 32.0 * DBL_EPSILON * sc;
        for (std::size_t c = 0; c < lower.size(); ++c) {
            const double lo = center[c] - radius - slack;
            const double hi = center[c] + radius + slack;
            if (lo > lower[c]) {
                lower[c] = lo;
                lower_origin[c] = origin;
            }
            if (hi < upper[c]) {
                upper[c] = hi;
                upper_origin[c] = origin;
            }
        }
    }

    void add_box(const Box& b, int origin) {
        for (std::size_t c = 0; c < lower.size(); ++c) {
            const double sc = std::max({1.0, std::fabs(b.lower[c]), std::fabs(b.upper[c])});
            const double slack = 32.0 * DBL_EPSILON * sc;
            if (b.lower[c] - slack > lower[c]) {
                lower[c] = b.lower[c] - slack;
                lower_origin[c] = origin;
            }
            if (b.upper[c] + slack < upper[c]) {
                upper[c] = b.upper[c] + slack;
                upper_origin[c] = origin;
            }
        }
    }

    // empty beyond the guard -> (coordinate, lower origin, upper origin)
    bool find_empty(std::size_t& coord, int& a, int& b) const {
        for (std::size_t c = 0; c < lower.size(); ++c)
            if (lower[c] > upper[c]) {
                coord = c;
                a = lower_origin[c];
                b = upper_origin[c];
                return true;
            }
        return false;
    }

    VecD clamp(std::span<const double> p) const {
        VecD out(p.begin(), p.end());
        for (std::size_t c = 0; c < lower.size(); ++c)
            out[c] = std::min(std::max(out[c], lower[c]), upper[c]);
        return out;
    }
};

void check_full_map(const SupNormInstance& f, std::span<const VecD> full, const char* who) {
    if (static_cast<int>(full.size()) != f.source.size())
        throw PreconditionError(std::string(who) + ": full map must cover the source");
    for (const auto& v : full)
        if (static_cast<int>(v.size()) != f.target_dim || !all_finite(v))
            throw PreconditionError(std::string(who) + ": invalid full-map value");
}

void check_extends_sup(const SupNormInstance& f, std::span<const VecD> full, const char* who) {
    for (std::size_t i = 0; i < f.domain.size(); ++i) {
        const double tol = 1e-12 * std::max(1.0, supnorm_distance(f.values[i], VecD(f.values[i].size(), 0.0)));
        if (supnorm_distance(full[static_cast<std::size_t>(f.domain[i])], f.values[i]) > tol)
            throw PreconditionError(std::string(who) + ": map does not extend the instance values");
    }
}

std::vector<int> resolve_order_sup(int n, std::span<const int> domain, std::span<const int> order) {
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

double positive_excess(std::span<const double> a, std::span<const double> b, double radius) {
    return std::max(0.0, supnorm_distance(a, b) - radius);
}

}  // namespace

SupNormExtension transport_extension(const SupNormInstance& f, const SupNormExtension& f_ext,
                                     const std::vector<VecD>& g_values, std::span<const int> order,
                                     const TransportOptions& topts) {
    f.validate();
    check_full_map(f, f_ext.values, "transport_extension");
    check_extends_sup(f, f_ext.values, "transport_extension");
    if (g_values.size() != f.domain.size())
        throw PreconditionError("transport_extension: g must be defined exactly on A");
    const auto geom = f.geometry();
    if (lip_constant_full<SupNormGeometry>(f.source, f_ext.values, geom) > 1.0 + 1e-9)
        throw PreconditionError("transport_extension: f_ext must be nonexpansive");
    SupNormInstance g_inst = f;
    g_inst.values = g_values;
    if (lip_constant(g_inst.partial_map()) > 1.0 + 1e-9)
        throw PreconditionError("transport_extension: Lip(g, A) must be at most 1");

    double r = 0.0;
    for (std::size_t i = 0; i < f.domain.size(); ++i)
        r = std::max(r, supnorm_distance(f.values[i], g_values[i]));

    const int n = f.source.size();
    const std::size_t m = static_cast<std::size_t>(f.target_dim);
    std::vector<VecD> values(static_cast<std::size_t>(n));
    std::vector<int> assigned;
    for (std::size_t i = 0; i < f.domain.size(); ++i) {
        values[static_cast<std::size_t>(f.domain[i])] = g_values[i];  // bitwise
        assigned.push_back(f.domain[i]);
    }
    Box cov;
    if (topts.constrain_to_admissible_hull) cov = admissible_hull(g_values);

    double viol = 0.0;
    for (int x : resolve_order_sup(n, f.domain, order)) {
        BoxBuilder box(m);
        for (int p : assigned)
            box.add(values[static_cast<std::size_t>(p)], f.source.distance(p, x), p);
        if (topts.constrain_to_admissible_hull) box.add_box(cov, -2);
        const VecD& anchor = f_ext.values[static_cast<std::size_t>(x)];
        box.add(anchor, r, -3);
        std::size_t coord;
        int ca, cb;
        if (box.find_empty(coord, ca, cb)) {
            std::ostringstream os;
            os << "transport_extension: empty feasible box at source index " << x
               << " (coordinate " << coord << ", constraints " << ca << " and " << cb << ")";
            throw InfeasibleError(os.str(), x, ca, cb);
        }
        VecD pick = box.clamp(anchor);
        // enforce the anchor radius exactly; the widened box stays feasible
        for (std::size_t c = 0; c < m; ++c)
            pick[c] = std::min(std::max(pick[c], anchor[c] - r), anchor[c] + r);
        for (int p : assigned)
            viol = std::max(viol, positive_excess(pick, values[static_cast<std::size_t>(p)],
                                                  f.source.distance(p, x)));
        viol = std::max(viol, positive_excess(pick, anchor, r));
        values[static_cast<std::size_t>(x)] = std::move(pick);
        assigned.push_back(x);
    }

    SupNormExtension out;
    out.lip_achieved = lip_constant_full<SupNormGeometry>(f.source, values, geom);
    out.values = std::move(values);
    out.max_constraint_violation = viol;
    return out;
}

SupNormExtension external_intersection(const SupNormInstance& f,
                                        std::span<const FamilyMember> family,
                                        std::span<const int> order,
                                        const TransportOptions& topts) {
    f.validate();
    if (family.empty()) throw PreconditionError("external_intersection: empty family");
    const auto geom = f.geometry();
    for (std::size_t a = 0; a < family.size(); ++a) {
        check_full_map(f, family[a].map_values, "external_intersection");
        check_full_map(f, family[a].witness, "external_intersection");
        check_extends_sup(f, family[a].witness, "external_intersection");
        if (!(family[a].radius >= 0.0) || !std::isfinite(family[a].radius))
            throw PreconditionError("external_intersection: bad radius");
        if (lip_constant_full<SupNormGeometry>(f.source, family[a].map_values, geom) > 1.0 + 1e-9)
            throw PreconditionError("external_intersection: family maps must be nonexpansive");
        if (lip_constant_full<SupNormGeometry>(f.source, family[a].witness, geom) > 1.0 + 1e-9)
            throw PreconditionError("external_intersection: witnesses must be nonexpansive");
        double d = 0.0;
        for (int i = 0; i < f.source.size(); ++i)
            d = std::max(d, supnorm_distance(family[a].map_values[static_cast<std::size_t>(i)],
                                             family[a].witness[static_cast<std::size_t>(i)]));
        if (d > family[a].radius + 1e-9)
            throw PreconditionError(
                "external_intersection: witness does not certify dist(f_alpha, extensions) <= r_alpha");
    }
    for (std::size_t a = 0; a < family.size(); ++a)
        for (std::size_t b = a + 1; b < family.size(); ++b) {
            double d = 0.0;
            for (int i = 0; i < f.source.size(); ++i)
                d = std::max(d, supnorm_distance(family[a].map_values[static_cast<std::size_t>(i)],
                                                 family[b].map_values[static_cast<std::size_t>(i)]));
            if (d > family[a].radius + family[b].radius + 1e-9) {
                std::ostringstream os;
                os << "external_intersection: family pair (" << a << "," << b
                   << ") violates the radius-sum condition";
                throw PreconditionError(os.str());
            }
        }

    const int n = f.source.size();
    const std::size_t m = static_cast<std::size_t>(f.target_dim);
    std::vector<VecD> values(static_cast<std::size_t>(n));
    std::vector<int> assigned;
    for (std::size_t i = 0; i < f.domain.size(); ++i) {
        values[static_cast<std::size_t>(f.domain[i])] = f.values[i];
        assigned.push_back(f.domain[i]);
    }
    Box cov;
    if (topts.constrain_to_admissible_hull) cov = admissible_hull(f.values);

    double viol = 0.0;
    for (int x : resolve_order_sup(n, f.domain, order)) {
        BoxBuilder box(m);
        for (int p : assigned)
            box.add(values[static_cast<std::size_t>(p)], f.source.distance(p, x), p);
        for (std::size_t a = 0; a < family.size(); ++a)
            box.add(family[a].map_values[static_cast<std::size_t>(x)], family[a].radius,
                    -static_cast<int>(a) - 10);
        if (topts.constrain_to_admissible_hull) box.add_box(cov, -2);
        std::size_t coord;
        int ca, cb;
        if (box.find_empty(coord, ca, cb)) {
            std::ostringstream os;
            os << "external_intersection: empty feasible box at source index " << x
               << " (coordinate " << coord << ", constraints " << ca << " and " << cb
               << "; negative ids -10-k are family members)";
            throw InfeasibleError(os.str(), x, ca, cb);
        }
        VecD anchor(m, 0.0);
        for (const auto& member : family)
            for (std::size_t c = 0; c < m; ++c)
                anchor[c] += member.map_values[static_cast<std::size_t>(x)][c];
        for (std::size_t c = 0; c < m; ++c) anchor[c] /= static_cast<double>(family.size());
        VecD pick = box.clamp(anchor);
        for (int p : assigned)
            viol = std::max(viol, positive_excess(pick, values[static_cast<std::size_t>(p)],
                                                  f.source.distance(p, x)));
        for (const auto& member : family)
            viol = std::max(viol, positive_excess(pick, member.map_values[static_cast<std::size_t>(x)],
                                                  member.radius));
        values[static_cast<std::size_t>(x)] = std::move(pick);
        assigned.push_back(x);
    }

    SupNormExtension out;
    out.lip_achieved = lip_constant_full<SupNormGeometry>(f.source, values, geom);
    out.values = std::move(values);
    out.max_constraint_violation = viol;
    return out;
}

}  // namespace lipext
