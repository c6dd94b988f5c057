#include "lipext/euclid.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <limits>
#include <sstream>

namespace lipext {

// ---------------------------------------------------------------------------
// Instance plumbing
// ---------------------------------------------------------------------------

EuclideanInstance EuclideanInstance::from_points(std::vector<VecD> points, std::vector<int> domain,
                                                 std::vector<VecD> values) {
    EuclideanInstance inst;
    inst.source = metric_from_points(points);
    inst.source_points = std::move(points);
    inst.domain = std::move(domain);
    inst.values = std::move(values);
    inst.target_dim = inst.values.empty() ? 1 : static_cast<int>(inst.values[0].size());
    inst.validate();
    return inst;
}

PartialMap<EuclideanGeometry> EuclideanInstance::partial_map() const {
    return PartialMap<EuclideanGeometry>{source, domain, values, geometry()};
}

void EuclideanInstance::validate() const {
    if (target_dim < 1) throw PreconditionError("EuclideanInstance: target_dim must be >= 1");
    partial_map().validate();
    if (!source_points.empty() && static_cast<int>(source_points.size()) != source.size())
        throw PreconditionError("EuclideanInstance: source_points/table size mismatch");
}

// ---------------------------------------------------------------------------
// Small dense solve (partial pivoting), used by the Newton step and Wolfe.
// ---------------------------------------------------------------------------

namespace {

bool solve_dense(std::vector<double> a, std::vector<double> b, int n, std::vector<double>& out) {
    for (int col = 0; col < n; ++col) {
        int piv = col;
        double best = std::fabs(a[static_cast<std::size_t>(col) * n + col]);
        for (int r = col + 1; r < n; ++r) {
            const double cand = std::fabs(a[static_cast<std::size_t>(r) * n + col]);
            if (cand > best) {
                best = cand;
                piv = r;
            }
        }
        if (best < 1e-250) return false;
        if (piv != col) {
            for (int c = col; c < n; ++c)
                std::swap(a[static_cast<std::size_t>(piv) * n + c],
                          a[static_cast<std::size_t>(col) * n + c]);
            std::swap(b[static_cast<std::size_t>(piv)], b[static_cast<std::size_t>(col)]);
        }
        const double d = a[static_cast<std::size_t>(col) * n + col];
        for (int r = col + 1; r < n; ++r) {
            const double f = a[static_cast<std::size_t>(r) * n + col] / d;
            if (f == 0.0) continue;
            for (int c = col; c < n; ++c)
                a[static_cast<std::size_t>(r) * n + c] -= f * a[static_cast<std::size_t>(col) * n + c];
            b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(col)];
        }
    }
    out.assign(static_cast<std::size_t>(n), 0.0);
    for (int r = n - 1; r >= 0; --r) {
        double s = b[static_cast<std::size_t>(r)];
        for (int c = r + 1; c < n; ++c) s -= a[static_cast<std::size_t>(r) * n + c] * out[static_cast<std::size_t>(c)];
        out[static_cast<std::size_t>(r)] = s / a[static_cast<std::size_t>(r) * n + r];
    }
    return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// extend_point: minimax ball feasibility
// ---------------------------------------------------------------------------

namespace {

struct MinimaxProblem {
    std::span<const BallConstraint> balls;
    double L;
    int m;

    double value(const VecD& y) const {
        double v = -std::numeric_limits<double>::infinity();
        for (const auto& b : balls) v = std::max(v, euclidean_distance(y, b.center) - L * b.radius);
        return v;
    }
};

// Smoothed value/gradient/Hessian at temperature mu. Terms sitting exactly on
// a center kink contribute the zero subgradient.
struct SmoothEval {
    double value;
    VecD grad;
    std::vector<double> hess;  // m*m row-major
};

SmoothEval eval_smooth(const MinimaxProblem& p, const VecD& y, double mu, double dist_floor) {
    const int m = p.m;
    const std::size_t k = p.balls.size();
    std::vector<double> v(k), n(k);
    std::vector<VecD> u(k, VecD(static_cast<std::size_t>(m), 0.0));
    double vmax = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < k; ++i) {
        n[i] = euclidean_distance(y, p.balls[i].center);
        v[i] = n[i] - p.L * p.balls[i].radius;
        vmax = std::max(vmax, v[i]);
        if (n[i] > dist_floor)
            for (int c = 0; c < m; ++c) u[i][static_cast<std::size_t>(c)] = (y[static_cast<std::size_t>(c)] - p.balls[i].center[static_cast<std::size_t>(c)]) / n[i];
    }
    double wsum = 0.0;
    std::vector<double> w(k);
    for (std::size_t i = 0; i < k; ++i) {
        w[i] = std::exp((v[i] - vmax) / mu);
        wsum += w[i];
    }
    SmoothEval out;
    out.value = mu * std::log(wsum) + vmax;
    out.grad.assign(static_cast<std::size_t>(m), 0.0);
    out.hess.assign(static_cast<std::size_t>(m) * m, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        const double wi = w[i] / wsum;
        for (int c = 0; c < m; ++c) out.grad[static_cast<std::size_t>(c)] += wi * u[i][static_cast<std::size_t>(c)];
        if (n[i] > dist_floor) {
            const double inv = wi / n[i];
            for (int r = 0; r < m; ++r)
                for (int c = 0; c < m; ++c)
                    out.hess[static_cast<std::size_t>(r) * m + c] +=
                        inv * ((r == c ? 1.0 : 0.0) - u[i][static_cast<std::size_t>(r)] * u[i][static_cast<std::size_t>(c)]);
        }
        for (int r = 0; r < m; ++r)
            for (int c = 0; c < m; ++c)
                out.hess[static_cast<std::size_t>(r) * m + c] +=
                    (wi / mu) * u[i][static_cast<std::size_t>(r)] * u[i][static_cast<std::size_t>(c)];
    }
    for (int r = 0; r < m; ++r)
        for (int c = 0; c < m; ++c)
            out.hess[static_cast<std::size_t>(r) * m + c] -=
                (1.0 / mu) * out.grad[static_cast<std::size_t>(r)] * out.grad[static_cast<std::size_t>(c)];
    return out;
}

}  // namespace

MinimaxPoint extend_point(std::span<const BallConstraint> constraints, double L,
                          const MinimaxOptions& opts) {
    if (constraints.empty()) throw PreconditionError("extend_point: empty constraint list");
    if (!(L >= 0.0) || !std::isfinite(L)) throw PreconditionError("extend_point: L must be >= 0");
    if (!(opts.tol > 0.0)) throw PreconditionError("extend_point: tol must be positive");
    const int m = static_cast<int>(constraints[0].center.size());
    for (const auto& b : constraints) {
        if (static_cast<int>(b.center.size()) != m || !all_finite(b.center))
            throw PreconditionError("extend_point: inconsistent or non-finite centers");
        if (!(b.radius >= 0.0) || !std::isfinite(b.radius))
            throw PreconditionError("extend_point: radii must be nonnegative");
    }
    MinimaxProblem prob{constraints, L, m};

    // Exact zero radius pins the value: any y has V(y) >= |y - c|, and the
    // center itself attains the minimum whenever the system is consistent.
    for (std::size_t i = 0; i < constraints.size(); ++i) {
        if (L * constraints[i].radius == 0.0) {
            VecD y = constraints[i].center;
            return MinimaxPoint{y, prob.value(y), 0};
        }
    }

    // initialization: mean of the centers
    VecD y(static_cast<std::size_t>(m), 0.0);
    for (const auto& b : constraints)
        for (int c = 0; c < m; ++c) y[static_cast<std::size_t>(c)] += b.center[static_cast<std::size_t>(c)];
    for (int c = 0; c < m; ++c) y[static_cast<std::size_t>(c)] /= static_cast<double>(constraints.size());

    double spread = 0.0;
    for (const auto& b : constraints)
        spread = std::max(spread, euclidean_distance(y, b.center) + L * b.radius);
    const double scale = std::max(1.0, spread);
    const double dist_floor = 1e-14 * scale;

    int iters = 0;
    VecD best_y = y;
    double best_v = prob.value(y);

    // diminishing-step subgradient warm start
    const double step0 = 0.5 * std::max(spread, 1e-12);
    for (int k = 1; k <= 60; ++k) {
        if (++iters > opts.iteration_cap)
            throw SolverError("extend_point: iteration cap exceeded before reaching tol");
        std::size_t act = 0;
        double vmax = -std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < constraints.size(); ++i) {
            const double vi = euclidean_distance(y, constraints[i].center) - L * constraints[i].radius;
            if (vi > vmax) {
                vmax = vi;
                act = i;
            }
        }
        const double na = euclidean_distance(y, constraints[act].center);
        if (na <= dist_floor) break;
        const double step = step0 / std::sqrt(static_cast<double>(k));
        for (int c = 0; c < m; ++c)
            y[static_cast<std::size_t>(c)] -= step * (y[static_cast<std::size_t>(c)] - constraints[act].center[static_cast<std::size_t>(c)]) / na;
        const double v = prob.value(y);
        if (v < best_v) {
            best_v = v;
            best_y = y;
        }
    }
    y = best_y;

    // smoothed Newton continuation down to the tolerance
    const double kcount = static_cast<double>(constraints.size());
    const double mu_min = opts.tol / (8.0 * std::max(1.0, std::log(kcount)));
    double mu = std::max(1e-3 * scale, mu_min);
    std::vector<double> hdamp(static_cast<std::size_t>(m) * m);
    VecD step_dir;
    while (true) {
        for (int inner = 0; inner < 120; ++inner) {
            if (++iters > opts.iteration_cap)
                throw SolverError("extend_point: iteration cap exceeded before reaching tol");
            SmoothEval e = eval_smooth(prob, y, mu, dist_floor);
            const double gnorm = norm2(e.grad);
            if (gnorm <= 1e-12) break;
            double lambda = 1e-12;
            bool moved = false;
            for (int attempt = 0; attempt < 8 && !moved; ++attempt) {
                hdamp = e.hess;
                for (int d = 0; d < m; ++d) hdamp[static_cast<std::size_t>(d) * m + d] += lambda;
                std::vector<double> rhs(e.grad.size());
                for (std::size_t c = 0; c < rhs.size(); ++c) rhs[c] = -e.grad[c];
                if (!solve_dense(hdamp, rhs, m, step_dir)) {
                    lambda = std::max(lambda * 100.0, 1e-8);
                    continue;
                }
                // Armijo backtracking
                const double slope = dot(step_dir, e.grad);
                double alpha = 1.0;
                while (alpha > 1e-12) {
                    VecD cand = y;
                    for (int c = 0; c < m; ++c) cand[static_cast<std::size_t>(c)] += alpha * step_dir[static_cast<std::size_t>(c)];
                    SmoothEval ce = eval_smooth(prob, cand, mu, dist_floor);
                    if (ce.value <= e.value + 1e-4 * alpha * slope) {
                        y = std::move(cand);
                        moved = true;
                        break;
                    }
                    alpha *= 0.5;
                }
                if (!moved) lambda = std::max(lambda * 100.0, 1e-8);
            }
            const double v = prob.value(y);
            if (v < best_v) {
                best_v = v;
                best_y = y;
            }
            if (!moved) break;
        }
        if (mu <= mu_min) break;
        mu = std::max(mu / 10.0, mu_min);
    }

    return MinimaxPoint{best_y, best_v, iters};
}

// ---------------------------------------------------------------------------
// Sequential extension
// ---------------------------------------------------------------------------

namespace {

// Validates that `order` is a permutation of the complement of `domain`;
// an empty order means ascending index.
std::vector<int> resolve_order(int n, std::span<const int> domain, std::span<const int> order) {
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

EuclideanExtension kirszbraun_extend(const EuclideanInstance& inst, double L,
                                     std::span<const int> order, const MinimaxOptions& opts) {
    inst.validate();
    if (!(L >= 0.0) || !std::isfinite(L)) throw PreconditionError("kirszbraun_extend: bad L");
    const auto pm = inst.partial_map();
    const double lip_a = lip_constant(pm);
    if (lip_a > L * (1.0 + 1e-9))
        throw PreconditionError("kirszbraun_extend: lip_constant(f, A) exceeds L");

    const int n = inst.source.size();
    std::vector<VecD> values(static_cast<std::size_t>(n));
    std::vector<char> assigned(static_cast<std::size_t>(n), 0);
    std::vector<int> assigned_order;
    assigned_order.reserve(static_cast<std::size_t>(n));
    for (std::size_t i = 0; i < inst.domain.size(); ++i) {
        values[static_cast<std::size_t>(inst.domain[i])] = inst.values[i];
        assigned[static_cast<std::size_t>(inst.domain[i])] = 1;
        assigned_order.push_back(inst.domain[i]);
    }

    double viol = 0.0;
    std::vector<BallConstraint> balls;
    for (int x : resolve_order(n, inst.domain, order)) {
        balls.clear();
        for (int p : assigned_order)
            balls.push_back(BallConstraint{values[static_cast<std::size_t>(p)], inst.source.distance(p, x)});
        MinimaxPoint mm;
        try {
            mm = extend_point(balls, L, opts);
        } catch (const SolverError& e) {
            std::ostringstream os;
            os << e.what() << " (while assigning source index " << x << ")";
            throw SolverError(os.str());
        }
        viol = std::max(viol, std::max(0.0, mm.residual));
        values[static_cast<std::size_t>(x)] = std::move(mm.point);
        assigned[static_cast<std::size_t>(x)] = 1;
        assigned_order.push_back(x);
    }

    EuclideanExtension out;
    out.lip_achieved = lip_constant_full<EuclideanGeometry>(inst.source, values, inst.geometry());
    out.values = std::move(values);
    out.max_constraint_violation = viol;
    return out;
}

// ---------------------------------------------------------------------------
// Transports
// ---------------------------------------------------------------------------

namespace {

void check_extends(const EuclideanInstance& inst, const EuclideanExtension& f_full,
                   const char* who) {
    if (static_cast<int>(f_full.values.size()) != inst.source.size())
        throw PreconditionError(std::string(who) + ": full map must cover the source");
    for (std::size_t i = 0; i < inst.domain.size(); ++i) {
        const VecD& a = f_full.values[static_cast<std::size_t>(inst.domain[i])];
        const VecD& b = inst.values[i];
        const double tol = 1e-12 * std::max(1.0, norm2(b));
        if (euclidean_distance(a, b) > tol)
            throw PreconditionError(std::string(who) + ": full map does not extend the instance values");
    }
}

void check_g_values(const EuclideanInstance& inst, const std::vector<VecD>& g, const char* who) {
    if (g.size() != inst.domain.size())
        throw PreconditionError(std::string(who) + ": g must be defined exactly on A");
    for (const auto& v : g)
        if (static_cast<int>(v.size()) != inst.target_dim || !all_finite(v))
            throw PreconditionError(std::string(who) + ": invalid g value");
}

// Sequential feasibility in the product of the source with the plane: sheet 0
// holds the full reference map, sheet 1 holds the given values on A at plane
// height `gap`; the remaining sheet-1 points are assigned in ascending order.
std::vector<VecD> extend_second_sheet(const FiniteMetricSpace& X, std::span<const int> domain,
                                      std::span<const VecD> sheet0, std::span<const VecD> sheet1_a,
                                      double gap, double L, const MinimaxOptions& opts,
                                      double& max_viol) {
    const int n = X.size();
    std::vector<VecD> sheet1(static_cast<std::size_t>(n));
    std::vector<char> assigned(static_cast<std::size_t>(n), 0);
    std::vector<int> assigned_idx;
    for (std::size_t i = 0; i < domain.size(); ++i) {
        sheet1[static_cast<std::size_t>(domain[i])] = sheet1_a[i];
        assigned[static_cast<std::size_t>(domain[i])] = 1;
        assigned_idx.push_back(domain[i]);
    }
    std::vector<BallConstraint> balls;
    for (int x = 0; x < n; ++x) {
        if (assigned[static_cast<std::size_t>(x)]) continue;
        balls.clear();
        for (int i = 0; i < n; ++i) {
            const double d = X.distance(i, x);
            balls.push_back(BallConstraint{sheet0[static_cast<std::size_t>(i)], std::sqrt(d * d + gap * gap)});
        }
        for (int j : assigned_idx)
            balls.push_back(BallConstraint{sheet1[static_cast<std::size_t>(j)], X.distance(j, x)});
        MinimaxPoint mm = extend_point(balls, L, opts);
        max_viol = std::max(max_viol, std::max(0.0, mm.residual));
        sheet1[static_cast<std::size_t>(x)] = std::move(mm.point);
        assigned[static_cast<std::size_t>(x)] = 1;
        assigned_idx.push_back(x);
    }
    return sheet1;
}

}  // namespace

PhiConstants phi_constants(const EuclideanInstance& inst, const EuclideanExtension& f_full,
                           double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw PreconditionError("transport_phi: eps must be in (0,1)");
    const int z_index = *std::min_element(inst.domain.begin(), inst.domain.end());
    const VecD& z = f_full.values[static_cast<std::size_t>(z_index)];
    double m_bound = 1.0;
    for (const auto& v : f_full.values) m_bound = std::max(m_bound, euclidean_distance(z, v));
    return PhiConstants{z_index, m_bound, eps * eps / (8.0 * m_bound)};
}

PhiTransport transport_phi(const EuclideanInstance& inst, const EuclideanExtension& f_full,
                           const std::vector<VecD>& g_values, double eps,
                           const MinimaxOptions& opts) {
    inst.validate();
    check_extends(inst, f_full, "transport_phi");
    check_g_values(inst, g_values, "transport_phi");
    const double lip_f = lip_constant_full<EuclideanGeometry>(inst.source, f_full.values, inst.geometry());
    if (lip_f > 1.0 + 1e-9)
        throw PreconditionError("transport_phi: reference map must be nonexpansive");
    {
        EuclideanInstance probe = inst;
        probe.values = g_values;
        if (lip_constant(probe.partial_map()) > 1.0 + 1e-9)
            throw PreconditionError("transport_phi: g must be nonexpansive on A");
    }

    PhiConstants c = phi_constants(inst, f_full, eps);
    double sup_ag = 0.0;
    for (std::size_t i = 0; i < inst.domain.size(); ++i)
        sup_ag = std::max(sup_ag, euclidean_distance(
                                       f_full.values[static_cast<std::size_t>(inst.domain[i])], g_values[i]));
    if (!(sup_ag < c.delta))
        throw PreconditionError("transport_phi: sup_A |f - g| must be below delta = eps^2/(8M)");

    double viol = 0.0;
    std::vector<VecD> g_prime = extend_second_sheet(inst.source, inst.domain, f_full.values,
                                                    g_values, eps, 1.0, opts, viol);
    EuclideanExtension out;
    out.lip_achieved = lip_constant_full<EuclideanGeometry>(inst.source, g_prime, inst.geometry());
    out.values = std::move(g_prime);
    out.max_constraint_violation = viol;
    return PhiTransport{std::move(out), c};
}

PsiConstants psi_constants(const EuclideanInstance& inst, const EuclideanExtension& f_full,
                           double eps) {
    if (!(eps > 0.0 && eps < 1.0)) throw PreconditionError("transport_psi: eps must be in (0,1)");
    PsiConstants c;
    c.lip_full = lip_constant_full<EuclideanGeometry>(inst.source, f_full.values, inst.geometry());
    if (c.lip_full == 0.0) {
        c.constant_f = true;
        c.delta = eps;
        return c;
    }
    c.z_index = *std::min_element(inst.domain.begin(), inst.domain.end());
    const VecD& z = f_full.values[static_cast<std::size_t>(c.z_index)];
    for (const auto& v : f_full.values) c.m_bound = std::max(c.m_bound, euclidean_distance(z, v));

    const double rhs = eps * eps / (32.0 * c.m_bound * (4.0 * c.m_bound + 1.0));
    int k = 1;
    for (; k <= 80; ++k) {
        const double one_minus_s = std::ldexp(1.0, -k);
        const double s = 1.0 - one_minus_s;
        if (one_minus_s / (s * s) < rhs) break;
    }
    if (k > 80) throw PreconditionError("transport_psi: no admissible geometric s found");
    c.s_exponent = k;
    c.s = 1.0 - std::ldexp(1.0, -k);

    // witness pair: argmax Lipschitz ratio over A; lex order + strict update
    // makes ties resolve to the lowest index pair
    std::vector<int> sorted_a(inst.domain.begin(), inst.domain.end());
    std::sort(sorted_a.begin(), sorted_a.end());
    double best_ratio = -1.0;
    for (std::size_t p = 0; p < sorted_a.size(); ++p) {
        for (std::size_t q = p + 1; q < sorted_a.size(); ++q) {
            const int a = sorted_a[p], b = sorted_a[q];
            const double dx = inst.source.distance(a, b);
            if (dx == 0.0) continue;
            const double r = euclidean_distance(f_full.values[static_cast<std::size_t>(a)],
                                                f_full.values[static_cast<std::size_t>(b)]) / dx;
            if (r > best_ratio) {
                best_ratio = r;
                c.witness_a = a;
                c.witness_b = b;
            }
        }
    }
    if (c.witness_a < 0)
        throw PreconditionError("transport_psi: A carries no pair at positive source distance");
    const double d0 = inst.source.distance(c.witness_a, c.witness_b);
    const double dy0 = euclidean_distance(f_full.values[static_cast<std::size_t>(c.witness_a)],
                                          f_full.values[static_cast<std::size_t>(c.witness_b)]);
    const double delta1 = 0.5 * (dy0 - c.s * c.lip_full * d0);
    const double delta2 = eps * eps * c.s * c.s / (32.0 * (4.0 * c.m_bound + 1.0));
    c.delta = std::min(delta1, delta2);
    if (!(c.delta > 0.0))
        throw PreconditionError(
            "transport_psi: cannot certify Lip(f,A) = Lip(f,X) at the required resolution");
    return c;
}

PsiTransport transport_psi(const EuclideanInstance& inst, const EuclideanExtension& f_full,
                           const std::vector<VecD>& g_values, double eps,
                           const MinimaxOptions& opts) {
    inst.validate();
    check_extends(inst, f_full, "transport_psi");
    check_g_values(inst, g_values, "transport_psi");

    const auto geom = inst.geometry();
    const double lip_x = lip_constant_full<EuclideanGeometry>(inst.source, f_full.values, geom);
    const double lip_a = lip_constant(inst.partial_map());
    if (std::fabs(lip_a - lip_x) > 1e-6 * std::max(lip_x, 1e-12))
        throw PreconditionError("transport_psi: requires Lip(f,A) = Lip(f,X) (relative 1e-6)");

    PsiConstants c = psi_constants(inst, f_full, eps);
    double sup_ag = 0.0;
    for (std::size_t i = 0; i < inst.domain.size(); ++i)
        sup_ag = std::max(sup_ag, euclidean_distance(
                                       f_full.values[static_cast<std::size_t>(inst.domain[i])], g_values[i]));
    if (!(sup_ag < c.delta))
        throw PreconditionError("transport_psi: sup_A |f - g| must be below delta");

    EuclideanInstance g_inst = inst;
    g_inst.values = g_values;
    const double lip_g = lip_constant(g_inst.partial_map());

    PsiTransport result;
    result.constants = c;

    if (c.constant_f) {
        // constant reference map: extend g at its own constant, then pull every
        // value into the ball of radius eps around the constant
        result.branch = 0;
        const VecD& z = f_full.values[0];
        EuclideanExtension g1;
        if (lip_g == 0.0) {
            g1.values.assign(static_cast<std::size_t>(inst.source.size()), g_values[0]);
            for (std::size_t i = 0; i < inst.domain.size(); ++i)
                g1.values[static_cast<std::size_t>(inst.domain[i])] = g_values[i];
            g1.max_constraint_violation = 0.0;
        } else {
            g1 = kirszbraun_extend(g_inst, lip_g, {}, opts);
        }
        for (auto& v : g1.values) {
            const double d = euclidean_distance(v, z);
            if (d > eps) v = scale_toward(z, v, eps / d);
        }
        g1.lip_achieved = lip_constant_full<EuclideanGeometry>(inst.source, g1.values, geom);
        result.g_prime = std::move(g1);
        return result;
    }

    if (lip_g <= 2.0 * lip_x) {
        // product construction: first sheet carries (1-s) z + s f, second sheet
        // carries g at plane height eta, extension constant Lip(g, A)
        result.branch = 1;
        const double eta = eps / (4.0 * lip_x);
        const VecD& z = f_full.values[static_cast<std::size_t>(c.z_index)];
        std::vector<VecD> sheet0(f_full.values.size());
        for (std::size_t i = 0; i < f_full.values.size(); ++i)
            sheet0[i] = scale_toward(z, f_full.values[i], c.s);
        double viol = 0.0;
        std::vector<VecD> g_prime = extend_second_sheet(inst.source, inst.domain, sheet0, g_values,
                                                        eta, lip_g, opts, viol);
        EuclideanExtension out;
        out.lip_achieved = lip_constant_full<EuclideanGeometry>(inst.source, g_prime, geom);
        out.values = std::move(g_prime);
        out.max_constraint_violation = viol;
        result.g_prime = std::move(out);
        return result;
    }

    // far-set construction: pin f on the set at source distance >= 2 delta / Lip(g,A)
    // from A, then extend at constant Lip(g, A)
    result.branch = 2;
    const double cut = 2.0 * c.delta / lip_g;
    std::vector<char> in_a(static_cast<std::size_t>(inst.source.size()), 0);
    for (int a : inst.domain) in_a[static_cast<std::size_t>(a)] = 1;
    EuclideanInstance aug = inst;
    aug.domain.clear();
    aug.values.clear();
    for (std::size_t i = 0; i < inst.domain.size(); ++i) {
        aug.domain.push_back(inst.domain[i]);
        aug.values.push_back(g_values[i]);
    }
    for (int x = 0; x < inst.source.size(); ++x) {
        if (in_a[static_cast<std::size_t>(x)]) continue;
        double dist_a = std::numeric_limits<double>::infinity();
        for (int a : inst.domain) dist_a = std::min(dist_a, inst.source.distance(x, a));
        if (dist_a >= cut) {
            aug.domain.push_back(x);
            aug.values.push_back(f_full.values[static_cast<std::size_t>(x)]);
        }
    }
    result.g_prime = kirszbraun_extend(aug, lip_g, {}, opts);
    return result;
}

// ---------------------------------------------------------------------------
// Hull projection (Wolfe's minimum-norm point over convex-combination weights)
// ---------------------------------------------------------------------------

namespace {

// affine minimizer of |sum_a alpha_a w_a|^2 subject to sum alpha = 1
bool affine_minimizer(const std::vector<VecD>& w, const std::vector<int>& corral,
                      std::vector<double>& alpha) {
    const int s = static_cast<int>(corral.size());
    const int n = s + 1;
    std::vector<double> a(static_cast<std::size_t>(n) * n, 0.0);
    std::vector<double> b(static_cast<std::size_t>(n), 0.0);
    double trace = 0.0;
    for (int r = 0; r < s; ++r) {
        for (int c = 0; c < s; ++c) {
            const double g = dot(w[static_cast<std::size_t>(corral[static_cast<std::size_t>(r)])],
                                 w[static_cast<std::size_t>(corral[static_cast<std::size_t>(c)])]);
            a[static_cast<std::size_t>(r) * n + c] = 2.0 * g;
            if (r == c) trace += g;
        }
        a[static_cast<std::size_t>(r) * n + s] = 1.0;
        a[static_cast<std::size_t>(s) * n + r] = 1.0;
    }
    b[static_cast<std::size_t>(s)] = 1.0;
    std::vector<double> sol;
    if (!solve_dense(a, b, n, sol)) {
        // ridge fallback for affinely dependent corrals
        const double ridge = 1e-12 * std::max(1.0, trace / std::max(1, s));
        for (int r = 0; r < s; ++r) a[static_cast<std::size_t>(r) * n + r] += ridge;
        if (!solve_dense(a, b, n, sol)) return false;
    }
    alpha.assign(sol.begin(), sol.begin() + s);
    return true;
}

VecD combo(const std::vector<VecD>& pts, const std::vector<int>& idx,
           const std::vector<double>& lam) {
    VecD x(pts[0].size(), 0.0);
    for (std::size_t a = 0; a < idx.size(); ++a)
        for (std::size_t c = 0; c < x.size(); ++c)
            x[c] += lam[a] * pts[static_cast<std::size_t>(idx[a])][c];
    return x;
}

}  // namespace

VecD min_norm_projection(const VecD& p, const HullVertexSet& hull, const ProjectionOptions& opts) {
    if (hull.vertices.empty()) throw PreconditionError("min_norm_projection: empty hull");
    const std::size_t k = hull.vertices.size();
    const std::size_t m = p.size();
    for (const auto& v : hull.vertices)
        if (v.size() != m) throw PreconditionError("min_norm_projection: dimension mismatch");

    std::vector<VecD> w(k);
    double scale = 1.0;
    for (std::size_t j = 0; j < k; ++j) {
        w[j] = sub(hull.vertices[j], p);
        scale = std::max(scale, norm2(w[j]));
    }
    const double inside_tol = 64.0 * DBL_EPSILON * scale;

    // deterministic start: nearest vertex, lowest index on ties
    std::size_t j0 = 0;
    double best = norm2(w[0]);
    for (std::size_t j = 1; j < k; ++j) {
        const double nj = norm2(w[j]);
        if (nj < best) {
            best = nj;
            j0 = j;
        }
    }
    std::vector<int> corral{static_cast<int>(j0)};
    std::vector<double> lam{1.0};
    VecD x = w[j0];

    int iters = 0;
    double prev_xx = std::numeric_limits<double>::infinity();
    std::vector<double> alpha;
    while (true) {
        if (++iters > opts.iteration_cap)
            throw SolverError("min_norm_projection: iteration cap exceeded");
        const double xn = norm2(x);
        if (xn <= inside_tol) return p;  // p lies in the hull at float resolution
        const double xx = xn * xn;
        int jstar = 0;
        double mn = dot(x, w[0]);
        for (std::size_t j = 1; j < k; ++j) {
            const double t = dot(x, w[j]);
            if (t < mn) {
                mn = t;
                jstar = static_cast<int>(j);
            }
        }
        if (xx - mn <= 1e-15 * scale * scale) break;  // optimal at float resolution
        const bool have = std::find(corral.begin(), corral.end(), jstar) != corral.end();
        if (have && xx >= prev_xx - 1e-18 * scale * scale) break;  // stagnation
        prev_xx = xx;
        if (!have) {
            corral.push_back(jstar);
            lam.push_back(0.0);
        }
        // minor cycles
        while (true) {
            if (++iters > opts.iteration_cap)
                throw SolverError("min_norm_projection: iteration cap exceeded");
            if (!affine_minimizer(w, corral, alpha))
                throw SolverError("min_norm_projection: degenerate corral");
            double amin = alpha[0];
            for (double v : alpha) amin = std::min(amin, v);
            if (amin > -1e-12) {
                lam = alpha;
                for (auto& v : lam) v = std::max(v, 0.0);
                break;
            }
            double theta = 1.0;
            for (std::size_t a = 0; a < alpha.size(); ++a)
                if (alpha[a] <= 0.0 && lam[a] > alpha[a])
                    theta = std::min(theta, lam[a] / (lam[a] - alpha[a]));
            for (std::size_t a = 0; a < alpha.size(); ++a)
                lam[a] = (1.0 - theta) * lam[a] + theta * alpha[a];
            // drop vanished vertices, keeping at least one
            std::vector<int> nc;
            std::vector<double> nl;
            for (std::size_t a = 0; a < corral.size(); ++a)
                if (lam[a] > 1e-14) {
                    nc.push_back(corral[a]);
                    nl.push_back(lam[a]);
                }
            if (nc.empty()) {
                nc.push_back(corral[0]);
                nl.push_back(1.0);
            }
            corral = std::move(nc);
            lam = std::move(nl);
        }
        double lsum = 0.0;
        for (double v : lam) lsum += v;
        for (auto& v : lam) v /= lsum;
        x = combo(w, corral, lam);
    }

    // return the convex combination of the original vertices (feasible by construction)
    VecD proj(m, 0.0);
    for (std::size_t a = 0; a < corral.size(); ++a)
        for (std::size_t c = 0; c < m; ++c)
            proj[c] += lam[a] * hull.vertices[static_cast<std::size_t>(corral[a])][c];
    return proj;
}

double hull_distance(const VecD& p, const HullVertexSet& hull, const ProjectionOptions& opts) {
    return euclidean_distance(p, min_norm_projection(p, hull, opts));
}

double hull_hausdorff(const HullVertexSet& a, const HullVertexSet& b,
                      const ProjectionOptions& opts) {
    if (a.vertices.empty() || b.vertices.empty())
        throw PreconditionError("hull_hausdorff: empty vertex set");
    double h = 0.0;
    for (const auto& v : a.vertices) h = std::max(h, hull_distance(v, b, opts));
    for (const auto& v : b.vertices) h = std::max(h, hull_distance(v, a, opts));
    return h;
}

EuclideanExtension alpha_c_compose(const FiniteMetricSpace& source, const EuclideanExtension& ext,
                                   const HullVertexSet& hull, int target_dim,
                                   const ProjectionOptions& opts) {
    if (static_cast<int>(ext.values.size()) != source.size())
        throw PreconditionError("alpha_c_compose: extension must cover the source");
    EuclideanExtension out;
    out.values.reserve(ext.values.size());
    for (const auto& v : ext.values) out.values.push_back(min_norm_projection(v, hull, opts));
    out.lip_achieved = lip_constant_full<EuclideanGeometry>(source, out.values,
                                                            EuclideanGeometry{target_dim});
    out.max_constraint_violation = ext.max_constraint_violation;
    return out;
}

// ---------------------------------------------------------------------------
// Inequality slacks
// ---------------------------------------------------------------------------

double reshetnyak_slack(const VecD& x, const VecD& y, const VecD& u, const VecD& v) {
    const double dxy = euclidean_distance(x, y);
    const double duv = euclidean_distance(u, v);
    const double dxv = euclidean_distance(x, v);
    const double dyu = euclidean_distance(y, u);
    const double dxu = euclidean_distance(x, u);
    const double dyv = euclidean_distance(y, v);
    return dxv * dxv + dyu * dyu + 2.0 * dxu * dyv - dxy * dxy - duv * duv;
}

double projection_stability_slack(const HullVertexSet& v1, const HullVertexSet& v2, const VecD& z,
                                  double r1, const VecD& x, double r2,
                                  const ProjectionOptions& opts) {
    if (!(r1 > 0.0) || !(r2 > 0.0))
        throw PreconditionError("projection_stability_slack: radii must be positive");
    const double tol1 = r1 + 1e-12 * std::max(1.0, r1);
    for (const auto& v : v1.vertices)
        if (euclidean_distance(v, z) > tol1)
            throw PreconditionError("projection_stability_slack: co(V1) not inside B(z, r1)");
    for (const auto& v : v2.vertices)
        if (euclidean_distance(v, z) > tol1)
            throw PreconditionError("projection_stability_slack: co(V2) not inside B(z, r1)");
    if (euclidean_distance(x, z) > r2 + 1e-12 * std::max(1.0, r2))
        throw PreconditionError("projection_stability_slack: x not inside B(z, r2)");
    const VecD p1 = min_norm_projection(x, v1, opts);
    const VecD p2 = min_norm_projection(x, v2, opts);
    const double d = euclidean_distance(p1, p2);
    return 2.0 * (r1 + r2) * hull_hausdorff(v1, v2, opts) - d * d;
}

SlackReport SlackReport::build(std::string tag, std::vector<double> slacks, double tol,
                               std::string witness_detail) {
    SlackReport r;
    r.tag = std::move(tag);
    r.min_slack = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (std::size_t i = 0; i < slacks.size(); ++i)
        if (slacks[i] < r.min_slack) {
            r.min_slack = slacks[i];
            arg = i;
        }
    if (slacks.empty()) r.min_slack = 0.0;
    r.slacks = std::move(slacks);
    if (r.min_slack < -tol) {
        r.witness = arg;
        r.witness_detail = std::move(witness_detail);
    }
    return r;
}

}  // namespace lipext
