#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"

#include "lipext/euclid.hpp"
#include "lipext/rng.hpp"

using namespace lipext;

namespace {

double lip_of(const EuclideanInstance& inst, const std::vector<VecD>& full) {
    return lip_constant_full<EuclideanGeometry>(inst.source, full, inst.geometry());
}

EuclideanInstance random_instance(Rng& rng, int nx, int na, int sd, int td, double lip_target) {
    std::vector<VecD> pts;
    for (int i = 0; i < nx; ++i) {
        VecD p(static_cast<std::size_t>(sd));
        bool ok = false;
        while (!ok) {
            for (auto& c : p) c = rng.uniform(0.0, 2.0);
            ok = true;
            for (const auto& q : pts) ok = ok && euclidean_distance(p, q) > 0.3;
        }
        pts.push_back(p);
    }
    std::vector<int> domain;
    for (int a = 0; a < na; ++a) domain.push_back(a);
    std::vector<VecD> vals;
    for (int a = 0; a < na; ++a) {
        VecD v(static_cast<std::size_t>(td));
        for (auto& c : v) c = rng.uniform();
        vals.push_back(v);
    }
    EuclideanInstance inst = EuclideanInstance::from_points(pts, domain, vals);
    const double lip = lip_constant(inst.partial_map());
    if (lip > lip_target) {
        VecD c(vals[0].size(), 0.0);
        for (const auto& v : inst.values)
            for (std::size_t i = 0; i < c.size(); ++i) c[i] += v[i] / static_cast<double>(na);
        for (auto& v : inst.values) v = scale_toward(c, v, lip_target / lip);
    }
    return inst;
}

}  // namespace

TEST_CASE("extend_point: touching balls meet at the tangency point") {
    std::vector<BallConstraint> balls{{{0.0, 0.0}, 1.0}, {{2.0, 0.0}, 1.0}};
    MinimaxPoint mm = extend_point(balls, 1.0);
    CHECK(std::fabs(mm.point[0] - 1.0) <= 1e-6);
    CHECK(std::fabs(mm.point[1]) <= 1e-6);
    CHECK(mm.residual <= 1e-7);
}

TEST_CASE("extend_point: a single constraint returns its center") {
    std::vector<BallConstraint> balls{{{0.3, -0.7, 2.0}, 0.5}};
    MinimaxPoint mm = extend_point(balls, 3.0);
    CHECK(mm.point == VecD{0.3, -0.7, 2.0});
    CHECK(mm.residual == doctest::Approx(-1.5));
}

TEST_CASE("extend_point matches a dense grid-search oracle") {
    // three unit-spaced collinear source points mapped isometrically; the new
    // source point at their centroid has distances 1, 0, 1, pinning the value
    std::vector<BallConstraint> balls{
        {{0.0, 0.0}, 1.0}, {{1.0, 0.0}, 0.0}, {{2.0, 0.0}, 1.0}};
    MinimaxPoint mm = extend_point(balls, 1.0);

    auto v_of = [&](double x, double y) {
        double v = -1e300;
        for (const auto& b : balls) {
            const double dx = x - b.center[0], dy = y - b.center[1];
            v = std::max(v, std::sqrt(dx * dx + dy * dy) - b.radius);
        }
        return v;
    };
    double best_v = 1e300, bx = 0.0, by = 0.0;
    for (double x = -3.0; x <= 3.0; x += 0.01)
        for (double y = -3.0; y <= 3.0; y += 0.01)
            if (v_of(x, y) < best_v) {
                best_v = v_of(x, y);
                bx = x;
                by = y;
            }
    CHECK(std::fabs(bx - 1.0) <= 0.02);
    CHECK(std::fabs(by) <= 0.02);
    CHECK(mm.point[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::fabs(mm.point[1]) <= 1e-9);
    CHECK(mm.residual <= best_v + 1e-7);
}

TEST_CASE("extend_point rejects bad input") {
    CHECK_THROWS_AS(extend_point({}, 1.0), PreconditionError);
    std::vector<BallConstraint> bad{{{0.0}, -1.0}};
    CHECK_THROWS_AS(extend_point(bad, 1.0), PreconditionError);
}

TEST_CASE("kirszbraun_extend: A = X returns the input") {
    EuclideanInstance inst = EuclideanInstance::from_points(
        {{0.0}, {1.0}}, {0, 1}, {{0.5}, {1.0}});
    EuclideanExtension ext = kirszbraun_extend(inst, 1.0);
    CHECK(ext.values[0] == VecD{0.5});
    CHECK(ext.values[1] == VecD{1.0});
    CHECK(ext.lip_achieved == doctest::Approx(0.5));
    CHECK(ext.max_constraint_violation == 0.0);
}

TEST_CASE("kirszbraun_extend: touching balls force the midpoint") {
    EuclideanInstance inst = EuclideanInstance::from_points(
        {{0.0}, {1.0}, {2.0}}, {0, 2}, {{0.0}, {2.0}});
    EuclideanExtension ext = kirszbraun_extend(inst, 1.0);
    CHECK(std::fabs(ext.values[1][0] - 1.0) <= 1e-6);
    CHECK(ext.lip_achieved <= 1.0 + 1e-6);
}

TEST_CASE("kirszbraun_extend: random instances pass the pairwise audit") {
    Rng rng(42u);
    for (int rep = 0; rep < 15; ++rep) {
        EuclideanInstance inst = random_instance(rng, 10, 5, 3, 3, 0.95);
        EuclideanExtension ext = kirszbraun_extend(inst, 1.0);
        CHECK(ext.max_constraint_violation <= 1e-6);
        CHECK(lip_of(inst, ext.values) <= 1.0 + 1e-6);
        for (std::size_t i = 0; i < inst.domain.size(); ++i)
            CHECK(ext.values[static_cast<std::size_t>(inst.domain[i])] == inst.values[i]);
    }
}

TEST_CASE("kirszbraun_extend precondition and order validation") {
    EuclideanInstance inst = EuclideanInstance::from_points(
        {{0.0}, {1.0}, {2.0}}, {0, 2}, {{0.0}, {2.0}});
    CHECK_THROWS_AS(kirszbraun_extend(inst, 0.5), PreconditionError);
    std::vector<int> bad_order{0};
    CHECK_THROWS_AS(kirszbraun_extend(inst, 1.0, bad_order), PreconditionError);
    std::vector<int> ok_order{1};
    CHECK_NOTHROW(kirszbraun_extend(inst, 1.0, ok_order));
}

TEST_CASE("kirszbraun_extend: permuted order still yields a valid extension") {
    Rng rng(43u);
    EuclideanInstance inst = random_instance(rng, 8, 3, 2, 2, 0.9);
    std::vector<int> order{6, 3, 7, 5, 4};
    EuclideanExtension a = kirszbraun_extend(inst, 1.0);
    EuclideanExtension b = kirszbraun_extend(inst, 1.0, order);
    CHECK(a.lip_achieved <= 1.0 + 1e-6);
    CHECK(b.lip_achieved <= 1.0 + 1e-6);
}

TEST_CASE("transport_phi: delta formula at eps = 0.4, M = 1") {
    // values within unit distance of the first one keep M at its floor of 1
    EuclideanInstance inst = EuclideanInstance::from_points(
        {{0.0, 0.0}, {0.8, 0.0}, {1.6, 0.0}}, {0, 1}, {{0.0, 0.0}, {0.5, 0.0}});
    EuclideanExtension f_full = kirszbraun_extend(inst, 1.0);
    PhiConstants pc = phi_constants(inst, f_full, 0.4);
    CHECK(pc.m_bound == 1.0);
    CHECK(pc.delta == doctest::Approx(0.02).epsilon(1e-15));
}

TEST_CASE("transport_phi: g = f|A returns a g' within eps of f") {
    Rng rng(44u);
    EuclideanInstance inst = random_instance(rng, 8, 4, 2, 2, 0.7);
    EuclideanExtension f_full = kirszbraun_extend(inst, 1.0);
    PhiTransport t = transport_phi(inst, f_full, inst.values, 0.4);
    for (std::size_t i = 0; i < inst.domain.size(); ++i)
        CHECK(t.g_prime.values[static_cast<std::size_t>(inst.domain[i])] == inst.values[i]);
    double sup = 0.0;
    for (std::size_t i = 0; i < f_full.values.size(); ++i)
        sup = std::max(sup, euclidean_distance(f_full.values[i], t.g_prime.values[i]));
    CHECK(sup <= 0.4 + 1e-6);
    CHECK(t.g_prime.lip_achieved <= 1.0 + 1e-6);
}

TEST_CASE("transport_phi: random perturbation below delta passes all postconditions") {
    Rng rng(45u);
    for (int rep = 0; rep < 8; ++rep) {
        EuclideanInstance inst = random_instance(rng, 8, 4, 2, 2, 0.7);
        EuclideanExtension f_full = kirszbraun_extend(inst, 1.0);
        const double eps = 0.4;
        PhiConstants pc = phi_constants(inst, f_full, eps);
        std::vector<VecD> g = inst.values;
        for (auto& v : g) {
            VecD dir{rng.normal(), rng.normal()};
            const double n = norm2(dir);
            for (std::size_t c = 0; c < v.size(); ++c) v[c] += 0.9 * pc.delta * dir[c] / n;
        }
        PhiTransport t = transport_phi(inst, f_full, g, eps);
        for (std::size_t i = 0; i < inst.domain.size(); ++i)
            CHECK(t.g_prime.values[static_cast<std::size_t>(inst.domain[i])] == g[i]);
        CHECK(t.g_prime.lip_achieved <= 1.0 + 1e-6);
        double sup = 0.0;
        for (std::size_t i = 0; i < f_full.values.size(); ++i)
            sup = std::max(sup, euclidean_distance(f_full.values[i], t.g_prime.values[i]));
        CHECK(sup <= eps + 1e-6);
    }
}

TEST_CASE("transport_phi rejects a perturbation at or above delta") {
    Rng rng(46u);
    EuclideanInstance inst = random_instance(rng, 6, 3, 2, 2, 0.7);
    EuclideanExtension f_full = kirszbraun_extend(inst, 1.0);
    PhiConstants pc = phi_constants(inst, f_full, 0.1);
    std::vector<VecD> g = inst.values;
    g[0][0] += 2.0 * pc.delta;
    CHECK_THROWS_AS(transport_phi(inst, f_full, g, 0.1), PreconditionError);
}

TEST_CASE("transport_psi: constant reference map uses the ball-projection shortcut") {
    EuclideanInstance inst = EuclideanInstance::from_points(
        {{0.0}, {0.6}, {1.2}}, {0, 1}, {{2.0}, {2.0}});
    EuclideanExtension f_full = kirszbraun_extend(inst, 0.0);
    REQUIRE(lip_of(inst, f_full.values) == 0.0);
    const double eps = 0.25;
    std::vector<VecD> g{{2.1}, {2.05}};  // within delta = eps of the constant
    PsiTransport t = transport_psi(inst, f_full, g, eps);
    CHECK(t.branch == 0);
    CHECK(t.g_prime.values[0] == VecD{2.1});
    CHECK(t.g_prime.values[1] == VecD{2.05});
    EuclideanInstance g_inst = inst;
    g_inst.values = g;
    const double lip_g = lip_constant(g_inst.partial_map());
    CHECK(t.g_prime.lip_achieved == doctest::Approx(lip_g).epsilon(1e-9));
    for (const auto& v : t.g_prime.values) CHECK(std::fabs(v[0] - 2.0) <= eps + 1e-12);
}

TEST_CASE("transport_psi: g = f|A takes the product branch and passes postconditions") {
    Rng rng(47u);
    EuclideanInstance inst = random_instance(rng, 7, 4, 2, 2, 1.0);
    {
        // normalize so Lip(f, A) is exactly the scale target
        const double lip = lip_constant(inst.partial_map());
        REQUIRE(lip > 0.0);
        VecD c(inst.values[0].size(), 0.0);
        for (const auto& v : inst.values)
            for (std::size_t i = 0; i < c.size(); ++i)
                c[i] += v[i] / static_cast<double>(inst.values.size());
        for (auto& v : inst.values) v = scale_toward(c, v, 1.0 / lip);
    }
    const double lip_a = lip_constant(inst.partial_map());
    EuclideanExtension f_full = kirszbraun_extend(inst, lip_a);
    PsiTransport t = transport_psi(inst, f_full, inst.values, 0.4);
    CHECK(t.branch == 1);
    const double lip_rel = std::fabs(t.g_prime.lip_achieved - lip_a) / lip_a;
    CHECK(lip_rel <= 1e-6);
    double sup = 0.0;
    for (std::size_t i = 0; i < f_full.values.size(); ++i)
        sup = std::max(sup, euclidean_distance(f_full.values[i], t.g_prime.values[i]));
    CHECK(sup <= 0.4 + 1e-6);
}

TEST_CASE("transport_psi far-set branch: output stays within 4 delta of the reference") {
    // planted witness pair at ratio 1 plus a twin pair whose perturbation
    // inflates Lip(g, A) far past 2 Lip(f, X)
    std::vector<VecD> pts{{0.0, 0.0}, {0.7, 0.0}, {1.4, 0.05}, {1.4 + 1e-7, 0.05},
                          {2.1, 0.03}, {2.8, 0.07}};
    std::vector<VecD> vals{{0.0}, {0.7}, {0.42}, {0.42}};
    EuclideanInstance inst = EuclideanInstance::from_points(pts, {0, 1, 2, 3}, vals);
    const double lip_a = lip_constant(inst.partial_map());
    REQUIRE(lip_a == 1.0);
    EuclideanExtension f_full = kirszbraun_extend(inst, lip_a);
    const double eps = 0.4;
    PsiConstants pc = psi_constants(inst, f_full, eps);
    std::vector<VecD> g = vals;
    g[3][0] += 0.9 * pc.delta;
    EuclideanInstance g_inst = inst;
    g_inst.values = g;
    const double lip_g = lip_constant(g_inst.partial_map());
    REQUIRE(lip_g > 2.0 * f_full.lip_achieved);

    PsiTransport t = transport_psi(inst, f_full, g, eps);
    CHECK(t.branch == 2);
    for (std::size_t i = 0; i < inst.domain.size(); ++i)
        CHECK(t.g_prime.values[static_cast<std::size_t>(inst.domain[i])] == g[i]);
    const double lip_rel = std::fabs(t.g_prime.lip_achieved - lip_g) / lip_g;
    CHECK(lip_rel <= 1e-6);
    for (std::size_t i = 0; i < f_full.values.size(); ++i)
        CHECK(euclidean_distance(f_full.values[i], t.g_prime.values[i]) < 4.0 * pc.delta);
}

TEST_CASE("extend_point tracks a grid-search oracle on random ball systems") {
    // V is 1-Lipschitz in y, so the grid minimum is within step/sqrt(2) of V*
    Rng rng(52u);
    for (int rep = 0; rep < 6; ++rep) {
        std::vector<BallConstraint> balls;
        const int k = 2 + rng.uniform_int(0, 3);
        for (int i = 0; i < k; ++i)
            balls.push_back({{rng.uniform(), rng.uniform()}, rng.uniform(0.1, 0.6)});
        MinimaxPoint mm = extend_point(balls, 1.0);
        auto v_of = [&](double x, double y) {
            double v = -1e300;
            for (const auto& b : balls) {
                const double dx = x - b.center[0], dy = y - b.center[1];
                v = std::max(v, std::sqrt(dx * dx + dy * dy) - b.radius);
            }
            return v;
        };
        const double step = 0.005;
        double grid_best = 1e300;
        for (double x = -1.0; x <= 2.0; x += step)
            for (double y = -1.0; y <= 2.0; y += step) grid_best = std::min(grid_best, v_of(x, y));
        CHECK(mm.residual <= grid_best + 1e-7);        // at least as good as the grid
        CHECK(mm.residual >= grid_best - step);         // and no better than V* can be
    }
}

TEST_CASE("kirszbraun on a single-point space is the identity") {
    EuclideanInstance inst = EuclideanInstance::from_points({{0.3, 0.4}}, {0}, {{1.0}});
    EuclideanExtension ext = kirszbraun_extend(inst, 1.0);
    CHECK(ext.values.size() == 1);
    CHECK(ext.values[0] == VecD{1.0});
    CHECK(ext.lip_achieved == 0.0);
}

TEST_CASE("psi_constants realizes the documented formulas") {
    Rng rng(53u);
    EuclideanInstance inst = random_instance(rng, 8, 4, 2, 2, 1.0);
    const double lip_a = lip_constant(inst.partial_map());
    REQUIRE(lip_a > 0.0);
    EuclideanExtension f_full = kirszbraun_extend(inst, lip_a);
    const double eps = 0.4;
    PsiConstants c = psi_constants(inst, f_full, eps);

    // the bound M = max(1, sup |z - f(x)|) with z the value at the lowest A index
    const int z_index = *std::min_element(inst.domain.begin(), inst.domain.end());
    double m = 1.0;
    for (const auto& v : f_full.values)
        m = std::max(m, euclidean_distance(f_full.values[static_cast<std::size_t>(z_index)], v));
    CHECK(c.m_bound == m);

    // s = 1 - 2^-k with the smallest k making (1-s)/s^2 < eps^2 / (32 M (4M+1))
    const double rhs = eps * eps / (32.0 * m * (4.0 * m + 1.0));
    const double oms = std::ldexp(1.0, -c.s_exponent);
    CHECK(c.s == 1.0 - oms);
    CHECK(oms / ((1.0 - oms) * (1.0 - oms)) < rhs);
    if (c.s_exponent > 1) {
        const double prev = std::ldexp(1.0, -(c.s_exponent - 1));
        CHECK(prev / ((1.0 - prev) * (1.0 - prev)) >= rhs);
    }

    // delta = min(half witness gap, eps^2 s^2 / (32 (4M+1)))
    const double d0 = inst.source.distance(c.witness_a, c.witness_b);
    const double dy0 = euclidean_distance(f_full.values[static_cast<std::size_t>(c.witness_a)],
                                          f_full.values[static_cast<std::size_t>(c.witness_b)]);
    const double delta1 = 0.5 * (dy0 - c.s * c.lip_full * d0);
    const double delta2 = eps * eps * c.s * c.s / (32.0 * (4.0 * m + 1.0));
    CHECK(c.delta == std::min(delta1, delta2));

    // the witness pair attains the Lipschitz constant over A
    CHECK(dy0 / d0 == doctest::Approx(lip_a).epsilon(1e-12));
}

TEST_CASE("transport_psi rejects a reference whose restriction is not extremal") {
    // Lip(f, A) strictly below Lip(f, X) violates the hypothesis
    EuclideanInstance inst = EuclideanInstance::from_points(
        {{0.0}, {1.0}, {2.0}}, {0, 1}, {{0.0}, {0.1}});
    EuclideanExtension f_full;
    f_full.values = {{0.0}, {0.1}, {1.1}};  // slope 1 off A, slope 0.1 on A
    f_full.lip_achieved = 1.0;
    std::vector<VecD> g{{0.0}, {0.1}};
    CHECK_THROWS_AS(transport_psi(inst, f_full, g, 0.3), PreconditionError);
}

TEST_CASE("min_norm_projection basics") {
    HullVertexSet square{{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}};
    // a point inside the hull comes back bitwise
    const VecD inside{0.25, 0.75};
    CHECK(min_norm_projection(inside, square) == inside);
    // single-vertex hull
    HullVertexSet vertex{{{2.0, 3.0}}};
    const VecD far{-1.0, 0.0};
    CHECK(min_norm_projection(far, vertex) == VecD{2.0, 3.0});
    // hull vertices project to themselves
    CHECK(min_norm_projection(square.vertices[2], square) == square.vertices[2]);
}

TEST_CASE("min_norm_projection of (2,0) onto the unit square is (1,0)") {
    HullVertexSet square{{{0.0, 0.0}, {1.0, 0.0}, {1.0, 1.0}, {0.0, 1.0}}};
    const VecD p{2.0, 0.0};
    const VecD proj = min_norm_projection(p, square);
    CHECK(proj[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::fabs(proj[1]) <= 1e-12);

    // oracle: dense boundary sampling of the square
    double best = 1e300;
    for (double t = 0.0; t <= 1.0; t += 1e-4) {
        for (const VecD& q : {VecD{t, 0.0}, VecD{t, 1.0}, VecD{0.0, t}, VecD{1.0, t}})
            best = std::min(best, euclidean_distance(p, q));
    }
    CHECK(euclidean_distance(p, proj) <= best + 1e-9);
}

TEST_CASE("hull_hausdorff basics and contraction under hulls") {
    HullVertexSet a{{{0.0}}}, b{{{1.0}}};
    CHECK(hull_hausdorff(a, a) == 0.0);
    CHECK(hull_hausdorff(a, b) == doctest::Approx(1.0));

    Rng rng(48u);
    EuclideanGeometry g2{2};
    for (int rep = 0; rep < 30; ++rep) {
        HullVertexSet v1, v2;
        for (int i = 0; i <= rng.uniform_int(0, 4); ++i)
            v1.vertices.push_back({rng.uniform(), rng.uniform()});
        for (int i = 0; i <= rng.uniform_int(0, 4); ++i)
            v2.vertices.push_back({rng.uniform(), rng.uniform()});
        const double hh = hull_hausdorff(v1, v2);
        const double h = hausdorff<EuclideanGeometry>(v1.vertices, v2.vertices, g2);
        CHECK(hh <= h + 1e-9);
    }
}

TEST_CASE("alpha_c_compose: containment, Lipschitz non-increase, A-values") {
    Rng rng(49u);
    for (int rep = 0; rep < 8; ++rep) {
        EuclideanInstance inst = random_instance(rng, 8, 4, 2, 2, 0.8);
        EuclideanExtension ext = kirszbraun_extend(inst, 1.0);
        HullVertexSet hull{inst.values};
        EuclideanExtension out = alpha_c_compose(inst.source, ext, hull, inst.target_dim);
        for (std::size_t i = 0; i < inst.domain.size(); ++i)
            CHECK(out.values[static_cast<std::size_t>(inst.domain[i])] == inst.values[i]);
        CHECK(out.lip_achieved <= ext.lip_achieved * (1.0 + 1e-9) + 1e-12);
        for (const auto& v : out.values) CHECK(hull_distance(v, hull) <= 1e-9);
    }
}

TEST_CASE("hull projection after a constant-preserving extension keeps the constant") {
    // projection cannot raise the constant, and the A-pairs that realize it
    // are fixed points of the projection, so equality survives
    Rng rng(54u);
    for (int rep = 0; rep < 6; ++rep) {
        EuclideanInstance inst = random_instance(rng, 8, 4, 2, 2, 0.85);
        const double lip_a = lip_constant(inst.partial_map());
        REQUIRE(lip_a > 0.0);
        EuclideanExtension ext = kirszbraun_extend(inst, lip_a);
        HullVertexSet hull{inst.values};
        EuclideanExtension out = alpha_c_compose(inst.source, ext, hull, inst.target_dim);
        CHECK(out.lip_achieved == doctest::Approx(lip_a).epsilon(1e-9));
        for (const auto& v : out.values) CHECK(hull_distance(v, hull) <= 1e-9);
        for (std::size_t i = 0; i < inst.domain.size(); ++i)
            CHECK(out.values[static_cast<std::size_t>(inst.domain[i])] == inst.values[i]);
    }
}

TEST_CASE("alpha_c_compose: constant map collapses to the single hull point") {
    EuclideanInstance inst = EuclideanInstance::from_points(
        {{0.0}, {1.0}, {2.5}}, {0}, {{3.0}});
    EuclideanExtension ext = kirszbraun_extend(inst, 1.0);
    ext.values[1] = {3.4};
    ext.values[2] = {2.2};  // force off-hull values
    ext.lip_achieved = lip_of(inst, ext.values);
    HullVertexSet hull{inst.values};
    EuclideanExtension out = alpha_c_compose(inst.source, ext, hull, 1);
    for (const auto& v : out.values) CHECK(v == VecD{3.0});
}

TEST_CASE("reshetnyak_slack") {
    const VecD x{0.0, 0.0}, y{1.0, 2.0};
    CHECK(reshetnyak_slack(x, y, x, y) == 0.0);
    CHECK(reshetnyak_slack(x, x, x, x) == 0.0);
    Rng rng(50u);
    double min_slack = 1e300;
    for (int rep = 0; rep < 10000; ++rep) {
        auto pt = [&] { return VecD{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)}; };
        min_slack = std::min(min_slack, reshetnyak_slack(pt(), pt(), pt(), pt()));
    }
    CHECK(min_slack >= -1e-12);
}

TEST_CASE("projection_stability_slack: singleton closed form") {
    const double h = 0.35;
    HullVertexSet v1{{{0.0}}}, v2{{{h}}};
    const VecD z{h / 2.0};
    const double r1 = h / 2.0, r2 = 0.1;
    const VecD x = z;
    const double slack = projection_stability_slack(v1, v2, z, r1, x, r2);
    // projections are the singletons themselves: slack = 2 (r1+r2) h - h^2
    CHECK(slack == doctest::Approx(2.0 * (r1 + r2) * h - h * h).epsilon(1e-12));
    CHECK(slack >= 0.0);
}

TEST_CASE("projection_stability_slack: containment preconditions enforced") {
    HullVertexSet v1{{{0.0}}}, v2{{{1.0}}};
    const VecD z{0.0};
    CHECK_THROWS_AS(projection_stability_slack(v1, v2, z, 0.5, z, 0.5), PreconditionError);
}

TEST_CASE("projection_stability_slack: identical hulls give a zero projection gap") {
    HullVertexSet v{{{0.2, 0.1}, {0.9, 0.4}, {0.5, 1.0}}};
    const VecD z{0.5, 0.5};
    double r1 = 1e-3;
    for (const auto& p : v.vertices) r1 = std::max(r1, euclidean_distance(p, z));
    const VecD x{1.7, -0.3};
    const double slack = projection_stability_slack(v, v, z, r1, x, euclidean_distance(x, z));
    CHECK(slack >= 0.0);  // both terms vanish up to solver noise
    CHECK(slack <= 1e-9);
}

TEST_CASE("projection_stability_slack: random polytope pairs stay nonnegative") {
    Rng rng(51u);
    for (int rep = 0; rep < 60; ++rep) {
        HullVertexSet v1, v2;
        for (int i = 0; i <= rng.uniform_int(0, 4); ++i)
            v1.vertices.push_back({rng.uniform(), rng.uniform(), rng.uniform()});
        for (int i = 0; i <= rng.uniform_int(0, 4); ++i)
            v2.vertices.push_back({rng.uniform(), rng.uniform(), rng.uniform()});
        VecD z{rng.uniform(), rng.uniform(), rng.uniform()};
        double r1 = 1e-3;
        for (const auto& v : v1.vertices) r1 = std::max(r1, euclidean_distance(v, z));
        for (const auto& v : v2.vertices) r1 = std::max(r1, euclidean_distance(v, z));
        VecD x{rng.uniform(), rng.uniform(), rng.uniform()};
        const double r2 = std::max(euclidean_distance(x, z), 1e-3);
        CHECK(projection_stability_slack(v1, v2, z, r1, x, r2) >= -1e-9);
    }
}

TEST_CASE("SlackReport carries a witness exactly when the minimum dips below -1e-9") {
    SlackReport ok = SlackReport::build("tag", {0.5, 1e-10, 0.2});
    CHECK(!ok.witness.has_value());
    CHECK(ok.min_slack == 1e-10);
    SlackReport bad = SlackReport::build("tag", {0.5, -1e-6, 0.2});
    CHECK(bad.witness.has_value());
    CHECK(*bad.witness == 1);
}
