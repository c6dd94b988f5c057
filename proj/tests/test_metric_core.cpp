#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"

#include "lipext/metric_core.hpp"
#include "lipext/rng.hpp"

using namespace lipext;

TEST_CASE("validate_metric accepts a two-point metric") {
    MetricValidation v = validate_metric({{0.0, 1.0}, {1.0, 0.0}});
    CHECK(v.ok());
    CHECK(v.space->size() == 2);
    CHECK(v.space->distance(0, 1) == 1.0);
}

TEST_CASE("validate_metric reports a triangle violation") {
    // d(0,1) = 3 exceeds d(0,2) + d(2,1) = 2
    MetricValidation v = validate_metric({{0, 3, 1}, {3, 0, 1}, {1, 1, 0}});
    CHECK(!v.ok());
    bool found = false;
    for (const auto& viol : v.violations)
        if (viol.kind == MetricViolation::Kind::Triangle) found = true;
    CHECK(found);
}

TEST_CASE("validate_metric rejects malformed tables by throwing") {
    CHECK_THROWS_AS(validate_metric({{0.0, 1.0}}), PreconditionError);
    const double nan = std::nan("");
    CHECK_THROWS_AS(validate_metric({{0.0, nan}, {nan, 0.0}}), PreconditionError);
}

TEST_CASE("shortest-path closure of a random weighted graph is a metric") {
    // oracle: Floyd-Warshall closure, then re-check the axioms
    Rng rng(7u);
    for (int rep = 0; rep < 20; ++rep) {
        const int n = 2 + rng.uniform_int(0, 6);
        std::vector<std::vector<double>> w(n, std::vector<double>(n, 0.0));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) w[i][j] = w[j][i] = rng.uniform(0.1, 2.0);
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j) w[i][j] = std::min(w[i][j], w[i][k] + w[k][j]);
        CHECK(validate_metric(w).ok());
    }
}

namespace {

FiniteMetricSpace line_space() {
    // three points 0, 1, 2 on the real line
    return metric_from_table(3, std::vector<double>{0, 1, 2, 1, 0, 1, 2, 1, 0});
}

}  // namespace

TEST_CASE("lip_constant basics") {
    EuclideanGeometry g1{1};
    PartialMap<EuclideanGeometry> constant{line_space(), {0, 1, 2}, {{5.0}, {5.0}, {5.0}}, g1};
    CHECK(lip_constant(constant) == 0.0);

    // identity embedding of the three-point line
    PartialMap<EuclideanGeometry> ident{line_space(), {0, 1, 2}, {{0.0}, {1.0}, {2.0}}, g1};
    CHECK(lip_constant(ident) == 1.0);

    // A = {0, 2}, f(0) = 0, f(2) = 1: single pair ratio 1/2
    PartialMap<EuclideanGeometry> half{line_space(), {0, 2}, {{0.0}, {1.0}}, g1};
    CHECK(lip_constant(half) == 0.5);

    // singleton B
    std::vector<int> b{1};
    CHECK(lip_constant(ident, b) == 0.0);
}

TEST_CASE("lip_constant rejects identical source points with different values") {
    FiniteMetricSpace dup = metric_from_table(3, std::vector<double>{0, 0, 1, 0, 0, 1, 1, 1, 0});
    EuclideanGeometry g1{1};
    PartialMap<EuclideanGeometry> bad{dup, {0, 1}, {{0.0}, {1.0}}, g1};
    CHECK_THROWS_AS(lip_constant(bad), PreconditionError);
    PartialMap<EuclideanGeometry> fine{dup, {0, 1}, {{3.0}, {3.0}}, g1};
    CHECK(lip_constant(fine) == 0.0);
}

TEST_CASE("lip_constant is monotone in the index set") {
    Rng rng(11u);
    EuclideanGeometry g2{2};
    for (int rep = 0; rep < 25; ++rep) {
        std::vector<VecD> pts;
        for (int i = 0; i < 5; ++i) pts.push_back({rng.uniform(), rng.uniform()});
        FiniteMetricSpace space = metric_from_points(pts);
        std::vector<VecD> vals;
        for (int i = 0; i < 5; ++i) vals.push_back({rng.uniform(), rng.uniform()});
        PartialMap<EuclideanGeometry> f{space, {0, 1, 2, 3, 4}, vals, g2};
        std::vector<int> b1{0, 2}, b2{0, 1, 2, 4};
        CHECK(lip_constant(f, b1) <= lip_constant(f, b2) + 1e-15);
    }
}

TEST_CASE("sup_distance basics and enumeration oracle") {
    SupNormGeometry g2{2};
    std::vector<VecD> f{{0.0, 0.0}, {1.0, 1.0}};
    CHECK(sup_distance<SupNormGeometry>(f, f, g2) == 0.0);

    // translation by a vector of sup-norm 0.3
    std::vector<VecD> shifted{{0.3, 0.1}, {1.3, 1.1}};
    CHECK(sup_distance<SupNormGeometry>(f, shifted, g2) == doctest::Approx(0.3).epsilon(1e-15));

    Rng rng(3u);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<VecD> a, b;
        for (int i = 0; i < 6; ++i) {
            a.push_back({rng.uniform(), rng.uniform()});
            b.push_back({rng.uniform(), rng.uniform()});
        }
        double brute = 0.0;
        for (int i = 0; i < 6; ++i) brute = std::max(brute, supnorm_distance(a[i], b[i]));
        CHECK(sup_distance<SupNormGeometry>(a, b, g2) == brute);
    }
}

TEST_CASE("sup_distance satisfies the triangle inequality on map space") {
    Rng rng(5u);
    EuclideanGeometry g2{2};
    for (int rep = 0; rep < 50; ++rep) {
        std::vector<VecD> f, g, h;
        for (int i = 0; i < 5; ++i) {
            f.push_back({rng.uniform(), rng.uniform()});
            g.push_back({rng.uniform(), rng.uniform()});
            h.push_back({rng.uniform(), rng.uniform()});
        }
        const double fg = sup_distance<EuclideanGeometry>(f, g, g2);
        const double gh = sup_distance<EuclideanGeometry>(g, h, g2);
        const double fh = sup_distance<EuclideanGeometry>(f, h, g2);
        CHECK(fh <= fg + gh + 1e-15);
    }
}

TEST_CASE("hausdorff basics") {
    EuclideanGeometry g1{1};
    std::vector<VecD> p{{0.0}}, q{{1.0}};
    CHECK(hausdorff<EuclideanGeometry>(p, p, g1) == 0.0);
    CHECK(hausdorff<EuclideanGeometry>(p, q, g1) == 1.0);
    // one-sided sups are asymmetric: P = {0, 10}, Q = {0}
    std::vector<VecD> p2{{0.0}, {10.0}};
    CHECK(hausdorff<EuclideanGeometry>(p2, p, g1) == 10.0);
    CHECK_THROWS_AS(hausdorff<EuclideanGeometry>({}, p, g1), PreconditionError);
}

TEST_CASE("hausdorff is a metric on finite point sets") {
    Rng rng(13u);
    EuclideanGeometry g2{2};
    auto pts = [&](int k) {
        std::vector<VecD> v;
        for (int i = 0; i < k; ++i) v.push_back({rng.uniform(), rng.uniform()});
        return v;
    };
    for (int rep = 0; rep < 40; ++rep) {
        auto a = pts(1 + rng.uniform_int(0, 4));
        auto b = pts(1 + rng.uniform_int(0, 4));
        auto c = pts(1 + rng.uniform_int(0, 4));
        const double ab = hausdorff<EuclideanGeometry>(a, b, g2);
        const double ba = hausdorff<EuclideanGeometry>(b, a, g2);
        CHECK(ab == ba);
        CHECK(ab <= hausdorff<EuclideanGeometry>(a, c, g2) +
                        hausdorff<EuclideanGeometry>(c, b, g2) + 1e-12);
        CHECK(hausdorff<EuclideanGeometry>(a, a, g2) == 0.0);
    }
}

TEST_CASE("product_distance") {
    FiniteMetricSpace space = line_space();
    // equal plane coordinates reproduce the source distance exactly
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(product_distance(space, i, {0.4, -1.0}, j, {0.4, -1.0}) == space.distance(i, j));
    // same source point, plane gap eps
    CHECK(product_distance(space, 1, {0.0, 0.0}, 1, {0.0, 0.25}) == 0.25);
    // 3-4-5
    FiniteMetricSpace two = metric_from_table(2, std::vector<double>{0, 3, 3, 0});
    CHECK(product_distance(two, 0, {0.0, 0.0}, 1, {4.0, 0.0}) == 5.0);
}
