#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <random>

#include "doctest.h"
#include "gathersim/geometry.hpp"
#include "oracles.hpp"

using namespace gathersim;

namespace {

std::vector<Point> random_points(int n, std::mt19937_64& rng, double scale = 1.0) {
    std::uniform_real_distribution<double> u(-scale, scale);
    std::vector<Point> pts;
    for (int i = 0; i < n; ++i) pts.push_back({u(rng), u(rng)});
    return pts;
}

}  // namespace

TEST_CASE("sec: two points form a diameter") {
    std::vector<Point> pts{{0, 0}, {2, 0}};
    Circle c = smallest_enclosing_circle(pts);
    CHECK(distance(c.center, {1, 0}) < 1e-12);
    CHECK(c.radius == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sec: symmetric equilateral case on the unit circle") {
    std::vector<Point> pts;
    for (double deg : {90.0, 210.0, 330.0})
        pts.push_back({std::cos(deg * kPi / 180.0), std::sin(deg * kPi / 180.0)});
    Circle c = smallest_enclosing_circle(pts);
    CHECK(norm(c.center) < 1e-12);
    CHECK(c.radius == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("sec: seeded random sets match the exhaustive pair/triple oracle") {
    std::mt19937_64 rng(7);
    std::vector<Point> pts = random_points(7, rng);
    Circle got = smallest_enclosing_circle(pts);
    Circle want = oracles::sec_exhaustive(pts);
    CHECK(got.radius == doctest::Approx(want.radius).epsilon(1e-9));
    CHECK(distance(got.center, want.center) < 1e-9 * (1.0 + want.radius));

    for (int trial = 0; trial < 300; ++trial) {
        int n = 2 + static_cast<int>(rng() % 9);
        std::vector<Point> p = random_points(n, rng);
        Circle a = smallest_enclosing_circle(p);
        Circle b = oracles::sec_exhaustive(p);
        REQUIRE(a.radius == doctest::Approx(b.radius).epsilon(1e-9));
        double eps = eps_for(a.radius);
        for (Point q : p) REQUIRE(distance(q, a.center) <= a.radius + eps);
    }
}

TEST_CASE("sec: empty input is a domain error") {
    CHECK_THROWS_AS(smallest_enclosing_circle({}), std::domain_error);
}

TEST_CASE("sec: removing a non-boundary point never changes the circle") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Point> pts = random_points(8, rng);
        Circle c = smallest_enclosing_circle(pts);
        double eps = eps_for(c.radius);
        for (size_t i = 0; i < pts.size(); ++i) {
            if (std::abs(distance(pts[i], c.center) - c.radius) <= eps) continue;
            std::vector<Point> without = pts;
            without.erase(without.begin() + i);
            Circle c2 = smallest_enclosing_circle(without);
            REQUIRE(c2.radius == doctest::Approx(c.radius).epsilon(1e-9));
            REQUIRE(distance(c2.center, c.center) < 1e-9 * (1.0 + c.radius));
        }
    }
}

TEST_CASE("sec: result is independent of the input ordering") {
    std::mt19937_64 rng(4);
    std::vector<Point> pts = random_points(9, rng);
    Circle a = smallest_enclosing_circle(pts);
    for (int trial = 0; trial < 10; ++trial) {
        std::shuffle(pts.begin(), pts.end(), rng);
        Circle b = smallest_enclosing_circle(pts);
        CHECK(a.radius == b.radius);
        CHECK(a.center == b.center);
    }
}

TEST_CASE("boundary_points: interior points are excluded, output angle-sorted") {
    std::vector<Point> pts{{1, 1}, {-1, 1}, {0, 0}, {-1, -1}, {1, -1}};
    Circle sec = smallest_enclosing_circle(pts);
    auto b = boundary_points(pts, sec, eps_for(sec.radius));
    REQUIRE(b.size() == 4);
    // counterclockwise from +x axis: (1,1), (-1,1), (-1,-1), (1,-1)
    CHECK(b[0] == Point{1, 1});
    CHECK(b[1] == Point{-1, 1});
    CHECK(b[2] == Point{-1, -1});
    CHECK(b[3] == Point{1, -1});
}

TEST_CASE("boundary_points: a diameter pair is its own boundary") {
    std::vector<Point> pts{{0, 0}, {2, 0}};
    Circle sec = smallest_enclosing_circle(pts);
    CHECK(boundary_points(pts, sec, eps_for(sec.radius)).size() == 2);
}

TEST_CASE("boundary_points: seeded sets agree with the oracle's support") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<Point> pts = random_points(8, rng);
        Circle sec = smallest_enclosing_circle(pts);
        Circle want = oracles::sec_exhaustive(pts);
        double eps = eps_for(sec.radius);
        auto b = boundary_points(pts, sec, eps);
        size_t oracle_support = 0;
        for (Point p : pts)
            if (std::abs(distance(p, want.center) - want.radius) <= eps)
                ++oracle_support;
        REQUIRE(b.size() == oracle_support);
        REQUIRE(b.size() >= 2);
    }
}

TEST_CASE("circle_through_point_with_tangent: perpendicular case") {
    Line tangent{{0, 0}, {1, 0}};
    auto c = circle_through_point_with_tangent({0, 2}, {0, 0}, tangent, 1e-9);
    REQUIRE(c.has_value());
    CHECK(distance(c->center, {0, 1}) < 1e-12);
    CHECK(c->radius == doctest::Approx(1.0));
}

TEST_CASE("circle_through_point_with_tangent: off-axis point") {
    // |center-p| = |center-p*| with the center on the y-axis: 1+(1-c)^2 = c^2
    // gives c = 1.
    Line tangent{{0, 0}, {1, 0}};
    auto c = circle_through_point_with_tangent({1, 1}, {0, 0}, tangent, 1e-9);
    REQUIRE(c.has_value());
    CHECK(distance(c->center, {0, 1}) < 1e-12);
    CHECK(c->radius == doctest::Approx(1.0));
}

TEST_CASE("circle_through_point_with_tangent: p on the tangent line degenerates") {
    Line tangent{{0, 0}, {1, 0}};
    CHECK_FALSE(circle_through_point_with_tangent({1, 0}, {0, 0}, tangent, 1e-9));
}

TEST_CASE("circle_through_point_with_tangent: residual properties on seeded inputs") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
        Point p{u(rng), u(rng)};
        Point ps{u(rng), u(rng)};
        if (distance(p, ps) < 0.1) continue;
        double a = u(rng) * kPi;
        Line tangent{ps, {std::cos(a), std::sin(a)}};
        double eps = 1e-9;
        auto c = circle_through_point_with_tangent(p, ps, tangent, eps);
        if (!c) continue;
        double tol = 1e-9 * (1.0 + c->radius);
        REQUIRE(std::abs(distance(c->center, p) - c->radius) < tol);
        REQUIRE(std::abs(distance(c->center, ps) - c->radius) < tol);
        REQUIRE(std::abs(dist_to_line(c->center, tangent) - c->radius) < tol);
    }
}

TEST_CASE("arc_between: hint above a diameter picks the upper semicircle") {
    Circle unit{{0, 0}, 1.0};
    ArcPath arc = arc_between(unit, {1, 0}, {-1, 0}, {0, 1}, 1e-9);
    CHECK(arc.length() == doctest::Approx(kPi));
    CHECK(arc.ccw());
}

TEST_CASE("arc_between: quarter arc in the first quadrant") {
    Circle unit{{0, 0}, 1.0};
    ArcPath arc = arc_between(unit, {1, 0}, {0, 1}, {0.8, 0.8}, 1e-9);
    CHECK(arc.length() == doctest::Approx(kPi / 2));
}

TEST_CASE("arc_between: off-circle endpoint is a domain error") {
    Circle unit{{0, 0}, 1.0};
    CHECK_THROWS_AS(arc_between(unit, {1.5, 0}, {0, 1}, {1, 1}, 1e-9),
                    std::domain_error);
}

TEST_CASE("arc_between: seeded chords match the polyline length oracle") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(0.0, 2.0 * kPi);
    for (int trial = 0; trial < 50; ++trial) {
        Circle c{{u(rng) - kPi, u(rng) - kPi}, 0.2 + 0.3 * u(rng)};
        double a0 = u(rng), a1 = u(rng), ah = u(rng);
        Point a{c.center.x + c.radius * std::cos(a0), c.center.y + c.radius * std::sin(a0)};
        Point b{c.center.x + c.radius * std::cos(a1), c.center.y + c.radius * std::sin(a1)};
        Point h{c.center.x + c.radius * std::cos(ah), c.center.y + c.radius * std::sin(ah)};
        if (circ_dist(a0, a1) < 1e-3 || circ_dist(ah, a0) < 1e-3 ||
            circ_dist(ah, a1) < 1e-3)
            continue;
        ArcPath arc = arc_between(c, a, b, h, 1e-9);
        double polyline = oracles::polyline_length(oracles::sample_path(Path{arc}, 10000));
        REQUIRE(arc.length() == doctest::Approx(polyline).epsilon(1e-6));
        // the hint lies on the chosen arc
        double off = arc.ccw() ? ccw_delta(arc.start_angle, ah)
                               : ccw_delta(ah, arc.start_angle);
        REQUIRE(off <= arc.sweep() + 1e-9);
    }
}

TEST_CASE("point_along_path: segment interpolation") {
    Path seg = Segment{{0, 0}, {4, 0}};
    Point p = point_along_path(seg, 1.0);
    CHECK(distance(p, {1, 0}) < 1e-12);
}

TEST_CASE("point_along_path: quarter of the upper unit semicircle") {
    ArcPath arc{Circle{{0, 0}, 1.0}, 0.0, kPi, ArcOrientation::counterclockwise};
    Point p = point_along_path(Path{arc}, kPi / 2);
    CHECK(distance(p, {0, 1}) < 1e-12);
}

TEST_CASE("point_along_path: out-of-range distance is a domain error") {
    Path seg = Segment{{0, 0}, {4, 0}};
    CHECK_THROWS_AS(point_along_path(seg, 4.5), std::domain_error);
    CHECK_THROWS_AS(point_along_path(seg, -0.5), std::domain_error);
}

TEST_CASE("point_along_path: random arc fractions match the polyline oracle") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        double r = 0.3 + u01(rng);
        ArcPath arc{Circle{{u01(rng), u01(rng)}, r}, u01(rng) * 2 * kPi,
                    u01(rng) * 2 * kPi,
                    u01(rng) < 0.5 ? ArcOrientation::clockwise
                                   : ArcOrientation::counterclockwise};
        if (arc.sweep() < 1e-3 || arc.sweep() > 2 * kPi - 1e-3) continue;
        auto poly = oracles::sample_path(Path{arc}, 20000);
        double d = u01(rng) * arc.length();
        Point got = point_along_path(Path{arc}, d);
        Point want = oracles::polyline_at(poly, d);
        REQUIRE(distance(got, want) < 1e-6);
    }
}

TEST_CASE("point_along_path: sub-path length equals the parameter gap") {
    std::mt19937_64 rng(19);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        ArcPath arc{Circle{{0, 0}, 0.5 + u01(rng)}, u01(rng) * 2 * kPi,
                    u01(rng) * 2 * kPi, ArcOrientation::counterclockwise};
        if (arc.sweep() < 1e-3) continue;
        double len = arc.length();
        double d1 = u01(rng) * len;
        double d2 = u01(rng) * len;
        if (d1 > d2) std::swap(d1, d2);
        Point p1 = point_along_path(Path{arc}, d1);
        Point p2 = point_along_path(Path{arc}, d2);
        // reconstruct the swept angle between the two returned points
        double a1 = angle_of(p1 - arc.circle.center);
        double a2 = angle_of(p2 - arc.circle.center);
        double sub = arc.circle.radius * ccw_delta(a1, a2);
        if (d2 - d1 > 1e-6)
            REQUIRE(sub == doctest::Approx(d2 - d1).epsilon(1e-9));
    }
}

TEST_CASE("paths_intersect: two radii meeting at an excluded center") {
    Path r1 = Segment{{1, 0}, {0, 0}};
    Path r2 = Segment{{0, 1}, {0, 0}};
    std::vector<Point> excl{{0, 0}};
    CHECK_FALSE(paths_intersect(r1, r2, excl, 1e-9));
    CHECK(paths_intersect(r1, r2, {}, 1e-9));
}

TEST_CASE("paths_intersect: crossing square diagonals") {
    Path d1 = Segment{{0, 0}, {1, 1}};
    Path d2 = Segment{{1, 0}, {0, 1}};
    CHECK(paths_intersect(d1, d2, {}, 1e-9));
}

TEST_CASE("paths_intersect: collinear overlap and disjoint segments") {
    Path a = Segment{{0, 0}, {2, 0}};
    Path b = Segment{{1, 0}, {3, 0}};
    CHECK(paths_intersect(a, b, {}, 1e-9));
    Path c = Segment{{3, 1}, {4, 1}};
    CHECK_FALSE(paths_intersect(a, c, {}, 1e-9));
}

TEST_CASE("paths_intersect: segment touching an arc tangentially") {
    ArcPath arc{Circle{{0, 0}, 1.0}, -kPi / 3, kPi / 3,
                ArcOrientation::counterclockwise};
    Path seg = Segment{{1, -1}, {1, 1}};  // tangent to the circle at (1,0)
    CHECK(paths_intersect(seg, Path{arc}, {}, 1e-9));
    std::vector<Point> excl{{1, 0}};
    CHECK_FALSE(paths_intersect(seg, Path{arc}, excl, 1e-9));
}

TEST_CASE("paths_intersect: tangent circles sharing only the destination") {
    // Two circles tangent to the same line at the origin, as the chain
    // construction produces: the arcs meet only at the destination.
    Circle g1{{0, 0.5}, 0.5};
    Circle g2{{0, 1.0}, 1.0};
    ArcPath a1 = arc_between(g1, {0.5, 0.5}, {0, 0}, {0.4, 0.2}, 1e-9);
    ArcPath a2 = arc_between(g2, {1.0, 1.0}, {0, 0}, {0.9, 0.5}, 1e-9);
    std::vector<Point> excl{{0, 0}};
    CHECK_FALSE(paths_intersect(Path{a1}, Path{a2}, excl, 1e-9));
    CHECK(paths_intersect(Path{a1}, Path{a2}, {}, 1e-9));
    // dense polyline oracle: separated away from the excluded destination
    double sep = oracles::min_path_separation(Path{a1}, Path{a2}, excl, 0.2);
    CHECK(sep > 5e-3);
}

TEST_CASE("paths_intersect: crossing check agrees with the polyline oracle") {
    Path d1 = Segment{{0, 0}, {1, 1}};
    Path d2 = Segment{{1, 0}, {0, 1}};
    double sep = oracles::min_path_separation(d1, d2, {}, 0.0);
    CHECK(sep < 2e-3);
}
