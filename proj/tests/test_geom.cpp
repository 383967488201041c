#include <random>

#include "doctest.h"
#include "orthotile/errors.hpp"
#include "orthotile/geom.hpp"

using namespace orthotile;

namespace {

Polygon unit_square() { return Polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}); }

}  // namespace

TEST_CASE("polygon_contains classifies interior, boundary and exterior points") {
    Polygon sq = unit_square();
    CHECK(polygon_contains(sq, {0.5, 0.5}, 1e-12) == Containment::inside);
    CHECK(polygon_contains(sq, {0.0, 0.5}, 1e-12) == Containment::boundary);
    CHECK(polygon_contains(sq, {2.0, 2.0}, 1e-12) == Containment::outside);
}

TEST_CASE("clockwise input is reversed") {
    Polygon p({{0, 0}, {0, 1}, {1, 1}, {1, 0}});
    CHECK(signed_area(p.vertices()) > 0);
    CHECK(p.area() == doctest::Approx(1.0));
}

TEST_CASE("invalid polygons are rejected") {
    CHECK_THROWS_AS(Polygon({{0, 0}, {1, 0}}), InputError);
    CHECK_THROWS_AS(Polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), InputError);  // bow tie
    CHECK_THROWS_AS(Polygon({{0, 0}, {1, 0}, {2, 0}}), InputError);          // zero area
    CHECK_THROWS_AS(Polygon({{0, 0}, {1, 0}, {1, 0}, {0, 1}}), InputError);  // repeated vertex
    CHECK_THROWS_AS(Polygon({{0, 0}, {1, 0}, {NAN, 1}}), InputError);
}

TEST_CASE("hausdorff distance examples") {
    Polyline a{{0, 0}, {1, 0}};
    CHECK(hausdorff_distance(a, a) == 0.0);
    CHECK(hausdorff_distance(a, {{0, 1}, {1, 1}}) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hausdorff_distance(a, {{0.5, 0.3}}) == doctest::Approx(std::hypot(0.5, 0.3)).epsilon(1e-12));
    CHECK_THROWS_AS(hausdorff_distance({}, a), InputError);
}

TEST_CASE("hausdorff distance agrees with dense sampling") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-1, 1);
    for (int trial = 0; trial < 20; ++trial) {
        Polyline a, b;
        for (int k = 0; k < 4; ++k) a.push_back({u(rng), u(rng)});
        for (int k = 0; k < 3; ++k) b.push_back({u(rng), u(rng)});
        auto sampled = [](const Polyline& p, const Polyline& q) {
            double worst = 0.0;
            for (std::size_t s = 0; s + 1 < p.size(); ++s)
                for (int i = 0; i <= 20000; ++i) worst = std::max(worst, point_polyline_distance(lerp(p[s], p[s + 1], i / 20000.0), q));
            return worst;
        };
        double ref = std::max(sampled(a, b), sampled(b, a));
        double h = hausdorff_distance(a, b);
        CHECK(h >= ref - 1e-12);
        // Distance to a polyline is 1-Lipschitz, so sampling misses at most half a step.
        double step = 0.0;
        for (const Polyline* p : {&a, &b})
            for (std::size_t s = 0; s + 1 < p->size(); ++s) step = std::max(step, dist((*p)[s], (*p)[s + 1]) / 20000.0);
        CHECK(h <= ref + step / 2 + 1e-12);
        CHECK(h == hausdorff_distance(b, a));
    }
}

TEST_CASE("hausdorff triangle inequality on random triples") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0, 1);
    for (int trial = 0; trial < 50; ++trial) {
        Polyline p[3];
        for (auto& pl : p)
            for (int k = 0; k < 3; ++k) pl.push_back({u(rng), u(rng)});
        CHECK(hausdorff_distance(p[0], p[2]) <= hausdorff_distance(p[0], p[1]) + hausdorff_distance(p[1], p[2]) + 1e-9);
    }
}

TEST_CASE("containment matches the winding number on random convex polygons") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ang(0, 2 * M_PI), u(-1.5, 1.5);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<double> t(6);
        for (auto& x : t) x = ang(rng);
        std::sort(t.begin(), t.end());
        t.erase(std::unique(t.begin(), t.end()), t.end());
        std::vector<Point2> v;
        for (double x : t) v.push_back({std::cos(x), std::sin(x)});
        Polygon poly(v);
        Point2 p{u(rng), u(rng)};
        double winding = 0.0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            Point2 a = v[i] - p, b = v[(i + 1) % v.size()] - p;
            winding += std::atan2(cross(a, b), dot(a, b));
        }
        bool inside_w = std::abs(winding) > M_PI;
        Containment c = polygon_contains(poly, p, 1e-12);
        if (c != Containment::boundary) CHECK((c == Containment::inside) == inside_w);
    }
}

TEST_CASE("segment predicates") {
    CHECK(point_segment_distance({0.5, 1}, {0, 0}, {1, 0}) == doctest::Approx(1.0));
    CHECK(point_segment_distance({2, 0}, {0, 0}, {1, 0}) == doctest::Approx(1.0));
    CHECK(segments_intersect({0, 0}, {1, 1}, {0, 1}, {1, 0}));
    CHECK_FALSE(segments_intersect({0, 0}, {1, 0}, {0, 1}, {1, 1}));
    CHECK(segment_segment_distance({0, 0}, {1, 0}, {0, 1}, {1, 1}) == doctest::Approx(1.0));
    CHECK(polyline_distance({{0, 0}, {2, 0}}, {{1, 0.5}, {1, 3}}) == doctest::Approx(0.5));
}

TEST_CASE("segment index matches brute force distance") {
    Polyline ring;
    for (int k = 0; k <= 200; ++k) ring.push_back({std::cos(k * 2 * M_PI / 200), std::sin(k * 2 * M_PI / 200)});
    SegmentIndex idx(ring);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int i = 0; i < 500; ++i) {
        Point2 p{u(rng), u(rng)};
        CHECK(idx.distance(p) == doctest::Approx(point_polyline_distance(p, ring)).epsilon(1e-12));
    }
}

TEST_CASE("boundary arcs run counterclockwise") {
    Polygon sq = unit_square();
    auto a = locate_on_boundary(sq, {0, 1});
    auto b = locate_on_boundary(sq, {0, 0});
    Polyline arc = polygon_arc(sq, a, b);
    CHECK(polyline_length(arc) == doctest::Approx(1.0));
    Polyline back = polygon_arc(sq, b, a);
    CHECK(polyline_length(back) == doctest::Approx(3.0));
    CHECK(boundary_distance(sq, {0.5, 0.25}) == doctest::Approx(0.25));
}
