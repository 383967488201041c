#include <algorithm>
#include <cmath>

#include "doctest.h"
#include "fixtures.hpp"
#include "orthotile/errors.hpp"
#include "orthotile/tiling.hpp"

using namespace orthotile;

TEST_CASE("two column strip tiles into four half squares") {
    auto tb = build_tiling(fixture::strip());
    const auto& t = tb.tiling;
    CHECK(t.L == doctest::Approx(1.0).epsilon(1e-12));
    REQUIRE(t.tiles.size() == 5);
    CHECK(t.degenerate_count == 1);
    for (const auto& tile : t.tiles) {
        if (is_degenerate(tile, t.L)) {
            CHECK(tile.width() == doctest::Approx(0.0));
            continue;
        }
        CHECK(tile.width() == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(tile.height() == doctest::Approx(0.5).epsilon(1e-12));
    }
    auto r = verify_tiling(t);
    CHECK(r.ok());
    CHECK(r.area_sum == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("square lattice box tiles into equal squares") {
    for (long n : {2, 3, 5}) {
        auto tb = build_tiling(fixture::lattice_box(n, n + 1));
        const auto& t = tb.tiling;
        CHECK(t.L == doctest::Approx(1.0).epsilon(1e-12));
        std::size_t squares = 0;
        for (const auto& tile : t.tiles) {
            if (is_degenerate(tile, t.L)) continue;
            CHECK(tile.width() == doctest::Approx(1.0 / n).epsilon(1e-10));
            CHECK(tile.height() == doctest::Approx(1.0 / n).epsilon(1e-10));
            ++squares;
        }
        CHECK(squares == static_cast<std::size_t>(n * n));
        CHECK(t.degenerate_count == t.tiles.size() - squares);
        CHECK(verify_tiling(t).ok());
    }
}

TEST_CASE("every tile has the aspect ratio of its face") {
    auto ga = grid_approximation(fixture::l_shape(), 0.125);
    auto tb = build_tiling(ga.map);
    const auto& m = ga.map.map();
    for (const auto& tile : tb.tiling.tiles) {
        if (is_degenerate(tile, tb.tiling.L)) continue;
        FaceRoles r = m.roles(tile.face);
        double ratio = dist(m.pos(r.w1), m.pos(r.w2)) / dist(m.pos(r.v1), m.pos(r.v2));
        CHECK(tile.height() / tile.width() == doctest::Approx(ratio).epsilon(1e-8));
    }
    auto rep = verify_tiling(tb.tiling);
    CHECK(rep.ok());
    CHECK(rep.max_containment_excess <= 1e-12 * std::max(tb.tiling.L, 1.0));
}

TEST_CASE("verification names the overlapping pair") {
    auto tb = build_tiling(fixture::strip());
    Tiling t = tb.tiling;
    std::size_t widened = npos;
    for (std::size_t i = 0; i < t.tiles.size(); ++i)
        if (!is_degenerate(t.tiles[i], t.L) && t.tiles[i].x0 < 0.25 && t.tiles[i].y0 < 0.25) widened = i;
    REQUIRE(widened != npos);
    t.tiles[widened].dx += 0.1;
    auto r = verify_tiling(t);
    CHECK_FALSE(r.overlap_ok);
    CHECK_FALSE(r.area_ok);
    REQUIRE(r.pair_count == 1);
    CHECK((r.pairs[0].a == widened || r.pairs[0].b == widened));
    CHECK(r.pairs[0].area == doctest::Approx(0.05));

    Tiling out = tb.tiling;
    out.tiles[widened].x0 -= 0.2;
    auto ro = verify_tiling(out);
    CHECK_FALSE(ro.containment_ok);
    CHECK(ro.max_containment_excess == doctest::Approx(0.2));
}

TEST_CASE("empty tiling fails the area check only") {
    Tiling t;
    t.L = 1.0;
    auto r = verify_tiling(t);
    CHECK(r.containment_ok);
    CHECK(r.overlap_ok);
    CHECK_FALSE(r.area_ok);
}

TEST_CASE("tiling json round trip") {
    auto tb = build_tiling(fixture::lattice_box(3, 3));
    Tiling back = tiling_from_json(tiling_to_json(tb.tiling));
    CHECK(back.L == tb.tiling.L);
    REQUIRE(back.tiles.size() == tb.tiling.tiles.size());
    for (std::size_t i = 0; i < back.tiles.size(); ++i) {
        CHECK(back.tiles[i].x0 == tb.tiling.tiles[i].x0);
        CHECK(back.tiles[i].dy == tb.tiling.tiles[i].dy);
        CHECK(back.tiles[i].face == tb.tiling.tiles[i].face);
    }
    CHECK(back.degenerate_count == tb.tiling.degenerate_count);
    CHECK_THROWS_AS(tiling_from_json(Json::parse(R"({"L": 1})")), InputError);
    CHECK_THROWS_AS(tiling_from_json(Json::parse(R"({"L": -1, "tiles": []})")), InputError);
}

TEST_CASE("interpolated map reproduces vertex values and stays in the rectangle") {
    auto m = fixture::lattice_box(4, 5);
    auto tb = build_tiling(m);
    InterpolatedMap F(m, tb.h, tb.h_tilde.field);
    const auto& pg = m.primal();
    for (std::size_t i = 0; i < pg.vertex_count(); ++i) {
        auto z = F.evaluate(pg.position(i));
        CHECK(z.real() == doctest::Approx(tb.h.values[i]).epsilon(1e-12));
    }
    const auto& dg = m.dual();
    for (std::size_t i = 0; i < dg.vertex_count(); ++i) {
        auto z = F.evaluate(dg.position(i));
        CHECK(z.imag() == doctest::Approx(tb.h_tilde.field.values[i]).epsilon(1e-12));
    }
    // Away from the corners the tiling map of a square lattice box is affine: x maps to x / 4, y to (y - 0.5) / 4.
    for (double x : {1.3, 1.7, 2.5})
        for (double y : {1.4, 2.2, 3.1}) {
            auto z = evaluate_map(F, {x, y});
            CHECK(z.real() == doctest::Approx(x / 4).epsilon(1e-9));
            CHECK(z.imag() == doctest::Approx((y - 0.5) / 4).epsilon(1e-9));
        }
    CHECK(F.locate({-1, -1}) == npos);
    CHECK_THROWS_AS(F.evaluate({-1, -1}), InputError);
    CHECK(F.tiling_discrepancy(tb.tiling) <= 0.5 + 1e-12);
}

TEST_CASE("point on a shared side belongs to the lowest face") {
    auto m = fixture::lattice_box(3, 3);
    auto tb = build_tiling(m);
    InterpolatedMap F(m, tb.h, tb.h_tilde.field);
    const auto& mm = m.map();
    for (VertexId v = 0; v < mm.vertex_count(); ++v) {
        if (mm.on_boundary(v)) continue;
        const auto& faces = mm.vertex_faces()[v];
        CHECK(F.locate(mm.pos(v)) == *std::min_element(faces.begin(), faces.end()));
    }
}

TEST_CASE("svg output has one rectangle per non-degenerate tile") {
    auto tb = build_tiling(fixture::lattice_box(3, 4));
    std::string svg = render_svg(tb.tiling);
    std::size_t rects = 0;
    for (std::size_t p = svg.find("<rect"); p != std::string::npos; p = svg.find("<rect", p + 1)) ++rects;
    CHECK(rects == tb.tiling.tiles.size() - tb.tiling.degenerate_count);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg == render_svg(build_tiling(fixture::lattice_box(3, 4)).tiling));
}
