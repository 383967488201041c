#include "doctest.h"
#include "fixtures.hpp"
#include "orthotile/errors.hpp"
#include "orthotile/io.hpp"
#include "orthotile/odmap.hpp"

using namespace orthotile;

namespace {

OrthodiagonalMap one_face(Point2 dual0 = {1, 0}) {
    std::vector<Vertex> v{{{0, 0}, Color::primal}, {dual0, Color::dual}, {{1, 1}, Color::primal}, {{0, 1}, Color::dual}};
    return OrthodiagonalMap(v, {Face{0, 1, 2, 3}}, {0, 1, 2, 3});
}

}  // namespace

TEST_CASE("a single square face is valid") {
    auto rep = validate(one_face());
    CHECK(rep.ok());
    CHECK(one_face().mesh_eps() == doctest::Approx(1.0));
}

TEST_CASE("moving a dual vertex breaks orthogonality only") {
    auto rep = validate(one_face({1.2, 0.1}));
    CHECK(rep.count(ViolationKind::orthogonality) == 1);
    CHECK(rep.violations.size() == 1);
    CHECK(rep.violations[0].ids == std::vector<std::size_t>{0});
}

TEST_CASE("two faces sharing one vertex pinch the boundary") {
    std::vector<Vertex> v{{{0, 0}, Color::primal}, {{1, 0}, Color::dual}, {{1, 1}, Color::primal},
                          {{0, 1}, Color::dual},   {{2, 1}, Color::dual}, {{2, 2}, Color::primal},
                          {{1, 2}, Color::dual}};
    OrthodiagonalMap m(v, {Face{0, 1, 2, 3}, Face{2, 4, 5, 6}}, {0, 1, 2, 4, 5, 6, 2, 3});
    auto rep = validate(m);
    CHECK(rep.count(ViolationKind::boundary_not_simple) >= 1);
}

TEST_CASE("colour alternation and orientation are checked") {
    std::vector<Vertex> v{{{0, 0}, Color::primal}, {{1, 0}, Color::primal}, {{1, 1}, Color::primal}, {{0, 1}, Color::dual}};
    CHECK(validate(OrthodiagonalMap(v, {Face{0, 1, 2, 3}}, {0, 1, 2, 3})).count(ViolationKind::color_alternation) == 1);
    auto cw = OrthodiagonalMap(one_face().vertices(), {Face{0, 3, 2, 1}}, {0, 3, 2, 1});
    CHECK(validate(cw).count(ViolationKind::orientation) == 1);
}

TEST_CASE("conductances are ratios of diagonals and pair up to one") {
    std::vector<Vertex> v{{{0, 0}, Color::primal}, {{1, -0.5}, Color::dual}, {{2, 0}, Color::primal}, {{1, 0.5}, Color::dual}};
    OrthodiagonalMap m(v, {Face{0, 1, 2, 3}}, {0, 1, 2, 3});
    CHECK(validate(m).ok());
    auto p = extract_primal(m);
    auto d = extract_dual(m);
    CHECK(p->edge(0).conductance == doctest::Approx(0.5));
    CHECK(d->edge(0).conductance == doctest::Approx(2.0));
    CHECK(p->edge(0).conductance * d->edge(0).conductance == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(p->edge(0).conductance * p->edge(0).resistance == 1.0);
    auto sq = extract_primal(one_face());
    CHECK(sq->edge(0).conductance == 1.0);
}

TEST_CASE("grid maps satisfy the counting and area identities") {
    auto m = fixture::lattice_box(5, 4);
    const auto& om = m.map();
    CHECK(validate(om).ok());
    CHECK(m.primal().edge_count() == om.face_count());
    CHECK(m.dual().edge_count() == om.face_count());
    double diag = 0.0, area = 0.0;
    for (std::size_t f = 0; f < om.face_count(); ++f) {
        const auto& e = m.primal().edge(f);
        diag += e.length * m.dual().edge(f).length;
        area += om.face_area(f);
        CHECK(om.face_area(f) == doctest::Approx(0.5 * e.length * m.dual().edge(f).length).epsilon(1e-12));
    }
    CHECK(diag == doctest::Approx(2 * area).epsilon(1e-12));
    CHECK(std::abs(signed_area(positions_of(om, om.boundary())) - area) < 1e-12);
}

TEST_CASE("boundary arcs of a grid box follow the sides") {
    auto m = fixture::lattice_box(4, 4);
    const auto& om = m.map();
    for (VertexId v : m.arcs().ab) CHECK(om.pos(v).x == 0.0);
    for (VertexId v : m.arcs().cd) CHECK(om.pos(v).x == 4.0);
    for (VertexId v : m.arcs().bc) CHECK(om.pos(v).y == 0.5);
    for (VertexId v : m.arcs().da) CHECK(om.pos(v).y == 3.5);
    CHECK(m.arcs().ab.size() == 3);
    CHECK(m.arcs().bc.size() == 4);
    // recomputation is bit-identical
    auto again = boundary_arcs(om, m.marked());
    CHECK(again.ab == m.arcs().ab);
    CHECK(again.da == m.arcs().da);
}

TEST_CASE("marked vertex preconditions") {
    auto m = fixture::lattice_box(4, 4);
    auto marks = m.marked();
    auto same = marks;
    same[1] = same[0];
    CHECK_THROWS_AS(boundary_arcs(m.map(), same), InputError);
    auto swapped = marks;
    std::swap(swapped[2], swapped[3]);
    CHECK_THROWS_AS(boundary_arcs(m.map(), swapped), InputError);
}

TEST_CASE("map json round trip is bit-identical") {
    auto m = fixture::lattice_box(3, 3);
    std::string a = dump_json(marked_map_to_json(m));
    auto back = marked_map_from_json(parse_json(a, "test"));
    CHECK(dump_json(marked_map_to_json(back)) == a);
    CHECK(back.marked() == m.marked());
}

TEST_CASE("face set boundary of a block of faces is one counterclockwise cycle") {
    auto m = fixture::lattice_box(4, 4);
    std::vector<std::size_t> faces;
    for (std::size_t f = 0; f < m.map().face_count(); ++f) {
        Point2 c = m.map().face_centroid(f);
        if (c.x > 1 && c.x < 3 && c.y > 1 && c.y < 3) faces.push_back(f);
    }
    auto fb = face_set_boundary(m.map(), faces);
    REQUIRE(fb.simple);
    CHECK(signed_area(positions_of(m.map(), fb.cycle)) > 0);
}
