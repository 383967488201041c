#include "fixtures.hpp"

#include <stdexcept>

namespace fixture {

using namespace orthotile;

DomainSpec rectangle(double w, double h) {
    return DomainSpec(Polygon({{0, 0}, {w, 0}, {w, h}, {0, h}}), {Point2{0, h}, {0, 0}, {w, 0}, {w, h}});
}

DomainSpec unit_square() { return rectangle(1.0, 1.0); }

DomainSpec l_shape() {
    return DomainSpec(Polygon({{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}),
                      {Point2{0, 0}, {2, 0}, {2, 1}, {0, 2}});
}

VertexId vertex_at(const OrthodiagonalMap& m, Point2 p) {
    for (VertexId v = 0; v < m.vertex_count(); ++v)
        if (dist(m.pos(v), p) < 1e-9) return v;
    throw std::runtime_error("no vertex at the requested point");
}

namespace {

MarkedRectangleMap mark(OrthodiagonalMap m, Point2 a, Point2 b, Point2 c, Point2 d) {
    std::array<VertexId, 4> marks{vertex_at(m, a), vertex_at(m, b), vertex_at(m, c), vertex_at(m, d)};
    return MarkedRectangleMap(std::move(m), marks);
}

}  // namespace

MarkedRectangleMap strip() {
    std::vector<LatticeFace> faces{{0, 1, false}, {1, 1, false}, {0, 2, false}, {1, 2, false}, {1, 1, true}};
    return mark(lattice_map({0, 0}, 1.0, faces), {0, 2}, {0, 1}, {2, 1}, {2, 2});
}

MarkedRectangleMap lattice_box(long nx, long ny) {
    std::vector<LatticeFace> faces;
    for (long j = 1; j < ny; ++j)
        for (long i = 0; i < nx; ++i) faces.push_back({i, j, false});
    for (long j = 0; j < ny; ++j)
        for (long i = 1; i < nx; ++i) faces.push_back({i, j, true});
    const double x = static_cast<double>(nx), y = static_cast<double>(ny);
    return mark(lattice_map({0, 0}, 1.0, faces), {0, y - 1}, {0, 1}, {x, 1}, {x, y - 1});
}

std::shared_ptr<const WeightedGraph> path_graph(const std::vector<double>& conductances) {
    std::vector<Point2> pos;
    std::vector<GraphEdge> edges;
    for (std::size_t i = 0; i <= conductances.size(); ++i) pos.push_back({static_cast<double>(i), 0.0});
    for (std::size_t i = 0; i < conductances.size(); ++i) edges.push_back(make_edge(i, i + 1, conductances[i], 1.0));
    return std::make_shared<const WeightedGraph>(std::move(pos), std::move(edges));
}

}  // namespace fixture
