#include "orthotile/odmap.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <unordered_set>

#include "orthotile/errors.hpp"

namespace orthotile {

namespace {

std::uint64_t side_key(VertexId a, VertexId b, std::size_t n) {
    return static_cast<std::uint64_t>(a) * static_cast<std::uint64_t>(n) + static_cast<std::uint64_t>(b);
}

}  // namespace

OrthodiagonalMap::OrthodiagonalMap(std::vector<Vertex> vertices, std::vector<Face> faces, std::vector<VertexId> boundary)
    : vertices_(std::move(vertices)), faces_(std::move(faces)), boundary_(std::move(boundary)) {
    const std::size_t n = vertices_.size();
    for (const auto& v : vertices_)
        if (!is_finite(v.pos)) throw InputError("vertex coordinate is not finite");
    for (std::size_t f = 0; f < faces_.size(); ++f)
        for (VertexId id : faces_[f])
            if (id >= n) throw InputError("face " + std::to_string(f) + " references unknown vertex " + std::to_string(id));
    boundary_pos_.assign(n, npos);
    for (std::size_t i = 0; i < boundary_.size(); ++i) {
        if (boundary_[i] >= n) throw InputError("boundary references unknown vertex " + std::to_string(boundary_[i]));
        if (boundary_pos_[boundary_[i]] == npos) boundary_pos_[boundary_[i]] = i;
    }
    vertex_faces_.assign(n, {});
    side_neighbors_.assign(n, {});
    for (std::size_t f = 0; f < faces_.size(); ++f) {
        const Face& q = faces_[f];
        for (int k = 0; k < 4; ++k) {
            VertexId a = q[k], b = q[(k + 1) % 4];
            vertex_faces_[a].push_back(f);
            mesh_eps_ = std::max(mesh_eps_, dist(vertices_[a].pos, vertices_[b].pos));
            auto& na = side_neighbors_[a];
            if (std::find(na.begin(), na.end(), b) == na.end()) na.push_back(b);
            auto& nb = side_neighbors_[b];
            if (std::find(nb.begin(), nb.end(), a) == nb.end()) nb.push_back(a);
        }
    }
    for (auto& nb : side_neighbors_) std::sort(nb.begin(), nb.end());
}

FaceRoles OrthodiagonalMap::roles(std::size_t f) const {
    const Face& q = faces_[f];
    if (color(q[0]) == Color::primal) return {q[0], q[1], q[2], q[3]};
    return {q[1], q[2], q[3], q[0]};
}

double OrthodiagonalMap::face_area(std::size_t f) const {
    const Face& q = faces_[f];
    return signed_area({pos(q[0]), pos(q[1]), pos(q[2]), pos(q[3])});
}

Point2 OrthodiagonalMap::face_centroid(std::size_t f) const {
    const Face& q = faces_[f];
    Point2 c{};
    for (VertexId id : q) c = c + pos(id);
    return 0.25 * c;
}

bool OrthodiagonalMap::face_convex(std::size_t f) const {
    const Face& q = faces_[f];
    for (int k = 0; k < 4; ++k) {
        Point2 a = pos(q[k]), b = pos(q[(k + 1) % 4]), c = pos(q[(k + 2) % 4]);
        if (cross(b - a, c - b) <= 0) return false;
    }
    return true;
}

bool OrthodiagonalMap::has_side(VertexId a, VertexId b) const {
    const auto& na = side_neighbors_[a];
    return std::binary_search(na.begin(), na.end(), b);
}

std::string to_string(ViolationKind k) {
    switch (k) {
        case ViolationKind::color_alternation: return "color-alternation";
        case ViolationKind::repeated_vertex: return "repeated-vertex";
        case ViolationKind::degenerate_face: return "degenerate-face";
        case ViolationKind::orthogonality: return "orthogonality";
        case ViolationKind::self_intersecting_face: return "self-intersecting-face";
        case ViolationKind::orientation: return "orientation";
        case ViolationKind::area_identity: return "area-identity";
        case ViolationKind::nonmanifold_side: return "nonmanifold-side";
        case ViolationKind::isolated_vertex: return "isolated-vertex";
        case ViolationKind::boundary_not_simple: return "boundary-not-simple";
        case ViolationKind::boundary_mismatch: return "boundary-mismatch";
        case ViolationKind::euler: return "euler";
    }
    return "unknown";
}

std::size_t ValidationReport::count(ViolationKind k) const {
    return static_cast<std::size_t>(
        std::count_if(violations.begin(), violations.end(), [k](const Violation& v) { return v.kind == k; }));
}

ValidationReport validate(const OrthodiagonalMap& m, const Tolerances& tol) {
    ValidationReport rep;
    auto add = [&](ViolationKind k, std::vector<std::size_t> ids, double defect, std::string msg) {
        rep.violations.push_back({k, std::move(ids), defect, std::move(msg)});
    };
    const std::size_t n = m.vertex_count();

    for (std::size_t f = 0; f < m.face_count(); ++f) {
        const Face& q = m.faces()[f];
        bool alternating = true;
        for (int k = 0; k < 4; ++k)
            if (m.color(q[k]) == m.color(q[(k + 1) % 4])) alternating = false;
        if (!alternating) {
            add(ViolationKind::color_alternation, {f}, 0.0, "face colors do not alternate");
            continue;
        }
        if (q[0] == q[2] || q[1] == q[3]) {
            add(ViolationKind::repeated_vertex, {f}, 0.0, "face repeats a vertex");
            continue;
        }
        Point2 a = m.pos(q[0]), b = m.pos(q[1]), c = m.pos(q[2]), d = m.pos(q[3]);
        Point2 d1 = c - a, d2 = d - b;
        double l1 = norm(d1), l2 = norm(d2);
        if (l1 == 0.0 || l2 == 0.0) {
            add(ViolationKind::degenerate_face, {f}, 0.0, "zero-length diagonal");
            continue;
        }
        double defect = std::abs(dot(d1, d2)) / (l1 * l2);
        if (defect > tol.orth) add(ViolationKind::orthogonality, {f}, defect, "diagonals not orthogonal");
        if (segments_intersect(a, b, c, d) || segments_intersect(b, c, d, a)) {
            add(ViolationKind::self_intersecting_face, {f}, 0.0, "face is not a simple quadrilateral");
            continue;
        }
        double area = m.face_area(f);
        if (area <= 0) {
            add(ViolationKind::orientation, {f}, area, "face is not counterclockwise");
            continue;
        }
        if (!m.face_convex(f)) rep.nonconvex_faces.push_back(f);
        // Shoelace area of any simple quadrilateral is cross(d1, d2)/2, so the
        // identity is checked on every simple face.
        double rel = std::abs(area - 0.5 * l1 * l2) / (0.5 * l1 * l2);
        if (defect <= tol.orth && rel > std::max(1e-12, tol.orth)) add(ViolationKind::area_identity, {f}, rel, "area differs from half diagonal product");
    }

    // Directed sides.
    std::unordered_map<std::uint64_t, int> directed;
    directed.reserve(m.face_count() * 8);
    for (const Face& q : m.faces())
        for (int k = 0; k < 4; ++k) directed[side_key(q[k], q[(k + 1) % 4], n)]++;
    std::size_t undirected = 0;
    std::vector<std::vector<VertexId>> out(n);
    std::size_t boundary_sides = 0;
    for (const Face& q : m.faces()) {
        for (int k = 0; k < 4; ++k) {
            VertexId a = q[k], b = q[(k + 1) % 4];
            int cnt = directed[side_key(a, b, n)];
            if (cnt > 1) add(ViolationKind::nonmanifold_side, {a, b}, cnt, "side used twice in the same direction");
            auto rev = directed.find(side_key(b, a, n));
            if (rev == directed.end()) {
                ++undirected;
                ++boundary_sides;
                out[a].push_back(b);
            } else if (a < b) {
                ++undirected;
            }
        }
    }
    for (VertexId v = 0; v < n; ++v)
        if (m.vertex_faces()[v].empty()) add(ViolationKind::isolated_vertex, {v}, 0.0, "vertex in no face");
    for (VertexId v = 0; v < n; ++v)
        if (out[v].size() > 1)
            add(ViolationKind::boundary_not_simple, {v}, static_cast<double>(out[v].size()), "boundary passes twice through vertex");

    const auto& bc = m.boundary();
    bool match = bc.size() == boundary_sides && !bc.empty();
    if (match) {
        std::unordered_set<VertexId> seen;
        for (std::size_t i = 0; i < bc.size() && match; ++i) {
            VertexId a = bc[i], b = bc[(i + 1) % bc.size()];
            if (!seen.insert(a).second) match = false;
            else if (std::find(out[a].begin(), out[a].end(), b) == out[a].end()) match = false;
        }
    }
    if (!match) add(ViolationKind::boundary_mismatch, {}, 0.0, "boundary cycle is not the counterclockwise outer walk");

    long euler = static_cast<long>(n) - static_cast<long>(undirected) + static_cast<long>(m.face_count()) + 1;
    if (euler != 2) add(ViolationKind::euler, {}, static_cast<double>(euler), "V - E + F != 2");
    return rep;
}

GraphEdge make_edge(std::size_t u, std::size_t v, double conductance, double length) {
    return {u, v, conductance, 1.0 / conductance, length};
}

WeightedGraph::WeightedGraph(std::vector<Point2> positions, std::vector<GraphEdge> edges, std::vector<VertexId> map_ids)
    : positions_(std::move(positions)), edges_(std::move(edges)), map_ids_(std::move(map_ids)) {
    const std::size_t n = positions_.size();
    if (!map_ids_.empty() && map_ids_.size() != n) throw InputError("map id table size mismatch");
    for (const auto& e : edges_) {
        if (e.u >= n || e.v >= n) throw InputError("edge endpoint out of range");
        if (!(e.conductance > 0) || !std::isfinite(e.conductance)) throw InputError("conductance must be positive and finite");
    }
    if (!map_ids_.empty()) {
        VertexId mx = *std::max_element(map_ids_.begin(), map_ids_.end());
        local_of_.assign(mx + 1, npos);
        for (std::size_t i = 0; i < n; ++i) local_of_[map_ids_[i]] = i;
    }
    offsets_.assign(n + 1, 0);
    for (const auto& e : edges_) {
        offsets_[e.u + 1]++;
        offsets_[e.v + 1]++;
    }
    std::partial_sum(offsets_.begin(), offsets_.end(), offsets_.begin());
    adj_.resize(offsets_[n]);
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (std::size_t k = 0; k < edges_.size(); ++k) {
        const auto& e = edges_[k];
        adj_[fill[e.u]++] = {e.v, k};
        adj_[fill[e.v]++] = {e.u, k};
    }
    weight_.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (const auto& inc : incident(i)) weight_[i] += edges_[inc.edge].conductance;
}

std::size_t WeightedGraph::local(VertexId id) const {
    if (map_ids_.empty()) return id < vertex_count() ? id : npos;
    return id < local_of_.size() ? local_of_[id] : npos;
}

std::vector<std::size_t> WeightedGraph::locals(const std::vector<VertexId>& ids) const {
    std::vector<std::size_t> out;
    out.reserve(ids.size());
    for (VertexId id : ids) {
        std::size_t l = local(id);
        if (l == npos) throw InputError("vertex " + std::to_string(id) + " is not in this graph");
        out.push_back(l);
    }
    return out;
}

namespace {

std::shared_ptr<const WeightedGraph> extract(const OrthodiagonalMap& m, Color which) {
    std::vector<Point2> pos;
    std::vector<VertexId> ids;
    std::vector<std::size_t> local(m.vertex_count(), npos);
    for (VertexId v = 0; v < m.vertex_count(); ++v) {
        if (m.color(v) != which) continue;
        local[v] = pos.size();
        pos.push_back(m.pos(v));
        ids.push_back(v);
    }
    std::vector<GraphEdge> edges;
    edges.reserve(m.face_count());
    for (std::size_t f = 0; f < m.face_count(); ++f) {
        FaceRoles r = m.roles(f);
        double lp = dist(m.pos(r.v1), m.pos(r.v2));
        double ld = dist(m.pos(r.w1), m.pos(r.w2));
        if (lp == 0.0 || ld == 0.0) throw InputError("face " + std::to_string(f) + " has a zero-length diagonal");
        if (which == Color::primal)
            edges.push_back({local[r.v1], local[r.v2], ld / lp, lp / ld, lp});
        else
            edges.push_back({local[r.w1], local[r.w2], lp / ld, ld / lp, ld});
    }
    return std::make_shared<const WeightedGraph>(std::move(pos), std::move(edges), std::move(ids));
}

}  // namespace

std::shared_ptr<const WeightedGraph> extract_primal(const OrthodiagonalMap& m) { return extract(m, Color::primal); }
std::shared_ptr<const WeightedGraph> extract_dual(const OrthodiagonalMap& m) { return extract(m, Color::dual); }

std::vector<VertexId> boundary_walk(const OrthodiagonalMap& m, VertexId from, VertexId to) {
    const auto& bc = m.boundary();
    std::size_t i = m.boundary_index(from), j = m.boundary_index(to);
    if (i == npos || j == npos) throw InputError("boundary_walk endpoints must lie on the boundary");
    std::vector<VertexId> out;
    for (std::size_t k = i;; k = (k + 1) % bc.size()) {
        out.push_back(bc[k]);
        if (k == j) break;
    }
    return out;
}

BoundaryArcs boundary_arcs(const OrthodiagonalMap& m, const std::array<VertexId, 4>& marked) {
    const char* names = "ABCD";
    for (int k = 0; k < 4; ++k) {
        VertexId v = marked[k];
        if (v >= m.vertex_count()) throw InputError(std::string("marked vertex ") + names[k] + " does not exist");
        if (m.color(v) != Color::primal) throw InputError(std::string("marked vertex ") + names[k] + " is not primal");
        if (!m.on_boundary(v)) throw InputError(std::string("marked vertex ") + names[k] + " is not on the boundary");
        for (int l = 0; l < k; ++l)
            if (marked[l] == v)
                throw InputError(std::string("marked vertices ") + names[l] + " and " + names[k] + " coincide");
    }
    const std::size_t n = m.boundary().size();
    std::size_t p0 = m.boundary_index(marked[0]);
    std::size_t rel[4];
    for (int k = 0; k < 4; ++k) rel[k] = (m.boundary_index(marked[k]) + n - p0) % n;
    if (!(rel[1] < rel[2] && rel[2] < rel[3]))
        throw InputError("marked vertices are not in counterclockwise boundary order");

    auto strip = [&](std::vector<VertexId> w) {
        std::vector<VertexId> out;
        for (std::size_t k = 1; k + 1 < w.size(); ++k)
            if (m.color(w[k]) == Color::dual) out.push_back(w[k]);
        return out;
    };
    auto primal_only = [&](std::vector<VertexId> w) {
        std::vector<VertexId> out;
        for (VertexId v : w)
            if (m.color(v) == Color::primal) out.push_back(v);
        return out;
    };
    BoundaryArcs arcs;
    arcs.ab = primal_only(boundary_walk(m, marked[0], marked[1]));
    arcs.bc = strip(boundary_walk(m, marked[1], marked[2]));
    arcs.cd = primal_only(boundary_walk(m, marked[2], marked[3]));
    arcs.da = strip(boundary_walk(m, marked[3], marked[0]));
    if (arcs.bc.empty() || arcs.da.empty()) throw InputError("a dual boundary arc is empty");
    return arcs;
}

MarkedRectangleMap::MarkedRectangleMap(OrthodiagonalMap map, std::array<VertexId, 4> marked)
    : map_(std::make_shared<const OrthodiagonalMap>(std::move(map))), marked_(marked) {
    arcs_ = boundary_arcs(*map_, marked_);
    primal_ = extract_primal(*map_);
    dual_ = extract_dual(*map_);
}

const std::vector<VertexId>& MarkedRectangleMap::arc(Arc a) const {
    switch (a) {
        case Arc::ab: return arcs_.ab;
        case Arc::bc: return arcs_.bc;
        case Arc::cd: return arcs_.cd;
        case Arc::da: return arcs_.da;
    }
    return arcs_.ab;
}

Polyline MarkedRectangleMap::arc_span_polyline(Arc a) const {
    int k = static_cast<int>(a);
    return positions_of(*map_, boundary_walk(*map_, marked_[k], marked_[(k + 1) % 4]));
}

Polyline MarkedRectangleMap::arc_polyline(Arc a) const {
    int k = static_cast<int>(a);
    auto w = boundary_walk(*map_, marked_[k], marked_[(k + 1) % 4]);
    if (a == Arc::bc || a == Arc::da) w = std::vector<VertexId>(w.begin() + 1, w.end() - 1);
    return positions_of(*map_, w);
}

FaceSetBoundary face_set_boundary(const OrthodiagonalMap& m, const std::vector<std::size_t>& faces) {
    FaceSetBoundary res;
    const std::size_t n = m.vertex_count();
    if (faces.empty()) {
        res.problem = "empty face set";
        return res;
    }
    std::unordered_set<std::uint64_t> directed;
    directed.reserve(faces.size() * 8);
    for (std::size_t f : faces) {
        const Face& q = m.faces()[f];
        for (int k = 0; k < 4; ++k)
            if (!directed.insert(side_key(q[k], q[(k + 1) % 4], n)).second) {
                res.problem = "side used twice in the same direction";
                return res;
            }
    }
    std::unordered_map<VertexId, VertexId> next;
    std::size_t count = 0;
    VertexId start = npos;
    for (std::size_t f : faces) {
        const Face& q = m.faces()[f];
        for (int k = 0; k < 4; ++k) {
            VertexId a = q[k], b = q[(k + 1) % 4];
            if (directed.count(side_key(b, a, n))) continue;
            if (!next.emplace(a, b).second) {
                res.problem = "boundary passes twice through vertex " + std::to_string(a);
                return res;
            }
            ++count;
            start = std::min(start, a);
        }
    }
    if (count == 0) {
        res.problem = "face set has no boundary";
        return res;
    }
    VertexId cur = start;
    do {
        res.cycle.push_back(cur);
        auto it = next.find(cur);
        if (it == next.end()) {
            res.problem = "boundary walk is broken";
            res.cycle.clear();
            return res;
        }
        cur = it->second;
    } while (cur != start && res.cycle.size() <= count);
    if (res.cycle.size() != count) {
        res.problem = "face set boundary has more than one component (holes or disconnected pieces)";
        res.cycle.clear();
        return res;
    }
    res.simple = true;
    return res;
}

Polyline positions_of(const OrthodiagonalMap& m, const std::vector<VertexId>& ids) {
    Polyline out;
    out.reserve(ids.size());
    for (VertexId v : ids) out.push_back(m.pos(v));
    return out;
}

}  // namespace orthotile
