#include "orthotile/gridgen.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <string>
#include <unordered_map>

#include "orthotile/errors.hpp"

namespace orthotile {

namespace {

double boundary_param(const Polygon& poly, BoundaryPosition bp) {
    double s = 0.0;
    for (std::size_t i = 0; i < bp.edge; ++i) s += dist(poly.vertex(i), poly.vertex(i + 1));
    return s + bp.t * dist(poly.vertex(bp.edge), poly.vertex(bp.edge + 1));
}

struct Key {
    long x, y;
    bool operator<(const Key& o) const { return y != o.y ? y < o.y : x < o.x; }
    bool operator==(const Key& o) const { return x == o.x && y == o.y; }
};

struct KeyHash {
    std::size_t operator()(const Key& k) const {
        return std::hash<long>()(k.x) * 1000003u ^ std::hash<long>()(k.y);
    }
};

// Vertex keys in half-lattice units, counterclockwise.
std::array<Key, 4> face_keys(const LatticeFace& f) {
    long i2 = 2 * f.i, j2 = 2 * f.j;
    if (!f.vertical) return {Key{i2, j2}, Key{i2 + 1, j2 - 1}, Key{i2 + 2, j2}, Key{i2 + 1, j2 + 1}};
    return {Key{i2, j2}, Key{i2 + 1, j2 + 1}, Key{i2, j2 + 2}, Key{i2 - 1, j2 + 1}};
}

Key face_center_key(const LatticeFace& f) {
    return f.vertical ? Key{2 * f.i, 2 * f.j + 1} : Key{2 * f.i + 1, 2 * f.j};
}

Point2 key_pos(Point2 origin, double eps, Key k) {
    return {origin.x + (0.5 * static_cast<double>(k.x)) * eps, origin.y + (0.5 * static_cast<double>(k.y)) * eps};
}

// Smallest L1 distance from c over segment pq.
double segment_l1_min(Point2 p, Point2 q, Point2 c) {
    auto l1 = [&](double t) {
        Point2 z = lerp(p, q, t);
        return std::abs(z.x - c.x) + std::abs(z.y - c.y);
    };
    double best = std::min(l1(0.0), l1(1.0));
    if (q.x != p.x) {
        double t = (c.x - p.x) / (q.x - p.x);
        if (t > 0 && t < 1) best = std::min(best, l1(t));
    }
    if (q.y != p.y) {
        double t = (c.y - p.y) / (q.y - p.y);
        if (t > 0 && t < 1) best = std::min(best, l1(t));
    }
    return best;
}

struct UnionFind {
    std::vector<std::size_t> parent;
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    std::size_t find(std::size_t a) {
        while (parent[a] != a) a = parent[a] = parent[parent[a]];
        return a;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

}  // namespace

DomainSpec::DomainSpec(Polygon boundary, std::array<Point2, 4> marked) : boundary_(std::move(boundary)), marked_(marked) {
    const double tol = default_tolerances().geom_rel * std::max(1.0, boundary_.diameter());
    const char* names = "ABCD";
    double s[4];
    for (int k = 0; k < 4; ++k) {
        if (!is_finite(marked_[k])) throw InputError(std::string("marked point ") + names[k] + " is not finite");
        if (boundary_distance(boundary_, marked_[k]) > tol)
            throw InputError(std::string("marked point ") + names[k] + " is not on the polygon boundary");
        positions_[k] = locate_on_boundary(boundary_, marked_[k]);
        s[k] = boundary_param(boundary_, positions_[k]);
    }
    const double per = boundary_.perimeter();
    double rel[4];
    for (int k = 0; k < 4; ++k) rel[k] = std::fmod(s[k] - s[0] + per, per);
    if (!(rel[1] > tol && rel[2] > rel[1] + tol && rel[3] > rel[2] + tol && per - rel[3] > tol))
        throw InputError("marked points must be distinct and in counterclockwise order");
}

Polyline DomainSpec::arc(Arc a) const {
    int k = static_cast<int>(a);
    return polygon_arc(boundary_, positions_[k], positions_[(k + 1) % 4]);
}

Json domain_to_json(const DomainSpec& spec) {
    Json j;
    Json poly = Json::array();
    for (const auto& p : spec.boundary().vertices()) poly.push_back(Json::array({p.x, p.y}));
    j["polygon"] = std::move(poly);
    Json marks = Json::array();
    for (const auto& p : spec.marked()) marks.push_back(Json::array({p.x, p.y}));
    j["marked"] = std::move(marks);
    return j;
}

DomainSpec domain_from_json(const Json& j) {
    try {
        std::vector<Point2> pts;
        for (const auto& p : j.at("polygon")) {
            if (p.size() != 2) throw InputError("polygon points must be [x, y]");
            pts.push_back({p[0].get<double>(), p[1].get<double>()});
        }
        const auto& m = j.at("marked");
        if (m.size() != 4) throw InputError("domain needs exactly 4 marked points");
        std::array<Point2, 4> marked;
        for (int k = 0; k < 4; ++k) {
            if (m[k].size() != 2) throw InputError("marked points must be [x, y]");
            marked[k] = {m[k][0].get<double>(), m[k][1].get<double>()};
        }
        return DomainSpec(Polygon(std::move(pts)), marked);
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed domain: ") + e.what());
    }
}

Json certificate_to_json(const ApproximationCertificate& c) {
    Json j;
    j["eps"] = c.eps;
    j["delta"] = c.delta;
    j["per_arc_hausdorff"] = Json::array({c.per_arc_hausdorff[0], c.per_arc_hausdorff[1], c.per_arc_hausdorff[2],
                                          c.per_arc_hausdorff[3]});
    j["interior"] = c.interior;
    return j;
}

OrthodiagonalMap lattice_map(Point2 origin, double eps, const std::vector<LatticeFace>& faces) {
    if (faces.empty()) throw GenerationError("no lattice faces: refine eps");
    std::vector<LatticeFace> sorted = faces;
    std::sort(sorted.begin(), sorted.end(),
              [](const LatticeFace& a, const LatticeFace& b) { return face_center_key(a) < face_center_key(b); });
    sorted.erase(std::unique(sorted.begin(), sorted.end(),
                             [](const LatticeFace& a, const LatticeFace& b) {
                                 return face_center_key(a) == face_center_key(b);
                             }),
                 sorted.end());
    std::vector<Key> keys;
    keys.reserve(sorted.size() * 4);
    for (const auto& f : sorted)
        for (const Key& k : face_keys(f)) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    std::unordered_map<Key, VertexId, KeyHash> id;
    id.reserve(keys.size() * 2);
    std::vector<Vertex> verts;
    verts.reserve(keys.size());
    for (const Key& k : keys) {
        id[k] = verts.size();
        bool primal = (k.x % 2 == 0);
        verts.push_back({key_pos(origin, eps, k), primal ? Color::primal : Color::dual});
    }
    std::vector<Face> qs;
    qs.reserve(sorted.size());
    for (const auto& f : sorted) {
        auto ks = face_keys(f);
        qs.push_back({id[ks[0]], id[ks[1]], id[ks[2]], id[ks[3]]});
    }
    OrthodiagonalMap probe(verts, qs, {});
    std::vector<std::size_t> all(qs.size());
    std::iota(all.begin(), all.end(), 0);
    FaceSetBoundary fb = face_set_boundary(probe, all);
    if (!fb.simple) throw GenerationError("generated region is not simply connected (" + fb.problem + "): refine eps");
    return OrthodiagonalMap(std::move(verts), std::move(qs), std::move(fb.cycle));
}

VertexId nearest_boundary_primal(const OrthodiagonalMap& m, Point2 p, double tie_tol) {
    double best = std::numeric_limits<double>::infinity();
    for (VertexId v : m.boundary())
        if (m.color(v) == Color::primal) best = std::min(best, dist(m.pos(v), p));
    VertexId pick = npos;
    for (VertexId v : m.boundary())
        if (m.color(v) == Color::primal && dist(m.pos(v), p) <= best + tie_tol) pick = std::min(pick, v);
    if (pick == npos) throw GenerationError("map has no primal boundary vertex");
    return pick;
}

ApproximationCertificate certify(const MarkedRectangleMap& m, const DomainSpec& spec, double eps) {
    ApproximationCertificate c;
    c.eps = eps;
    const double tol = default_tolerances().geom_rel * std::max(1.0, spec.boundary().diameter());
    for (int k = 0; k < 4; ++k) {
        Arc a = static_cast<Arc>(k);
        c.per_arc_hausdorff[k] = hausdorff_distance(m.arc_polyline(a), spec.arc(a));
    }
    c.delta = 2.0 * *std::max_element(c.per_arc_hausdorff.begin(), c.per_arc_hausdorff.end());
    c.interior = true;
    for (const auto& v : m.map().vertices())
        if (polygon_contains(spec.boundary(), v.pos, tol) == Containment::outside) c.interior = false;
    return c;
}

GridApproximation grid_approximation(const DomainSpec& spec, double eps, const GridOptions& opt) {
    const Polygon& poly = spec.boundary();
    const double diam = poly.diameter();
    if (!(eps > 0) || !std::isfinite(eps)) throw GenerationError("mesh size must be positive");
    const double tol = default_tolerances().geom_rel * std::max(1.0, diam);
    const BBox bb = poly.bbox();
    const Point2 origin = opt.origin.value_or(bb.lo);

    const long i0 = static_cast<long>(std::floor((bb.lo.x - origin.x) / eps)) - 1;
    const long i1 = static_cast<long>(std::ceil((bb.hi.x - origin.x) / eps)) + 1;
    const long j0 = static_cast<long>(std::floor((bb.lo.y - origin.y) / eps)) - 1;
    const long j1 = static_cast<long>(std::ceil((bb.hi.y - origin.y) / eps)) + 1;

    // A rotated-square face is kept iff its closure lies in the closed polygon.
    auto admissible = [&](const LatticeFace& f) {
        auto ks = face_keys(f);
        Point2 c = key_pos(origin, eps, face_center_key(f));
        if (polygon_contains(poly, c, tol) != Containment::inside) return false;
        for (const Key& k : ks)
            if (polygon_contains(poly, key_pos(origin, eps, k), tol) == Containment::outside) return false;
        const double radius = 0.5 * eps;
        for (std::size_t e = 0; e < poly.size(); ++e) {
            auto [p, q] = poly.edge(e);
            if (segment_l1_min(p, q, c) < radius - tol) return false;
        }
        return true;
    };
    std::vector<LatticeFace> cand;
    for (long j = j0; j <= j1; ++j)
        for (long i = i0; i <= i1; ++i)
            for (bool vertical : {false, true}) {
                LatticeFace f{i, j, vertical};
                if (admissible(f)) cand.push_back(f);
            }
    if (cand.empty()) throw GenerationError("no grid face fits inside the domain: refine eps");

    // Components through shared sides.
    std::map<std::pair<Key, Key>, std::size_t> side_owner;
    UnionFind uf(cand.size());
    for (std::size_t f = 0; f < cand.size(); ++f) {
        auto ks = face_keys(cand[f]);
        for (int k = 0; k < 4; ++k) {
            Key a = ks[k], b = ks[(k + 1) % 4];
            auto side = a < b ? std::make_pair(a, b) : std::make_pair(b, a);
            auto [it, inserted] = side_owner.emplace(side, f);
            if (!inserted) uf.unite(it->second, f);
        }
    }
    const Point2 centre = poly.centroid();
    std::size_t nearest = 0;
    double nd = std::numeric_limits<double>::infinity();
    for (std::size_t f = 0; f < cand.size(); ++f) {
        double d = dist(key_pos(origin, eps, face_center_key(cand[f])), centre);
        if (d < nd) {
            nd = d;
            nearest = f;
        }
    }
    const std::size_t root = uf.find(nearest);
    std::vector<LatticeFace> comp;
    for (std::size_t f = 0; f < cand.size(); ++f)
        if (uf.find(f) == root) comp.push_back(cand[f]);

    OrthodiagonalMap map = lattice_map(origin, eps, comp);

    std::array<VertexId, 4> marked{};
    for (int k = 0; k < 4; ++k) marked[k] = nearest_boundary_primal(map, spec.marked()[k], default_tolerances().mark_tie * diam);
    for (int k = 0; k < 4; ++k)
        for (int l = 0; l < k; ++l)
            if (marked[k] == marked[l])
                throw GenerationError("two marked points snap to the same boundary vertex: refine eps");
    try {
        MarkedRectangleMap mrm(std::move(map), marked);
        ApproximationCertificate cert = certify(mrm, spec, eps);
        return {std::move(mrm), cert};
    } catch (const InputError& e) {
        throw GenerationError(std::string("cannot mark generated map (") + e.what() + "): refine eps");
    }
}

std::vector<GridApproximation> refine_sequence(const DomainSpec& spec, double eps0, int levels, const GridOptions& opt) {
    if (levels < 1) throw InputError("levels must be at least 1");
    std::vector<GridApproximation> out;
    out.reserve(static_cast<std::size_t>(levels));
    double eps = eps0;
    for (int k = 0; k < levels; ++k) {
        out.push_back(grid_approximation(spec, eps, opt));
        eps *= 0.5;
    }
    return out;
}

}  // namespace orthotile
