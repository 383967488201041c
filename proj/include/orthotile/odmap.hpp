#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "orthotile/config.hpp"
#include "orthotile/geom.hpp"

namespace orthotile {

using VertexId = std::size_t;
inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

enum class Color : std::uint8_t { primal, dual };

struct Vertex {
    Point2 pos;
    Color color = Color::primal;
};

// Four vertex ids, counterclockwise, alternating colors.
using Face = std::array<VertexId, 4>;

// A face rotated so that v1, v2 are primal and w1, w2 dual, still counterclockwise
// in the order v1, w1, v2, w2.
struct FaceRoles {
    VertexId v1, w1, v2, w2;
};

class OrthodiagonalMap {
public:
    OrthodiagonalMap() = default;
    OrthodiagonalMap(std::vector<Vertex> vertices, std::vector<Face> faces, std::vector<VertexId> boundary);

    const std::vector<Vertex>& vertices() const { return vertices_; }
    const Vertex& vertex(VertexId id) const { return vertices_[id]; }
    Point2 pos(VertexId id) const { return vertices_[id].pos; }
    Color color(VertexId id) const { return vertices_[id].color; }
    std::size_t vertex_count() const { return vertices_.size(); }

    const std::vector<Face>& faces() const { return faces_; }
    std::size_t face_count() const { return faces_.size(); }
    const std::vector<VertexId>& boundary() const { return boundary_; }
    double mesh_eps() const { return mesh_eps_; }

    // Requires alternating colors on face f.
    FaceRoles roles(std::size_t f) const;
    double face_area(std::size_t f) const;
    Point2 face_centroid(std::size_t f) const;
    bool face_convex(std::size_t f) const;

    bool on_boundary(VertexId id) const { return boundary_pos_[id] != npos; }
    // Index of id inside boundary(), or npos.
    std::size_t boundary_index(VertexId id) const { return boundary_pos_[id]; }
    const std::vector<std::vector<std::size_t>>& vertex_faces() const { return vertex_faces_; }
    // Vertices joined to id by a quadrilateral side.
    const std::vector<std::vector<VertexId>>& side_neighbors() const { return side_neighbors_; }
    bool has_side(VertexId a, VertexId b) const;

private:
    std::vector<Vertex> vertices_;
    std::vector<Face> faces_;
    std::vector<VertexId> boundary_;
    double mesh_eps_ = 0.0;
    std::vector<std::size_t> boundary_pos_;
    std::vector<std::vector<std::size_t>> vertex_faces_;
    std::vector<std::vector<VertexId>> side_neighbors_;
};

enum class ViolationKind {
    color_alternation,
    repeated_vertex,
    degenerate_face,
    orthogonality,
    self_intersecting_face,
    orientation,
    area_identity,
    nonmanifold_side,
    isolated_vertex,
    boundary_not_simple,
    boundary_mismatch,
    euler
};

std::string to_string(ViolationKind k);

struct Violation {
    ViolationKind kind;
    std::vector<std::size_t> ids;  // face ids for per-face kinds, vertex ids otherwise
    double defect = 0.0;
    std::string message;
};

struct ValidationReport {
    std::vector<Violation> violations;
    std::vector<std::size_t> nonconvex_faces;  // informational
    bool ok() const { return violations.empty(); }
    std::size_t count(ViolationKind k) const;
};

ValidationReport validate(const OrthodiagonalMap& m, const Tolerances& tol = default_tolerances());

struct GraphEdge {
    std::size_t u = 0, v = 0;
    double conductance = 1.0;
    double resistance = 1.0;
    double length = 0.0;
};

GraphEdge make_edge(std::size_t u, std::size_t v, double conductance, double length = 0.0);

struct Incidence {
    std::size_t neighbor;
    std::size_t edge;
};

// Finite network with CSR adjacency. Local vertex indices are dense from 0;
// map_id() translates back to the owning map when the graph was extracted.
class WeightedGraph {
public:
    WeightedGraph(std::vector<Point2> positions, std::vector<GraphEdge> edges, std::vector<VertexId> map_ids = {});

    std::size_t vertex_count() const { return positions_.size(); }
    std::size_t edge_count() const { return edges_.size(); }
    const std::vector<GraphEdge>& edges() const { return edges_; }
    const GraphEdge& edge(std::size_t e) const { return edges_[e]; }
    Point2 position(std::size_t i) const { return positions_[i]; }
    std::span<const Incidence> incident(std::size_t i) const {
        return {adj_.data() + offsets_[i], adj_.data() + offsets_[i + 1]};
    }
    double weight(std::size_t i) const { return weight_[i]; }

    VertexId map_id(std::size_t i) const { return map_ids_.empty() ? i : map_ids_[i]; }
    std::size_t local(VertexId id) const;  // npos if absent
    std::vector<std::size_t> locals(const std::vector<VertexId>& ids) const;

private:
    std::vector<Point2> positions_;
    std::vector<GraphEdge> edges_;
    std::vector<VertexId> map_ids_;
    std::vector<std::size_t> local_of_;
    std::vector<std::size_t> offsets_;
    std::vector<Incidence> adj_;
    std::vector<double> weight_;
};

// Edge e of either extracted graph corresponds to face e of the map.
std::shared_ptr<const WeightedGraph> extract_primal(const OrthodiagonalMap& m);
std::shared_ptr<const WeightedGraph> extract_dual(const OrthodiagonalMap& m);

struct BoundaryArcs {
    std::vector<VertexId> ab;  // primal, A..B inclusive
    std::vector<VertexId> bc;  // dual, strictly between B and C
    std::vector<VertexId> cd;  // primal, C..D inclusive
    std::vector<VertexId> da;  // dual, strictly between D and A
};

enum class Arc { ab, bc, cd, da };

BoundaryArcs boundary_arcs(const OrthodiagonalMap& m, const std::array<VertexId, 4>& marked);

// Boundary walk from `from` to `to` (counterclockwise, both inclusive).
std::vector<VertexId> boundary_walk(const OrthodiagonalMap& m, VertexId from, VertexId to);

class MarkedRectangleMap {
public:
    MarkedRectangleMap(OrthodiagonalMap map, std::array<VertexId, 4> marked);

    const OrthodiagonalMap& map() const { return *map_; }
    std::shared_ptr<const OrthodiagonalMap> map_ptr() const { return map_; }
    const std::array<VertexId, 4>& marked() const { return marked_; }
    const BoundaryArcs& arcs() const { return arcs_; }
    const std::vector<VertexId>& arc(Arc a) const;
    const WeightedGraph& primal() const { return *primal_; }
    const WeightedGraph& dual() const { return *dual_; }
    std::shared_ptr<const WeightedGraph> primal_ptr() const { return primal_; }
    std::shared_ptr<const WeightedGraph> dual_ptr() const { return dual_; }

    // Geometric arc along the map boundary. Primal arcs include their marked ends,
    // dual arcs run from the first to the last dual vertex strictly between marks.
    Polyline arc_polyline(Arc a) const;
    // Boundary walk between the two marks bounding arc a, marks included.
    Polyline arc_span_polyline(Arc a) const;

private:
    std::shared_ptr<const OrthodiagonalMap> map_;
    std::array<VertexId, 4> marked_;
    BoundaryArcs arcs_;
    std::shared_ptr<const WeightedGraph> primal_, dual_;
};

struct FaceSetBoundary {
    bool simple = false;
    std::vector<VertexId> cycle;  // counterclockwise, starts at the smallest id
    std::string problem;
};

// Outer boundary walk of a set of faces of m.
FaceSetBoundary face_set_boundary(const OrthodiagonalMap& m, const std::vector<std::size_t>& faces);

Polyline positions_of(const OrthodiagonalMap& m, const std::vector<VertexId>& ids);

}  // namespace orthotile
