#pragma once

#include <array>
#include <optional>
#include <vector>

#include "orthotile/geom.hpp"
#include "orthotile/io.hpp"
#include "orthotile/odmap.hpp"

namespace orthotile {

// Polygonal conformal rectangle: a simple polygon with four boundary points A, B, C, D
// in counterclockwise order.
class DomainSpec {
public:
    DomainSpec(Polygon boundary, std::array<Point2, 4> marked);

    const Polygon& boundary() const { return boundary_; }
    const std::array<Point2, 4>& marked() const { return marked_; }
    const std::array<BoundaryPosition, 4>& marked_positions() const { return positions_; }
    // Continuous boundary arc from mark k to mark k+1 (k = 0 is [A,B]).
    Polyline arc(Arc a) const;

private:
    Polygon boundary_;
    std::array<Point2, 4> marked_;
    std::array<BoundaryPosition, 4> positions_;
};

Json domain_to_json(const DomainSpec& spec);
DomainSpec domain_from_json(const Json& j);

struct ApproximationCertificate {
    double eps = 0.0;    // lattice diagonal, an upper bound on every edge length
    double delta = 0.0;  // 2 * max(per_arc_hausdorff)
    std::array<double, 4> per_arc_hausdorff{};
    bool interior = true;
};

Json certificate_to_json(const ApproximationCertificate& c);

struct GridOptions {
    // Lattice anchor for primal vertices; defaults to the polygon's bounding-box corner.
    std::optional<Point2> origin;
};

struct GridApproximation {
    MarkedRectangleMap map;
    ApproximationCertificate cert;
};

GridApproximation grid_approximation(const DomainSpec& spec, double eps, const GridOptions& opt = {});
std::vector<GridApproximation> refine_sequence(const DomainSpec& spec, double eps0, int levels,
                                               const GridOptions& opt = {});

// One rotated-square face per primal lattice edge (i,j)-(i+1,j) or (i,j)-(i,j+1).
struct LatticeFace {
    long i = 0, j = 0;
    bool vertical = false;
};

// Builds the map of a set of lattice faces; primal vertices sit at origin + eps*(i,j),
// dual vertices at the cell centres. Throws GenerationError if the union is not a disk.
OrthodiagonalMap lattice_map(Point2 origin, double eps, const std::vector<LatticeFace>& faces);

// Nearest primal boundary vertex; candidates within tie_tol of the best go to the smallest id.
VertexId nearest_boundary_primal(const OrthodiagonalMap& m, Point2 p, double tie_tol);

ApproximationCertificate certify(const MarkedRectangleMap& m, const DomainSpec& spec, double eps);

}  // namespace orthotile
