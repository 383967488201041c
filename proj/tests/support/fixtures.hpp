#pragma once

#include <memory>
#include <vector>

#include "orthotile/gridgen.hpp"
#include "orthotile/odmap.hpp"

namespace fixture {

using orthotile::Point2;

orthotile::DomainSpec rectangle(double w, double h);  // marked at the corners
orthotile::DomainSpec unit_square();
// 2x2 square minus its upper-right quarter, marked at (0,0), (2,0), (2,1), (0,2).
orthotile::DomainSpec l_shape();

orthotile::VertexId vertex_at(const orthotile::OrthodiagonalMap& m, Point2 p);

// Faces H(0,1), H(1,1), H(0,2), H(1,2), V(1,1) at unit spacing: two columns in series, L = 1.
orthotile::MarkedRectangleMap strip();

// All lattice faces whose closure lies in [0,nx]x[0,ny] (unit spacing), marked at
// (0,ny-1), (0,1), (nx,1), (nx,ny-1). Its extremal length is nx/(ny-1).
orthotile::MarkedRectangleMap lattice_box(long nx, long ny);

std::shared_ptr<const orthotile::WeightedGraph> path_graph(const std::vector<double>& conductances);

}  // namespace fixture
