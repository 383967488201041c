#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "orthotile/harmonic.hpp"
#include "orthotile/io.hpp"
#include "orthotile/odmap.hpp"

namespace orthotile {

// Lower-left corner plus side lengths. Sides are rounded from extended-precision
// differences, so thin tiles keep their relative accuracy.
struct Tile {
    std::size_t face = 0;
    std::size_t edge = 0;  // primal edge id
    double x0 = 0.0, y0 = 0.0, dx = 0.0, dy = 0.0;
    double x1() const { return x0 + dx; }
    double y1() const { return y0 + dy; }
    double width() const { return dx; }
    double height() const { return dy; }
    double area() const { return dx * dy; }
};

struct Tiling {
    double L = 0.0;
    std::vector<Tile> tiles;
    std::size_t degenerate_count = 0;
};

bool is_degenerate(const Tile& t, double L, const Tolerances& tol = default_tolerances());
std::size_t count_degenerate(const Tiling& t, const Tolerances& tol = default_tolerances());

struct TilingBuild {
    Tiling tiling;
    HarmonicField h;        // primal, 0 on [A,B] and L on [C,D]
    ConjugateField h_tilde; // dual, 0 on [B,C] and 1 on [D,A]
};

TilingBuild build_tiling(const MarkedRectangleMap& m, const SolverOptions& opt = {},
                         const Tolerances& tol = default_tolerances());

struct OverlapPair {
    std::size_t a = 0, b = 0;  // tile indices
    double area = 0.0;
};

struct TilingReport {
    double L = 0.0;
    double max_containment_excess = 0.0;
    double total_overlap = 0.0;
    double max_pair_overlap = 0.0;
    double area_sum = 0.0;
    double area_defect = 0.0;  // |sum - L|
    bool containment_ok = true;
    bool overlap_ok = true;
    bool area_ok = true;
    std::vector<OverlapPair> pairs;  // pairs overlapping by more than tol*L, at most 100
    std::size_t pair_count = 0;      // all such pairs
    bool ok() const { return containment_ok && overlap_ok && area_ok; }
};

TilingReport verify_tiling(const Tiling& t, double tol = default_tolerances().verify);

Json tiling_to_json(const Tiling& t);
Tiling tiling_from_json(const Json& j);

// Piecewise-linear extension of F = h + i h~ over the faces of the map.
class InterpolatedMap {
public:
    InterpolatedMap(const MarkedRectangleMap& m, const HarmonicField& h, const HarmonicField& h_tilde);

    const OrthodiagonalMap& map() const { return *map_; }
    std::complex<double> vertex_value(VertexId v) const { return node_[v]; }
    std::complex<double> centre_value(std::size_t f) const { return centre_[f]; }
    // Face owning p (lowest id among the faces containing it), or npos.
    std::size_t locate(Point2 p) const;
    std::complex<double> evaluate(Point2 p) const;
    // Bound on |phi - F^| over the faces: per face, the diameter of the box spanned by
    // the tile and the interpolation nodes.
    double tiling_discrepancy(const Tiling& t) const;

private:
    std::shared_ptr<const OrthodiagonalMap> map_;
    std::vector<std::complex<double>> node_;
    std::vector<std::complex<double>> centre_;
    Point2 lo_{};
    double cell_ = 1.0;
    long nx_ = 1, ny_ = 1;
    std::vector<std::vector<std::size_t>> buckets_;
    double tol_ = 0.0;
};

std::complex<double> evaluate_map(const InterpolatedMap& f, Point2 p);

struct SvgOptions {
    double width_px = 800.0;
    double stroke = 0.0;  // in rectangle units; 0 for no outline
};

std::string render_svg(const Tiling& t, const SvgOptions& opt = {});

}  // namespace orthotile
