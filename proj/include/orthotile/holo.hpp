#pragma once

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "orthotile/harmonic.hpp"
#include "orthotile/odmap.hpp"

namespace orthotile {

using Complex = std::complex<double>;

// Complex function on all vertices of a map. Values are arbitrary complex numbers; the
// assembled tiling pair is real on primal and purely imaginary on dual vertices.
class DiscreteHolomorphic {
public:
    DiscreteHolomorphic(std::shared_ptr<const OrthodiagonalMap> m, std::vector<Complex> values);

    const OrthodiagonalMap& map() const { return *map_; }
    std::shared_ptr<const OrthodiagonalMap> map_ptr() const { return map_; }
    const std::vector<Complex>& values() const { return values_; }
    Complex operator()(VertexId v) const { return values_[v]; }
    double real_part(VertexId v) const { return values_[v].real(); }
    double imag_part(VertexId v) const { return values_[v].imag(); }

    // |(F(v2)-F(v1))/(v2-v1) - (F(w2)-F(w1))/(w2-w1)| on face f.
    double cr_residual(std::size_t f) const { return cr_[f]; }
    double max_cr_residual() const { return max_cr_; }
    std::size_t worst_face() const { return worst_; }
    double max_abs() const;

private:
    std::shared_ptr<const OrthodiagonalMap> map_;
    std::vector<Complex> values_;
    std::vector<double> cr_;
    double max_cr_ = 0.0;
    std::size_t worst_ = npos;
};

DiscreteHolomorphic assemble(const MarkedRectangleMap& m, const HarmonicField& h, const HarmonicField& h_tilde);
// Re f on primal vertices, i Im f on dual vertices.
DiscreteHolomorphic sample_function(std::shared_ptr<const OrthodiagonalMap> m, const std::function<Complex(Point2)>& f);
DiscreteHolomorphic combine(Complex alpha, const DiscreteHolomorphic& f, const DiscreteHolomorphic& g);

// Face-level Morera sum (F(v2)-F(v1))(w2-w1) - (F(w2)-F(w1))(v2-v1).
Complex face_integral(const DiscreteHolomorphic& f, std::size_t face);

struct ContourInfo {
    std::vector<std::size_t> enclosed;  // sorted face ids
    bool counterclockwise = true;
    double perimeter = 0.0;
};

// Checks that walk (implicitly closed) is a simple alternating cycle of map sides that
// avoids the map boundary and bounds exactly the faces whose centroids it encloses.
// Throws InputError otherwise.
ContourInfo analyze_contour(const OrthodiagonalMap& m, const std::vector<VertexId>& walk);

// Sum over directed edges of (F(e-) + F(e+))(e+ - e-).
Complex contour_integral(const DiscreteHolomorphic& f, const std::vector<VertexId>& walk);

// Boundary sum over the primal vertices of a walk: sum Re F(w_i) (x_i - x_{i-1}), where
// x_{i-1}, x_i are the dual vertices before and after w_i.
Complex primal_boundary_sum(const DiscreteHolomorphic& f, const std::vector<VertexId>& walk);

// Green identity defect on the faces between two counterclockwise-normalised contours.
// An empty inner walk means no hole. Throws InputError when inner is not nested in outer.
struct GreenResult {
    Complex residual{};
    std::size_t annulus_faces = 0;
};
GreenResult green_residual(const DiscreteHolomorphic& f, const std::vector<VertexId>& outer,
                           const std::vector<VertexId>& inner);

std::vector<VertexId> primal_sidewalk(const OrthodiagonalMap& m, const std::vector<VertexId>& walk);
std::vector<VertexId> dual_sidewalk(const OrthodiagonalMap& m, const std::vector<VertexId>& walk);

}  // namespace orthotile
