#include "orthotile/holo.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "orthotile/errors.hpp"

namespace orthotile {

namespace {

Complex as_complex(Point2 p) { return {p.x, p.y}; }

}  // namespace

DiscreteHolomorphic::DiscreteHolomorphic(std::shared_ptr<const OrthodiagonalMap> m, std::vector<Complex> values)
    : map_(std::move(m)), values_(std::move(values)) {
    if (!map_) throw InputError("missing map");
    if (values_.size() != map_->vertex_count()) throw InputError("one value per vertex is required");
    cr_.resize(map_->face_count());
    for (std::size_t f = 0; f < map_->face_count(); ++f) {
        FaceRoles r = map_->roles(f);
        Complex dv = as_complex(map_->pos(r.v2)) - as_complex(map_->pos(r.v1));
        Complex dw = as_complex(map_->pos(r.w2)) - as_complex(map_->pos(r.w1));
        cr_[f] = std::abs((values_[r.v2] - values_[r.v1]) / dv - (values_[r.w2] - values_[r.w1]) / dw);
        if (worst_ == npos || cr_[f] > max_cr_) {
            max_cr_ = cr_[f];
            worst_ = f;
        }
    }
}

double DiscreteHolomorphic::max_abs() const {
    double m = 0.0;
    for (const auto& z : values_) m = std::max(m, std::abs(z));
    return m;
}

DiscreteHolomorphic assemble(const MarkedRectangleMap& m, const HarmonicField& h, const HarmonicField& h_tilde) {
    const WeightedGraph& pg = m.primal();
    const WeightedGraph& dg = m.dual();
    if (h.values.size() != pg.vertex_count() || h_tilde.values.size() != dg.vertex_count())
        throw InputError("fields do not match the map");
    std::vector<Complex> vals(m.map().vertex_count());
    for (std::size_t i = 0; i < pg.vertex_count(); ++i) vals[pg.map_id(i)] = {h.values[i], 0.0};
    for (std::size_t i = 0; i < dg.vertex_count(); ++i) vals[dg.map_id(i)] = {0.0, h_tilde.values[i]};
    return DiscreteHolomorphic(m.map_ptr(), std::move(vals));
}

DiscreteHolomorphic sample_function(std::shared_ptr<const OrthodiagonalMap> m, const std::function<Complex(Point2)>& f) {
    std::vector<Complex> vals(m->vertex_count());
    for (VertexId v = 0; v < m->vertex_count(); ++v) {
        Complex z = f(m->pos(v));
        vals[v] = m->color(v) == Color::primal ? Complex(z.real(), 0.0) : Complex(0.0, z.imag());
    }
    return DiscreteHolomorphic(std::move(m), std::move(vals));
}

DiscreteHolomorphic combine(Complex alpha, const DiscreteHolomorphic& f, const DiscreteHolomorphic& g) {
    if (f.map_ptr() != g.map_ptr()) throw InputError("functions live on different maps");
    std::vector<Complex> vals(f.values().size());
    for (std::size_t i = 0; i < vals.size(); ++i) vals[i] = alpha * f.values()[i] + g.values()[i];
    return DiscreteHolomorphic(f.map_ptr(), std::move(vals));
}

Complex face_integral(const DiscreteHolomorphic& f, std::size_t face) {
    const OrthodiagonalMap& m = f.map();
    FaceRoles r = m.roles(face);
    Complex dv = as_complex(m.pos(r.v2)) - as_complex(m.pos(r.v1));
    Complex dw = as_complex(m.pos(r.w2)) - as_complex(m.pos(r.w1));
    return (f(r.v2) - f(r.v1)) * dw - (f(r.w2) - f(r.w1)) * dv;
}

ContourInfo analyze_contour(const OrthodiagonalMap& m, const std::vector<VertexId>& walk_in) {
    std::vector<VertexId> walk = walk_in;
    if (walk.size() >= 2 && walk.front() == walk.back()) walk.pop_back();
    const std::size_t k = walk.size();
    if (k < 4) throw InputError("contour needs at least four vertices");
    std::unordered_set<VertexId> seen;
    for (std::size_t i = 0; i < k; ++i) {
        VertexId a = walk[i], b = walk[(i + 1) % k];
        if (a >= m.vertex_count()) throw InputError("contour vertex out of range");
        if (!seen.insert(a).second) throw InputError("contour is not simple: vertex " + std::to_string(a) + " repeats");
        if (m.on_boundary(a)) throw InputError("contour touches the map boundary at vertex " + std::to_string(a));
        if (b >= m.vertex_count() || !m.has_side(a, b))
            throw InputError("contour steps " + std::to_string(a) + " -> " + std::to_string(b) + " are not a side");
    }
    Polyline ring = positions_of(m, walk);
    const double area = signed_area(ring);
    ContourInfo info;
    info.counterclockwise = area > 0;
    for (std::size_t i = 0; i < k; ++i) info.perimeter += dist(ring[i], ring[(i + 1) % k]);
    double x0 = ring[0].x, x1 = x0, y0 = ring[0].y, y1 = y0;
    for (const auto& p : ring) {
        x0 = std::min(x0, p.x);
        x1 = std::max(x1, p.x);
        y0 = std::min(y0, p.y);
        y1 = std::max(y1, p.y);
    }
    double enclosed_area = 0.0;
    for (std::size_t f = 0; f < m.face_count(); ++f) {
        Point2 c = m.face_centroid(f);
        if (c.x < x0 || c.x > x1 || c.y < y0 || c.y > y1) continue;
        if (ring_contains(ring, c)) {
            info.enclosed.push_back(f);
            enclosed_area += m.face_area(f);
        }
    }
    if (std::abs(enclosed_area - std::abs(area)) > 1e-9 * std::abs(area))
        throw InputError("contour does not bound a union of faces");
    return info;
}

Complex contour_integral(const DiscreteHolomorphic& f, const std::vector<VertexId>& walk_in) {
    analyze_contour(f.map(), walk_in);
    std::vector<VertexId> walk = walk_in;
    if (walk.front() == walk.back()) walk.pop_back();
    Complex sum{};
    for (std::size_t i = 0; i < walk.size(); ++i) {
        VertexId a = walk[i], b = walk[(i + 1) % walk.size()];
        sum += (f(a) + f(b)) * (as_complex(f.map().pos(b)) - as_complex(f.map().pos(a)));
    }
    return sum;
}

Complex primal_boundary_sum(const DiscreteHolomorphic& f, const std::vector<VertexId>& walk_in) {
    std::vector<VertexId> walk = walk_in;
    if (walk.size() >= 2 && walk.front() == walk.back()) walk.pop_back();
    const std::size_t k = walk.size();
    Complex sum{};
    for (std::size_t i = 0; i < k; ++i) {
        VertexId w = walk[i];
        if (f.map().color(w) != Color::primal) continue;
        VertexId before = walk[(i + k - 1) % k], after = walk[(i + 1) % k];
        sum += f(w).real() * (as_complex(f.map().pos(after)) - as_complex(f.map().pos(before)));
    }
    return sum;
}

GreenResult green_residual(const DiscreteHolomorphic& f, const std::vector<VertexId>& outer_in,
                           const std::vector<VertexId>& inner_in) {
    const OrthodiagonalMap& m = f.map();
    auto normalise = [&](const std::vector<VertexId>& w, ContourInfo& info) {
        std::vector<VertexId> out = w;
        if (out.empty()) return out;
        info = analyze_contour(m, out);
        if (!info.counterclockwise) std::reverse(out.begin(), out.end());
        return out;
    };
    ContourInfo oi, ii;
    auto outer = normalise(outer_in, oi);
    if (outer.empty()) throw InputError("outer contour is empty");
    auto inner = normalise(inner_in, ii);
    if (!std::includes(oi.enclosed.begin(), oi.enclosed.end(), ii.enclosed.begin(), ii.enclosed.end()))
        throw InputError("inner contour is not nested inside the outer one");
    std::vector<std::size_t> annulus;
    std::set_difference(oi.enclosed.begin(), oi.enclosed.end(), ii.enclosed.begin(), ii.enclosed.end(),
                        std::back_inserter(annulus));
    GreenResult g;
    g.annulus_faces = annulus.size();
    Complex faces{};
    for (std::size_t q : annulus) {
        FaceRoles r = m.roles(q);
        faces += (f(r.v2).real() - f(r.v1).real()) * (as_complex(m.pos(r.w2)) - as_complex(m.pos(r.w1)));
    }
    Complex inner_sum = inner.empty() ? Complex{} : primal_boundary_sum(f, inner);
    g.residual = primal_boundary_sum(f, outer) - inner_sum - faces;
    return g;
}

std::vector<VertexId> primal_sidewalk(const OrthodiagonalMap& m, const std::vector<VertexId>& walk) {
    std::vector<VertexId> out;
    for (VertexId v : walk)
        if (m.color(v) == Color::primal) out.push_back(v);
    return out;
}

std::vector<VertexId> dual_sidewalk(const OrthodiagonalMap& m, const std::vector<VertexId>& walk) {
    std::vector<VertexId> out;
    for (VertexId v : walk)
        if (m.color(v) == Color::dual) out.push_back(v);
    return out;
}

}  // namespace orthotile
