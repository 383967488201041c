#include "orthotile/tiling.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <map>

#include "orthotile/errors.hpp"

namespace orthotile {

bool is_degenerate(const Tile& t, double L, const Tolerances& tol) {
    const double cut = tol.degenerate_tile * std::max(L, 1.0);
    return t.width() <= cut || t.height() <= cut;
}

std::size_t count_degenerate(const Tiling& t, const Tolerances& tol) {
    std::size_t k = 0;
    for (const auto& tile : t.tiles) k += is_degenerate(tile, t.L, tol);
    return k;
}

TilingBuild build_tiling(const MarkedRectangleMap& m, const SolverOptions& opt, const Tolerances& tol) {
    const WeightedGraph& pg = m.primal();
    const WeightedGraph& dg = m.dual();
    HarmonicField u = unit_potential(m.primal_ptr(), pg.locals(m.arcs().ab), pg.locals(m.arcs().cd), opt);
    if (!(u.energy > 0)) throw SolverError("zero energy between [A,B] and [C,D]");
    const double L = 1.0 / u.energy;
    HarmonicField h = std::move(u);
    if (h.precise.empty()) h.precise.assign(h.values.begin(), h.values.end());
    for (std::size_t i = 0; i < h.values.size(); ++i) {
        h.precise[i] *= L;
        h.values[i] = static_cast<double>(h.precise[i]);
    }
    h.residual *= L;
    h.energy = dirichlet_energy(pg, h.values);

    ConjugateField conj = harmonic_conjugate(m, h, tol);
    const auto& hp = h.precise;
    const auto& htp = conj.field.precise;

    Tiling t;
    t.L = L;
    t.tiles.resize(m.map().face_count());
    for (std::size_t f = 0; f < m.map().face_count(); ++f) {
        const FaceRoles r = m.map().roles(f);
        const long double a = hp[pg.local(r.v1)], b = hp[pg.local(r.v2)];
        const long double c = htp[dg.local(r.w1)], d = htp[dg.local(r.w2)];
        Tile& tile = t.tiles[f];
        tile.face = f;
        tile.edge = f;
        tile.x0 = static_cast<double>(std::min(a, b));
        tile.dx = static_cast<double>(std::fabs(b - a));
        tile.y0 = static_cast<double>(std::min(c, d));
        tile.dy = static_cast<double>(std::fabs(d - c));
    }
    t.degenerate_count = count_degenerate(t, tol);
    return {std::move(t), std::move(h), std::move(conj)};
}

TilingReport verify_tiling(const Tiling& t, double tol) {
    TilingReport rep;
    rep.L = t.L;
    const double L = t.L;
    const double box_tol = tol * std::max(L, 1.0);
    for (const auto& tile : t.tiles) {
        double excess = std::max({0.0 - tile.x0, tile.x1() - L, 0.0 - tile.y0, tile.y1() - 1.0, -tile.dx, -tile.dy});
        rep.max_containment_excess = std::max(rep.max_containment_excess, excess);
        rep.area_sum += std::max(0.0, tile.width()) * std::max(0.0, tile.height());
    }
    rep.containment_ok = rep.max_containment_excess <= box_tol;
    rep.area_defect = std::abs(rep.area_sum - L);
    rep.area_ok = rep.area_defect <= tol * L;

    // Sweep in x. Only tiles with positive area can overlap with positive area.
    struct Event {
        double x;
        int type;  // 0 removal, 1 insertion
        std::size_t tile;
    };
    std::vector<Event> ev;
    double hmax = 0.0;
    for (std::size_t i = 0; i < t.tiles.size(); ++i) {
        const Tile& a = t.tiles[i];
        if (!(a.x1() > a.x0 && a.y1() > a.y0)) continue;  // sides below one ulp of the corner carry no area here
        ev.push_back({a.x0, 1, i});
        ev.push_back({a.x1(), 0, i});
        hmax = std::max(hmax, a.height());
    }
    std::sort(ev.begin(), ev.end(), [](const Event& p, const Event& q) {
        if (p.x != q.x) return p.x < q.x;
        if (p.type != q.type) return p.type < q.type;
        return p.tile < q.tile;
    });
    std::multimap<double, std::size_t> active;
    std::vector<std::multimap<double, std::size_t>::iterator> where(t.tiles.size());
    for (const Event& e : ev) {
        const Tile& a = t.tiles[e.tile];
        if (e.type == 0) {
            active.erase(where[e.tile]);
            continue;
        }
        auto it = active.upper_bound(a.y0 - hmax);
        for (; it != active.end() && it->first < a.y1(); ++it) {
            const Tile& b = t.tiles[it->second];
            double w = std::min(a.x1(), b.x1()) - std::max(a.x0, b.x0);
            double hgt = std::min(a.y1(), b.y1()) - std::max(a.y0, b.y0);
            if (w <= 0 || hgt <= 0) continue;
            double ov = w * hgt;
            rep.total_overlap += ov;
            rep.max_pair_overlap = std::max(rep.max_pair_overlap, ov);
            if (ov > tol * L) {
                ++rep.pair_count;
                if (rep.pairs.size() < 100)
                    rep.pairs.push_back({std::min(e.tile, it->second), std::max(e.tile, it->second), ov});
            }
        }
        where[e.tile] = active.emplace(a.y0, e.tile);
    }
    rep.overlap_ok = rep.total_overlap <= tol * L;
    return rep;
}

Json tiling_to_json(const Tiling& t) {
    Json j;
    j["L"] = t.L;
    Json arr = Json::array();
    for (const auto& tile : t.tiles)
        arr.push_back({{"face", tile.face}, {"edge", tile.edge}, {"x0", tile.x0}, {"y0", tile.y0},
                       {"width", tile.dx}, {"height", tile.dy}});
    j["tiles"] = std::move(arr);
    return j;
}

Tiling tiling_from_json(const Json& j) {
    try {
        Tiling t;
        t.L = j.at("L").get<double>();
        if (!std::isfinite(t.L) || t.L < 0) throw InputError("tiling L must be finite and nonnegative");
        for (const auto& e : j.at("tiles")) {
            Tile tile;
            tile.face = e.at("face").get<std::size_t>();
            tile.edge = e.at("edge").get<std::size_t>();
            tile.x0 = e.at("x0").get<double>();
            tile.y0 = e.at("y0").get<double>();
            tile.dx = e.at("width").get<double>();
            tile.dy = e.at("height").get<double>();
            if (!std::isfinite(tile.x0) || !std::isfinite(tile.y0) || !std::isfinite(tile.dx) || !std::isfinite(tile.dy))
                throw InputError("tile coordinates must be finite");
            t.tiles.push_back(tile);
        }
        t.degenerate_count = count_degenerate(t);
        return t;
    } catch (const Json::exception& e) {
        throw InputError(std::string("malformed tiling: ") + e.what());
    }
}

namespace {

bool in_quad(const std::array<Point2, 4>& q, Point2 p, double tol) {
    for (int k = 0; k < 4; ++k)
        if (point_segment_distance(p, q[k], q[(k + 1) % 4]) <= tol) return true;
    return ring_contains({q[0], q[1], q[2], q[3]}, p);
}

}  // namespace

InterpolatedMap::InterpolatedMap(const MarkedRectangleMap& m, const HarmonicField& h, const HarmonicField& h_tilde)
    : map_(m.map_ptr()) {
    const OrthodiagonalMap& om = *map_;
    const WeightedGraph& pg = m.primal();
    const WeightedGraph& dg = m.dual();
    if (h.values.size() != pg.vertex_count() || h_tilde.values.size() != dg.vertex_count())
        throw InputError("fields do not match the map");
    const std::size_t n = om.vertex_count();
    std::vector<double> re(n, 0.0), im(n, 0.0);
    for (std::size_t i = 0; i < pg.vertex_count(); ++i) re[pg.map_id(i)] = h.values[i];
    for (std::size_t i = 0; i < dg.vertex_count(); ++i) im[dg.map_id(i)] = h_tilde.values[i];
    node_.resize(n);
    for (VertexId v = 0; v < n; ++v) {
        const auto& nb = om.side_neighbors()[v];
        double acc = 0.0;
        for (VertexId u : nb) acc += om.color(v) == Color::primal ? im[u] : re[u];
        const double avg = nb.empty() ? 0.0 : acc / static_cast<double>(nb.size());
        node_[v] = om.color(v) == Color::primal ? std::complex<double>(re[v], avg) : std::complex<double>(avg, im[v]);
    }
    centre_.resize(om.face_count());
    for (std::size_t f = 0; f < om.face_count(); ++f) {
        FaceRoles r = om.roles(f);
        centre_[f] = {0.5 * (re[r.v1] + re[r.v2]), 0.5 * (im[r.w1] + im[r.w2])};
    }

    Point2 hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
    lo_ = {std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    for (const auto& v : om.vertices()) {
        lo_ = {std::min(lo_.x, v.pos.x), std::min(lo_.y, v.pos.y)};
        hi = {std::max(hi.x, v.pos.x), std::max(hi.y, v.pos.y)};
    }
    const double span = std::max(hi.x - lo_.x, hi.y - lo_.y);
    tol_ = default_tolerances().geom_rel * std::max(span, 1.0) * 1e-3;
    const double cells = std::ceil(std::sqrt(static_cast<double>(std::max<std::size_t>(om.face_count(), 1))));
    cell_ = std::max(span / cells, std::numeric_limits<double>::min());
    nx_ = static_cast<long>((hi.x - lo_.x) / cell_) + 1;
    ny_ = static_cast<long>((hi.y - lo_.y) / cell_) + 1;
    buckets_.assign(static_cast<std::size_t>(nx_ * ny_), {});
    for (std::size_t f = 0; f < om.face_count(); ++f) {
        double x0 = std::numeric_limits<double>::infinity(), y0 = x0, x1 = -x0, y1 = -x0;
        for (VertexId v : om.faces()[f]) {
            Point2 p = om.pos(v);
            x0 = std::min(x0, p.x);
            x1 = std::max(x1, p.x);
            y0 = std::min(y0, p.y);
            y1 = std::max(y1, p.y);
        }
        long i0 = std::clamp(static_cast<long>((x0 - tol_ - lo_.x) / cell_), 0L, nx_ - 1);
        long i1 = std::clamp(static_cast<long>((x1 + tol_ - lo_.x) / cell_), 0L, nx_ - 1);
        long j0 = std::clamp(static_cast<long>((y0 - tol_ - lo_.y) / cell_), 0L, ny_ - 1);
        long j1 = std::clamp(static_cast<long>((y1 + tol_ - lo_.y) / cell_), 0L, ny_ - 1);
        for (long j = j0; j <= j1; ++j)
            for (long i = i0; i <= i1; ++i) buckets_[static_cast<std::size_t>(j * nx_ + i)].push_back(f);
    }
}

std::size_t InterpolatedMap::locate(Point2 p) const {
    if (!is_finite(p)) return npos;
    long i = static_cast<long>(std::floor((p.x - lo_.x) / cell_));
    long j = static_cast<long>(std::floor((p.y - lo_.y) / cell_));
    std::size_t best = npos;
    // Points on a cell border may belong to faces registered in the neighbouring cell.
    for (long dj = -1; dj <= 1; ++dj)
        for (long di = -1; di <= 1; ++di) {
            long a = i + di, b = j + dj;
            if (a < 0 || b < 0 || a >= nx_ || b >= ny_) continue;
            for (std::size_t f : buckets_[static_cast<std::size_t>(b * nx_ + a)]) {
                if (f >= best) break;
                const Face& q = map_->faces()[f];
                std::array<Point2, 4> pts{map_->pos(q[0]), map_->pos(q[1]), map_->pos(q[2]), map_->pos(q[3])};
                if (in_quad(pts, p, tol_)) {
                    best = f;
                    break;
                }
            }
        }
    return best;
}

std::complex<double> InterpolatedMap::evaluate(Point2 p) const {
    std::size_t f = locate(p);
    if (f == npos) throw InputError("point lies outside the map");
    FaceRoles r = map_->roles(f);
    const Point2 mid = 0.5 * (map_->pos(r.v1) + map_->pos(r.v2));
    const std::complex<double> mv = centre_[f];
    const VertexId ring[4] = {r.v1, r.w1, r.v2, r.w2};
    double best_score = -std::numeric_limits<double>::infinity();
    std::complex<double> best{};
    for (int k = 0; k < 4; ++k) {
        VertexId a = ring[k], b = ring[(k + 1) % 4];
        Point2 pa = map_->pos(a), pb = map_->pos(b);
        double det = cross(pa - mid, pb - mid);
        if (det == 0.0) continue;
        double la = cross(p - mid, pb - mid) / det;
        double lb = cross(pa - mid, p - mid) / det;
        double lm = 1.0 - la - lb;
        double score = std::min({la, lb, lm});
        if (score > best_score) {
            best_score = score;
            best = lm * mv + la * node_[a] + lb * node_[b];
        }
    }
    return best;
}

double InterpolatedMap::tiling_discrepancy(const Tiling& t) const {
    if (t.tiles.size() != map_->face_count()) throw InputError("tiling does not match the map");
    double worst = 0.0;
    for (std::size_t f = 0; f < map_->face_count(); ++f) {
        const Tile& tile = t.tiles[f];
        double x0 = tile.x0, x1 = tile.x1(), y0 = tile.y0, y1 = tile.y1();
        auto add = [&](std::complex<double> z) {
            x0 = std::min(x0, z.real());
            x1 = std::max(x1, z.real());
            y0 = std::min(y0, z.imag());
            y1 = std::max(y1, z.imag());
        };
        for (VertexId v : map_->faces()[f]) add(node_[v]);
        add(centre_[f]);
        worst = std::max(worst, std::hypot(x1 - x0, y1 - y0));
    }
    return worst;
}

std::complex<double> evaluate_map(const InterpolatedMap& f, Point2 p) { return f.evaluate(p); }

namespace {

std::string fixed6(double v) {
    if (std::abs(v) < 5e-7) v = 0.0;
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::string colour_of(std::size_t edge) {
    std::uint64_t z = mix64(edge);
    int r = 64 + static_cast<int>(z & 0x9f), g = 64 + static_cast<int>((z >> 8) & 0x9f),
        b = 64 + static_cast<int>((z >> 16) & 0x9f);
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

}  // namespace

std::string render_svg(const Tiling& t, const SvgOptions& opt) {
    const double L = t.L > 0 ? t.L : 1.0;
    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + fixed6(opt.width_px) +
         "\" height=\"" + fixed6(opt.width_px / L) + "\" viewBox=\"0.000000 0.000000 " + fixed6(L) +
         " 1.000000\">\n";
    std::size_t skipped = 0;
    std::string body;
    for (const auto& tile : t.tiles) {
        if (is_degenerate(tile, t.L)) {
            ++skipped;
            continue;
        }
        body += "<rect x=\"" + fixed6(tile.x0) + "\" y=\"" + fixed6(1.0 - tile.y1()) + "\" width=\"" +
                fixed6(tile.width()) + "\" height=\"" + fixed6(tile.height()) + "\" fill=\"" + colour_of(tile.edge) +
                "\"";
        if (opt.stroke > 0) body += " stroke=\"#000000\" stroke-width=\"" + fixed6(opt.stroke) + "\"";
        body += "/>\n";
    }
    s += "<!-- tiles " + std::to_string(t.tiles.size()) + " degenerate_omitted " + std::to_string(skipped) + " -->\n";
    s += body;
    s += "</svg>\n";
    return s;
}

}  // namespace orthotile
