#include "orthotile/geom.hpp"

#include <algorithm>
#include <limits>
#include <string>

#include "orthotile/errors.hpp"

namespace orthotile {

namespace {

int orient_sign(Point2 a, Point2 b, Point2 c) {
    double v = cross(b - a, c - a);
    return (v > 0) - (v < 0);
}

bool on_segment(Point2 a, Point2 b, Point2 p) {
    return std::min(a.x, b.x) <= p.x && p.x <= std::max(a.x, b.x) && std::min(a.y, b.y) <= p.y &&
           p.y <= std::max(a.y, b.y);
}

}  // namespace

double signed_area(const std::vector<Point2>& ring) {
    double s = 0.0;
    const std::size_t n = ring.size();
    for (std::size_t i = 0; i < n; ++i) s += cross(ring[i], ring[(i + 1) % n]);
    return 0.5 * s;
}

bool segments_intersect(Point2 a0, Point2 a1, Point2 b0, Point2 b1) {
    int o1 = orient_sign(a0, a1, b0), o2 = orient_sign(a0, a1, b1);
    int o3 = orient_sign(b0, b1, a0), o4 = orient_sign(b0, b1, a1);
    if (o1 != o2 && o3 != o4) return true;
    if (o1 == 0 && on_segment(a0, a1, b0)) return true;
    if (o2 == 0 && on_segment(a0, a1, b1)) return true;
    if (o3 == 0 && on_segment(b0, b1, a0)) return true;
    if (o4 == 0 && on_segment(b0, b1, a1)) return true;
    return false;
}

Polygon::Polygon(std::vector<Point2> vertices) : v_(std::move(vertices)) {
    const std::size_t n = v_.size();
    if (n < 3) throw InputError("polygon needs at least 3 vertices");
    for (const auto& p : v_)
        if (!is_finite(p)) throw InputError("polygon vertex is not finite");
    for (std::size_t i = 0; i < n; ++i)
        if (v_[i] == v_[(i + 1) % n]) throw InputError("polygon has repeated consecutive vertex " + std::to_string(i));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            auto [a0, a1] = edge(i);
            auto [b0, b1] = edge(j);
            bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            if (!adjacent) {
                if (segments_intersect(a0, a1, b0, b1))
                    throw InputError("polygon is not simple: edges " + std::to_string(i) + " and " + std::to_string(j));
                continue;
            }
            // adjacent edges may only share their common endpoint
            Point2 shared = (j == i + 1) ? a1 : a0;
            Point2 pa = (j == i + 1) ? a0 : a1;
            Point2 pb = (j == i + 1) ? b1 : b0;
            if (orient_sign(pa, shared, pb) == 0 && dot(pa - shared, pb - shared) > 0)
                throw InputError("polygon folds back on itself at vertex " + std::to_string(j == i + 1 ? j : i));
        }
    }
    double a = signed_area(v_);
    if (a == 0.0) throw InputError("polygon has zero area");
    if (a < 0) {
        std::reverse(v_.begin(), v_.end());
        a = -a;
    }
    area_ = a;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) diameter_ = std::max(diameter_, dist(v_[i], v_[j]));
}

double Polygon::perimeter() const {
    double s = 0.0;
    for (std::size_t i = 0; i < v_.size(); ++i) s += dist(vertex(i), vertex(i + 1));
    return s;
}

Point2 Polygon::centroid() const {
    double cx = 0.0, cy = 0.0;
    for (std::size_t i = 0; i < v_.size(); ++i) {
        Point2 p = vertex(i), q = vertex(i + 1);
        double w = cross(p, q);
        cx += (p.x + q.x) * w;
        cy += (p.y + q.y) * w;
    }
    return {cx / (6.0 * area_), cy / (6.0 * area_)};
}

BBox Polygon::bbox() const {
    BBox b{v_[0], v_[0]};
    for (const auto& p : v_) {
        b.lo.x = std::min(b.lo.x, p.x);
        b.lo.y = std::min(b.lo.y, p.y);
        b.hi.x = std::max(b.hi.x, p.x);
        b.hi.y = std::max(b.hi.y, p.y);
    }
    return b;
}

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
    Point2 d = b - a;
    double len2 = dot(d, d);
    if (len2 == 0.0) return dist(p, a);
    double t = std::clamp(dot(p - a, d) / len2, 0.0, 1.0);
    return dist(p, lerp(a, b, t));
}

double segment_segment_distance(Point2 a0, Point2 a1, Point2 b0, Point2 b1) {
    if (segments_intersect(a0, a1, b0, b1)) return 0.0;
    return std::min({point_segment_distance(a0, b0, b1), point_segment_distance(a1, b0, b1),
                     point_segment_distance(b0, a0, a1), point_segment_distance(b1, a0, a1)});
}

bool ring_contains(const std::vector<Point2>& ring, Point2 p) {
    bool in = false;
    const std::size_t n = ring.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        Point2 a = ring[i], b = ring[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x) in = !in;
        }
    }
    return in;
}

Containment polygon_contains(const Polygon& poly, Point2 p, double tol) {
    for (std::size_t i = 0; i < poly.size(); ++i) {
        auto [a, b] = poly.edge(i);
        if (point_segment_distance(p, a, b) <= tol) return Containment::boundary;
    }
    return ring_contains(poly.vertices(), p) ? Containment::inside : Containment::outside;
}

double polyline_length(const Polyline& pl) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < pl.size(); ++i) s += dist(pl[i], pl[i + 1]);
    return s;
}

double point_polyline_distance(Point2 p, const Polyline& pl) {
    if (pl.empty()) throw InputError("empty polyline");
    if (pl.size() == 1) return dist(p, pl[0]);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < pl.size(); ++i) best = std::min(best, point_segment_distance(p, pl[i], pl[i + 1]));
    return best;
}

double polyline_distance(const Polyline& a, const Polyline& b) {
    if (a.empty() || b.empty()) throw InputError("empty polyline");
    if (a.size() == 1) return point_polyline_distance(a[0], b);
    if (b.size() == 1) return point_polyline_distance(b[0], a);
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < a.size(); ++i)
        for (std::size_t j = 0; j + 1 < b.size(); ++j)
            best = std::min(best, segment_segment_distance(a[i], a[i + 1], b[j], b[j + 1]));
    return best;
}

SegmentIndex::SegmentIndex(const Polyline& pl) : pl_(pl) {
    if (pl_.empty()) throw InputError("empty polyline");
    const std::size_t nseg = pl_.size() > 1 ? pl_.size() - 1 : 0;
    brute_ = nseg < 32;
    if (brute_) return;
    BBox b{pl_[0], pl_[0]};
    double total = 0.0;
    for (std::size_t i = 0; i < pl_.size(); ++i) {
        b.lo.x = std::min(b.lo.x, pl_[i].x);
        b.lo.y = std::min(b.lo.y, pl_[i].y);
        b.hi.x = std::max(b.hi.x, pl_[i].x);
        b.hi.y = std::max(b.hi.y, pl_[i].y);
        if (i + 1 < pl_.size()) total += dist(pl_[i], pl_[i + 1]);
    }
    double w = b.hi.x - b.lo.x, h = b.hi.y - b.lo.y;
    double ext = std::max(w, h);
    cell_ = std::max({total / static_cast<double>(nseg), ext / 1024.0, 1e-300});
    origin_ = b.lo;
    nx_ = static_cast<long>(w / cell_) + 1;
    ny_ = static_cast<long>(h / cell_) + 1;
    cells_.assign(static_cast<std::size_t>(nx_ * ny_), {});
    for (std::size_t s = 0; s < nseg; ++s) {
        Point2 p = pl_[s], q = pl_[s + 1];
        long i0 = std::clamp(static_cast<long>((std::min(p.x, q.x) - origin_.x) / cell_), 0L, nx_ - 1);
        long i1 = std::clamp(static_cast<long>((std::max(p.x, q.x) - origin_.x) / cell_), 0L, nx_ - 1);
        long j0 = std::clamp(static_cast<long>((std::min(p.y, q.y) - origin_.y) / cell_), 0L, ny_ - 1);
        long j1 = std::clamp(static_cast<long>((std::max(p.y, q.y) - origin_.y) / cell_), 0L, ny_ - 1);
        for (long j = j0; j <= j1; ++j)
            for (long i = i0; i <= i1; ++i) cells_[static_cast<std::size_t>(j * nx_ + i)].push_back(s);
    }
}

double SegmentIndex::distance(Point2 p) const {
    if (brute_) return point_polyline_distance(p, pl_);
    long ci = std::clamp(static_cast<long>(std::floor((p.x - origin_.x) / cell_)), 0L, nx_ - 1);
    long cj = std::clamp(static_cast<long>(std::floor((p.y - origin_.y) / cell_)), 0L, ny_ - 1);
    double best = std::numeric_limits<double>::infinity();
    const long rmax = std::max(nx_, ny_);
    for (long r = 0; r <= rmax; ++r) {
        for (long j = cj - r; j <= cj + r; ++j) {
            if (j < 0 || j >= ny_) continue;
            const bool edge_row = (j == cj - r || j == cj + r);
            for (long i = ci - r; i <= ci + r; i += (edge_row ? 1 : 2 * r)) {
                if (i >= 0 && i < nx_)
                    for (std::size_t s : cells_[static_cast<std::size_t>(j * nx_ + i)])
                        best = std::min(best, point_segment_distance(p, pl_[s], pl_[s + 1]));
                if (r == 0) break;
            }
        }
        if (best <= static_cast<double>(r) * cell_) break;
    }
    return best;
}

double directed_hausdorff(const Polyline& a, const Polyline& b) {
    if (a.empty() || b.empty()) throw InputError("hausdorff_distance of an empty polyline");
    SegmentIndex index(b);
    if (a.size() == 1) return index.distance(a[0]);

    double scale = 0.0;
    for (const auto& p : a) scale = std::max(scale, dist(p, a[0]));
    for (const auto& p : b) scale = std::max(scale, dist(p, a[0]));
    const double tol_abs = 1e-13 * std::max(scale, 1e-300);

    struct Interval {
        Point2 p, q;
        double fp, fq;
    };
    double best = 0.0;
    std::vector<Interval> work;
    for (std::size_t s = 0; s + 1 < a.size(); ++s) {
        Point2 p = a[s], q = a[s + 1];
        double len = dist(p, q);
        std::size_t n = std::max<std::size_t>(4, static_cast<std::size_t>(std::ceil(len / std::max(scale / 1024.0, 1e-300))));
        n = std::min<std::size_t>(n, 4096);
        Point2 prev = p;
        double fprev = index.distance(p);
        best = std::max(best, fprev);
        for (std::size_t k = 1; k <= n; ++k) {
            Point2 cur = lerp(p, q, static_cast<double>(k) / static_cast<double>(n));
            double f = index.distance(cur);
            best = std::max(best, f);
            work.push_back({prev, cur, fprev, f});
            prev = cur;
            fprev = f;
        }
    }
    // Branch and bound with the 1-Lipschitz bound (fp + fq + |pq|)/2.
    for (int level = 0; level < 12 && !work.empty(); ++level) {
        std::vector<Interval> keep;
        for (const auto& iv : work)
            if (0.5 * (iv.fp + iv.fq + dist(iv.p, iv.q)) > best + tol_abs) keep.push_back(iv);
        if (keep.empty()) break;
        if (keep.size() > 64) {
            std::partial_sort(keep.begin(), keep.begin() + 64, keep.end(), [](const Interval& x, const Interval& y) {
                return x.fp + x.fq + dist(x.p, x.q) > y.fp + y.fq + dist(y.p, y.q);
            });
            keep.resize(64);
        }
        work.clear();
        for (const auto& iv : keep) {
            Point2 prev = iv.p;
            double fprev = iv.fp;
            for (int k = 1; k <= 8; ++k) {
                Point2 cur = k == 8 ? iv.q : lerp(iv.p, iv.q, k / 8.0);
                double f = k == 8 ? iv.fq : index.distance(cur);
                best = std::max(best, f);
                work.push_back({prev, cur, fprev, f});
                prev = cur;
                fprev = f;
            }
        }
    }
    return best;
}

double hausdorff_distance(const Polyline& a, const Polyline& b) {
    return std::max(directed_hausdorff(a, b), directed_hausdorff(b, a));
}

BoundaryPosition locate_on_boundary(const Polygon& poly, Point2 p) {
    BoundaryPosition best;
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poly.size(); ++i) {
        auto [a, b] = poly.edge(i);
        Point2 d = b - a;
        double t = std::clamp(dot(p - a, d) / dot(d, d), 0.0, 1.0);
        double dd = dist(p, lerp(a, b, t));
        if (dd < bd) {
            bd = dd;
            best = {i, t};
        }
    }
    // normalize t == 1 to the start of the next edge
    if (best.t >= 1.0) best = {(best.edge + 1) % poly.size(), 0.0};
    return best;
}

double boundary_distance(const Polygon& poly, Point2 p) {
    double bd = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poly.size(); ++i) {
        auto [a, b] = poly.edge(i);
        bd = std::min(bd, point_segment_distance(p, a, b));
    }
    return bd;
}

Polyline polygon_arc(const Polygon& poly, BoundaryPosition from, BoundaryPosition to) {
    auto at = [&](BoundaryPosition bp) {
        auto [a, b] = poly.edge(bp.edge);
        return lerp(a, b, bp.t);
    };
    Polyline out{at(from)};
    auto push = [&](Point2 p) {
        if (!(p == out.back())) out.push_back(p);
    };
    if (from.edge == to.edge && to.t >= from.t) {
        push(at(to));
        return out;
    }
    std::size_t e = from.edge;
    const std::size_t n = poly.size();
    for (std::size_t steps = 0; steps < n; ++steps) {
        push(poly.vertex(e + 1));
        e = (e + 1) % n;
        if (e == to.edge) break;
    }
    push(at(to));
    return out;
}

}  // namespace orthotile
