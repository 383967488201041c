#include "orthotile/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <queue>
#include <set>
#include <tuple>

#include "orthotile/errors.hpp"

namespace orthotile {

ELResult extremal_length(const MarkedRectangleMap& m, ArcPair pair, const SolverOptions& opt) {
    ELResult r;
    if (pair == ArcPair::primal) {
        const auto& g = m.primal();
        r.witness_field = unit_potential(m.primal_ptr(), g.locals(m.arcs().ab), g.locals(m.arcs().cd), opt);
    } else {
        const auto& g = m.dual();
        r.witness_field = unit_potential(m.dual_ptr(), g.locals(m.arcs().bc), g.locals(m.arcs().da), opt);
    }
    r.energy = r.witness_field.energy;
    if (!(r.energy > 0)) throw SolverError("zero energy between the arcs");
    r.lambda = 1.0 / r.energy;
    r.witness_flow = gradient_flow(r.witness_field);
    return r;
}

DualityResult duality_product(const MarkedRectangleMap& m, const SolverOptions& opt) {
    DualityResult d;
    d.lambda_primal = extremal_length(m, ArcPair::primal, opt).lambda;
    d.lambda_dual = extremal_length(m, ArcPair::dual, opt).lambda;
    d.product = d.lambda_primal * d.lambda_dual;
    return d;
}

MetricBound metric_lower_bound(const WeightedGraph& g, const std::vector<std::size_t>& s, const std::vector<std::size_t>& t,
                               const std::vector<double>& rho) {
    if (rho.size() != g.edge_count()) throw InputError("metric size does not match edge count");
    bool nonzero = false;
    for (double x : rho) {
        if (!(x >= 0) || !std::isfinite(x)) throw InputError("metric values must be finite and nonnegative");
        if (x > 0) nonzero = true;
    }
    if (!nonzero) throw InputError("metric is identically zero");
    MetricBound mb;
    for (std::size_t e = 0; e < g.edge_count(); ++e) mb.area += g.edge(e).conductance * rho[e] * rho[e];

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> d(g.vertex_count(), inf);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (std::size_t v : s) {
        d[v] = 0.0;
        pq.push({0.0, v});
    }
    while (!pq.empty()) {
        auto [dv, v] = pq.top();
        pq.pop();
        if (dv > d[v]) continue;
        for (const auto& inc : g.incident(v)) {
            double nd = dv + rho[inc.edge];
            if (nd < d[inc.neighbor]) {
                d[inc.neighbor] = nd;
                pq.push({nd, inc.neighbor});
            }
        }
    }
    mb.length = inf;
    for (std::size_t v : t) mb.length = std::min(mb.length, d[v]);
    mb.reachable = std::isfinite(mb.length);
    mb.bound = mb.reachable ? mb.length * mb.length / mb.area : inf;
    return mb;
}

namespace {

// BFS over the primal graph avoiding `blocked` edges; returns the predecessor-reconstructed
// path (local ids) from the source set to the first reached target, or empty.
std::vector<std::size_t> primal_connection(const WeightedGraph& g, const std::vector<std::size_t>& src,
                                           const std::vector<std::size_t>& dst, const std::vector<std::uint8_t>& blocked) {
    const std::size_t n = g.vertex_count();
    std::vector<std::size_t> pred(n, npos);
    std::vector<std::uint8_t> seen(n, 0), target(n, 0);
    for (std::size_t v : dst) target[v] = 1;
    std::deque<std::size_t> q;
    for (std::size_t v : src) {
        if (!seen[v]) {
            seen[v] = 1;
            q.push_back(v);
        }
    }
    while (!q.empty()) {
        std::size_t x = q.front();
        q.pop_front();
        if (target[x]) {
            std::vector<std::size_t> path{x};
            while (pred[path.back()] != npos) path.push_back(pred[path.back()]);
            std::reverse(path.begin(), path.end());
            return path;
        }
        for (const auto& inc : g.incident(x)) {
            if (blocked[inc.edge] || seen[inc.neighbor]) continue;
            seen[inc.neighbor] = 1;
            pred[inc.neighbor] = x;
            q.push_back(inc.neighbor);
        }
    }
    return {};
}

}  // namespace

CutPathResult min_cut_dual_path(const MarkedRectangleMap& m, const std::vector<std::size_t>& cut) {
    const WeightedGraph& g = m.primal();
    const WeightedGraph& dg = m.dual();
    CutPathResult res;
    std::vector<std::uint8_t> blocked(g.edge_count(), 0);
    for (std::size_t e : cut) {
        if (e >= g.edge_count()) throw InputError("cut edge out of range");
        blocked[e] = 1;
    }
    const auto src = g.locals(m.arcs().ab), dst = g.locals(m.arcs().cd);
    auto path = primal_connection(g, src, dst, blocked);
    if (!path.empty()) {
        res.status = CutPathResult::Status::non_separating;
        for (std::size_t v : path) res.witness_path.push_back(g.map_id(v));
        res.message = "cut does not separate [A,B] from [C,D]";
        return res;
    }
    std::vector<std::size_t> sorted_cut = cut;
    std::sort(sorted_cut.begin(), sorted_cut.end());
    if (std::adjacent_find(sorted_cut.begin(), sorted_cut.end()) != sorted_cut.end()) {
        res.status = CutPathResult::Status::non_minimal;
        res.witness_edge = *std::adjacent_find(sorted_cut.begin(), sorted_cut.end());
        res.message = "cut lists an edge twice";
        return res;
    }
    for (std::size_t e : sorted_cut) {
        blocked[e] = 0;
        bool reconnects = !primal_connection(g, src, dst, blocked).empty();
        blocked[e] = 1;
        if (!reconnects) {
            res.status = CutPathResult::Status::non_minimal;
            res.witness_edge = e;
            res.message = "edge " + std::to_string(e) + " can be removed from the cut";
            return res;
        }
    }
    // Dual edges of the cut faces; walk from [B,C] to [D,A].
    const std::size_t nd = dg.vertex_count();
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj(nd);
    for (std::size_t e : sorted_cut) {
        adj[dg.edge(e).u].push_back({dg.edge(e).v, e});
        adj[dg.edge(e).v].push_back({dg.edge(e).u, e});
    }
    std::vector<std::uint8_t> is_target(nd, 0);
    for (VertexId w : m.arcs().da) is_target[dg.local(w)] = 1;
    std::vector<std::size_t> pred(nd, npos);
    std::vector<std::uint8_t> seen(nd, 0);
    std::deque<std::size_t> q;
    for (VertexId w : m.arcs().bc) {
        std::size_t l = dg.local(w);
        if (!adj[l].empty()) {
            seen[l] = 1;
            q.push_back(l);
        }
    }
    std::size_t hit = npos;
    while (!q.empty() && hit == npos) {
        std::size_t x = q.front();
        q.pop_front();
        if (is_target[x]) {
            hit = x;
            break;
        }
        for (auto [y, e] : adj[x]) {
            if (seen[y]) continue;
            seen[y] = 1;
            pred[y] = x;
            q.push_back(y);
        }
    }
    if (hit == npos) {
        res.status = CutPathResult::Status::mismatch;
        res.message = "cut faces do not carry a dual path from [B,C] to [D,A]";
        return res;
    }
    std::vector<std::size_t> dpath{hit};
    while (pred[dpath.back()] != npos) dpath.push_back(pred[dpath.back()]);
    std::reverse(dpath.begin(), dpath.end());
    for (std::size_t v : dpath) res.dual_path.push_back(dg.map_id(v));
    auto back = dual_path_to_cut(m, res.dual_path);
    std::sort(back.begin(), back.end());
    if (back != sorted_cut) {
        res.status = CutPathResult::Status::mismatch;
        res.message = "dual path faces differ from the cut";
    }
    return res;
}

std::vector<std::size_t> dual_path_to_cut(const MarkedRectangleMap& m, const std::vector<VertexId>& path) {
    const WeightedGraph& dg = m.dual();
    std::vector<std::size_t> out;
    for (std::size_t k = 0; k + 1 < path.size(); ++k) {
        std::size_t a = dg.local(path[k]), b = dg.local(path[k + 1]);
        if (a == npos || b == npos) throw InputError("dual path contains a non-dual vertex");
        std::size_t found = npos;
        for (const auto& inc : dg.incident(a))
            if (inc.neighbor == b) {
                found = inc.edge;
                break;
            }
        if (found == npos) throw InputError("consecutive dual path vertices are not adjacent");
        out.push_back(found);
    }
    return out;
}

std::string to_string(BoundStatus s) {
    switch (s) {
        case BoundStatus::pass: return "pass";
        case BoundStatus::fail: return "fail";
        case BoundStatus::inconclusive: return "inconclusive";
    }
    return "unknown";
}

ComparabilityRecord comparability_check(const MarkedRectangleMap& m, const ApproximationCertificate& cert,
                                        const DomainSpec& spec, std::optional<double> lambda) {
    ComparabilityRecord r;
    r.ell = polyline_distance(spec.arc(Arc::ab), spec.arc(Arc::cd));
    r.ell_prime = polyline_distance(spec.arc(Arc::bc), spec.arc(Arc::da));
    r.area = spec.boundary().area();
    r.delta = cert.delta;
    r.lambda = lambda ? *lambda : extremal_length(m, ArcPair::primal).lambda;
    if (!(r.delta < 0.5 * std::min(r.ell, r.ell_prime))) {
        r.status = BoundStatus::inconclusive;
        return r;
    }
    r.lower = (r.ell - 2 * r.delta) * (r.ell - 2 * r.delta) / (2 * r.area);
    r.upper = 2 * r.area / ((r.ell_prime - 2 * r.delta) * (r.ell_prime - 2 * r.delta));
    const double slack = 1e-12 * r.lambda;
    r.status = (r.lower <= r.lambda + slack && r.lambda <= r.upper + slack) ? BoundStatus::pass : BoundStatus::fail;
    return r;
}

RateRecord el_rate_check(const MarkedRectangleMap& sub, const MarkedRectangleMap& full, double k_hat,
                         std::optional<double> l_sub, std::optional<double> l_full) {
    RateRecord r;
    r.k_hat = k_hat;
    r.l_sub = l_sub ? *l_sub : extremal_length(sub, ArcPair::primal).lambda;
    r.l_full = l_full ? *l_full : extremal_length(full, ArcPair::primal).lambda;
    r.diff = r.l_sub - r.l_full;
    r.eps = full.map().mesh_eps();
    for (int k = 0; k < 4; ++k) {
        Arc a = static_cast<Arc>(k);
        r.delta = std::max(r.delta, 2.0 * hausdorff_distance(sub.arc_polyline(a), full.arc_polyline(a)));
    }
    r.d_hat = polyline_distance(full.arc_span_polyline(Arc::ab), full.arc_span_polyline(Arc::cd));
    r.d_hat_prime = polyline_distance(full.arc_span_polyline(Arc::bc), full.arc_span_polyline(Arc::da));

    Polygon outer(positions_of(full.map(), full.map().boundary()));
    const double tol = default_tolerances().geom_rel * std::max(1.0, outer.diameter());
    for (const auto& v : sub.map().vertices())
        if (polygon_contains(outer, v.pos, tol) == Containment::outside) {
            r.note = "sub map leaves the full map";
            return r;
        }
    if (!(k_hat > 0)) {
        r.note = "K_hat = 0 gives the bracket [0, 0]";
        if (std::abs(r.diff) <= 1e-12 * std::max(1.0, r.l_full)) r.status = BoundStatus::pass;
        return r;
    }
    const double x = std::max(r.delta, r.eps);
    if (!(x <= r.d_hat_prime * std::exp(-2 * k_hat / r.l_full) && x <= r.d_hat * std::exp(-8 * k_hat * r.l_full))) {
        r.note = "mesh/approximation scale above the threshold";
        return r;
    }
    r.lower = -4 * k_hat / std::log(r.d_hat_prime / x);
    r.upper = 8 * k_hat * r.l_full * r.l_full / std::log(r.d_hat / x);
    r.status = (r.lower <= r.diff && r.diff <= r.upper) ? BoundStatus::pass : BoundStatus::fail;
    return r;
}

ShortContour find_short_contour(const OrthodiagonalMap& m, Point2 p0, Point2 p1, double delta, Color color) {
    const double eps = m.mesh_eps();
    const double len = dist(p0, p1);
    const double slack = 1e-12;
    if (!(delta >= 4 * eps * (1 - slack))) throw InputError("short contour needs delta >= 4 mesh_eps");
    if (!(len >= 8 * eps * (1 - slack))) throw InputError("short contour needs a segment of length >= 8 mesh_eps");
    Polyline ring = positions_of(m, m.boundary());
    Polygon region(ring);
    const double tol = slack * std::max(1.0, region.diameter());
    if (polygon_contains(region, p0, tol) == Containment::outside)
        throw InputError("segment lies outside the map");
    Polyline closed = ring;
    closed.push_back(ring.front());
    if (polyline_distance({p0, p1}, closed) < delta - tol)
        throw InputError("delta-neighbourhood of the segment leaves the map");

    auto gp = color == Color::primal ? extract_primal(m) : extract_dual(m);
    const WeightedGraph& g = *gp;
    const std::size_t n = g.vertex_count();
    std::vector<std::uint8_t> allowed(n, 0);
    for (std::size_t v = 0; v < n; ++v) allowed[v] = point_segment_distance(g.position(v), p0, p1) <= delta;

    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> d(n, inf);
    std::vector<std::size_t> pred(n, npos);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    for (std::size_t v = 0; v < n; ++v)
        if (allowed[v] && dist(g.position(v), p0) <= delta) {
            d[v] = 0.0;
            pq.push({0.0, v});
        }
    std::size_t hit = npos;
    while (!pq.empty()) {
        auto [dv, v] = pq.top();
        pq.pop();
        if (dv > d[v]) continue;
        if (dist(g.position(v), p1) <= delta) {
            hit = v;
            break;
        }
        for (const auto& inc : g.incident(v)) {
            if (!allowed[inc.neighbor]) continue;
            double nd = dv + dist(g.position(v), g.position(inc.neighbor));
            if (nd < d[inc.neighbor] || (nd == d[inc.neighbor] && v < pred[inc.neighbor])) {
                d[inc.neighbor] = nd;
                pred[inc.neighbor] = v;
                pq.push({nd, inc.neighbor});
            }
        }
    }
    if (hit == npos) throw VerificationError("no admissible short contour although the preconditions hold");
    ShortContour sc;
    std::vector<std::size_t> local{hit};
    while (pred[local.back()] != npos) local.push_back(pred[local.back()]);
    std::reverse(local.begin(), local.end());
    Polyline pts;
    for (std::size_t v : local) {
        sc.path.push_back(g.map_id(v));
        pts.push_back(g.position(v));
    }
    sc.length = polyline_length(pts);
    sc.bound = 2 * len * (1 + 4 * eps / delta);
    sc.hausdorff = hausdorff_distance(pts, {p0, p1});
    if (sc.length > sc.bound * (1 + slack)) throw VerificationError("short contour exceeds the length bound");
    if (sc.hausdorff > delta * (1 + 1e-9)) throw VerificationError("short contour leaves the delta-neighbourhood");
    return sc;
}

}  // namespace orthotile
