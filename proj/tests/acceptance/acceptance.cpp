// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "oracles.hpp"
#include "orthotile/errors.hpp"
#include "orthotile/experiments.hpp"
#include "orthotile/extremal.hpp"
#include "orthotile/holo.hpp"
#include "orthotile/tiling.hpp"

using namespace orthotile;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
    std::printf("criterion %2d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmt(const char* f, double a) {
    char buf[128];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

struct Named {
    std::string name;
    DomainSpec spec;
    double area;
};

std::vector<Named> domains() {
    return {{"rectangle", fixture::rectangle(2, 1), 2.0},
            {"square", fixture::unit_square(), 1.0},
            {"lshape", fixture::l_shape(), 3.0}};
}

// Lattice spacing giving about `faces` faces (two per lattice cell).
double eps_for_faces(double area, double faces) { return std::sqrt(2.0 * area / faces); }

struct Instance {
    std::string label;
    GridApproximation ga;
    TilingBuild tb;
    double seconds = 0.0;  // generate + tile + verify
    TilingReport rep;
};

std::vector<VertexId> random_box_contour(const OrthodiagonalMap& m, std::mt19937_64& rng);

bool admissible(const OrthodiagonalMap& m, const std::vector<VertexId>& cycle) {
    try {
        analyze_contour(m, cycle);
        return true;
    } catch (const InputError&) {
        return false;
    }
}

// Links of interior vertices whose side cycle avoids the boundary.
std::vector<std::vector<VertexId>> admissible_links(const OrthodiagonalMap& m) {
    std::vector<std::vector<VertexId>> out;
    for (VertexId v = 0; v < m.vertex_count(); ++v) {
        if (m.on_boundary(v)) continue;
        FaceSetBoundary b = face_set_boundary(m, m.vertex_faces()[v]);
        if (b.simple && admissible(m, b.cycle)) out.push_back(b.cycle);
    }
    return out;
}

// Boundary of the faces whose centroids fall in a random box, or failing that a random vertex link.
std::vector<VertexId> random_contour(const OrthodiagonalMap& m, const std::vector<std::vector<VertexId>>& links,
                                     std::mt19937_64& rng) {
    auto cyc = random_box_contour(m, rng);
    if (cyc.empty() && !links.empty()) cyc = links[rng() % links.size()];
    if (!cyc.empty() && rng() % 2) std::reverse(cyc.begin(), cyc.end());
    return cyc;
}

std::vector<VertexId> random_box_contour(const OrthodiagonalMap& m, std::mt19937_64& rng) {
    BBox bb{m.pos(0), m.pos(0)};
    for (VertexId v = 0; v < m.vertex_count(); ++v) {
        Point2 p = m.pos(v);
        bb.lo = {std::min(bb.lo.x, p.x), std::min(bb.lo.y, p.y)};
        bb.hi = {std::max(bb.hi.x, p.x), std::max(bb.hi.y, p.y)};
    }
    std::uniform_real_distribution<double> ux(bb.lo.x, bb.hi.x), uy(bb.lo.y, bb.hi.y);
    for (int attempt = 0; attempt < 200; ++attempt) {
        double x0 = ux(rng), x1 = ux(rng), y0 = uy(rng), y1 = uy(rng);
        if (x0 > x1) std::swap(x0, x1);
        if (y0 > y1) std::swap(y0, y1);
        if (x1 - x0 < 3 * m.mesh_eps() || y1 - y0 < 3 * m.mesh_eps()) continue;
        std::vector<std::size_t> faces;
        for (std::size_t f = 0; f < m.face_count(); ++f) {
            Point2 c = m.face_centroid(f);
            if (c.x > x0 && c.x < x1 && c.y > y0 && c.y < y1) faces.push_back(f);
        }
        if (faces.empty()) continue;
        FaceSetBoundary b = face_set_boundary(m, faces);
        if (b.simple && admissible(m, b.cycle)) return b.cycle;
    }
    return {};
}

}  // namespace

int main() {
    const auto t_start = Clock::now();

    // Criteria 1-4, 9, 11 share one pool of generated instances.
    std::vector<Instance> pool;
    for (const auto& d : domains()) {
        for (double eps : {0.25, 0.125, 1.0 / 32, eps_for_faces(d.area, 0.99e5)}) {
            auto t0 = Clock::now();
            GridApproximation ga = grid_approximation(d.spec, eps);
            TilingBuild tb = build_tiling(ga.map);
            TilingReport rep = verify_tiling(tb.tiling);
            Instance in{d.name + " eps " + fmt("%.5g", eps), std::move(ga), std::move(tb), seconds_since(t0),
                        std::move(rep)};
            std::printf("  built %-26s faces %7zu  L %.10f  %.2f s\n", in.label.c_str(), in.ga.map.map().face_count(),
                        in.tb.tiling.L, in.seconds);
            pool.push_back(std::move(in));
        }
    }

    {  // 1
        bool ok = true;
        double worst_cont = 0, worst_ovl = 0, worst_area = 0, worst_time = 0;
        std::size_t max_faces = 0;
        for (const auto& in : pool) {
            const double L = in.tb.tiling.L;
            const double cont = in.rep.max_containment_excess / std::max(L, 1.0);
            const double ovl = in.rep.total_overlap / L;
            const double area = in.rep.area_defect / L;
            worst_cont = std::max(worst_cont, cont);
            worst_ovl = std::max(worst_ovl, ovl);
            worst_area = std::max(worst_area, area);
            max_faces = std::max(max_faces, in.ga.map.map().face_count());
            if (in.ga.map.map().face_count() > 50000) worst_time = std::max(worst_time, in.seconds);
            if (!(cont <= 1e-12 && ovl <= 1e-12 && area <= 1e-9 && in.seconds <= 10.0)) {
                ok = false;
                std::printf("  [1] %s: containment %.3g overlap %.3g area %.3g time %.2f\n", in.label.c_str(), cont,
                            ovl, area, in.seconds);
            }
        }
        report(1, ok && max_faces >= 90000,
               "containment/L " + fmt("%.2e", worst_cont) + " overlap/L " + fmt("%.2e", worst_ovl) + " area rel " +
                   fmt("%.2e", worst_area) + " max faces " + std::to_string(max_faces) + " slowest large " +
                   fmt("%.2f s", worst_time));
    }

    {  // 2
        double worst = 0;
        std::vector<const MarkedRectangleMap*> maps;
        for (const auto& in : pool) maps.push_back(&in.ga.map);
        auto strip = fixture::strip();
        auto box = fixture::lattice_box(5, 3);
        maps.push_back(&strip);
        maps.push_back(&box);
        for (const auto* m : maps) worst = std::max(worst, std::abs(duality_product(*m).product - 1.0));
        report(2, worst <= 1e-8, "max |lambda_primal lambda_dual - 1| " + fmt("%.2e", worst) + " over " +
                                     std::to_string(maps.size()) + " maps");
    }

    {  // 3
        double worst_shift = 0, worst_cycle = 0;
        for (const auto& in : pool) {
            const auto& m = in.ga.map;
            HarmonicField direct = unit_potential(m.dual_ptr(), m.dual().locals(m.arcs().bc), m.dual().locals(m.arcs().da));
            const auto& ht = in.tb.h_tilde.field.values;
            double lo = 1e300, hi = -1e300;
            for (std::size_t i = 0; i < ht.size(); ++i) {
                lo = std::min(lo, ht[i] - direct.values[i]);
                hi = std::max(hi, ht[i] - direct.values[i]);
            }
            worst_shift = std::max(worst_shift, (hi - lo) / 2);
            worst_cycle = std::max(worst_cycle, in.tb.h_tilde.max_cycle_residual / in.tb.tiling.L);
        }
        report(3, worst_shift <= 1e-8 && worst_cycle <= 1e-8,
               "max deviation up to a constant " + fmt("%.2e", worst_shift) + " cycle residual/L " +
                   fmt("%.2e", worst_cycle));
    }

    {  // 4
        double worst = 0;
        std::size_t checked = 0;
        for (const auto& in : pool) {
            const auto& m = in.ga.map.map();
            for (const auto& tile : in.tb.tiling.tiles) {
                if (is_degenerate(tile, in.tb.tiling.L)) continue;
                FaceRoles r = m.roles(tile.face);
                const double ratio = dist(m.pos(r.w1), m.pos(r.w2)) / dist(m.pos(r.v1), m.pos(r.v2));
                worst = std::max(worst, std::abs(tile.height() / tile.width() - ratio) / (1 + ratio));
                ++checked;
            }
        }
        report(4, worst <= 1e-8, "max |h/w - r|/(1+r) " + fmt("%.2e", worst) + " over " + std::to_string(checked) +
                                     " tiles");
    }

    // Convergence runs for criteria 5, 6, 8.
    auto t0 = Clock::now();
    ConvergenceReport rect = convergence_run(fixture::rectangle(2, 1), 0.25, 6);
    const double rect_seconds = seconds_since(t0);
    {  // 5
        bool ok = rect_seconds <= 300.0 && rect.rate_constant.has_value();
        const double C = rect.rate_constant.value_or(0.0);
        std::string devs;
        for (std::size_t k = 0; k < rect.levels.size(); ++k) {
            const auto& l = rect.levels[k];
            if (!l.ok() || !l.sup_dev_vs_reference) {
                ok = false;
                continue;
            }
            const double dev = *l.sup_dev_vs_reference;
            devs += fmt(" %.4g", dev);
            if (k > 0 && !(dev < *rect.levels[k - 1].sup_dev_vs_reference)) ok = false;
            if (dev > C / std::log(1.0 / l.eps) * (1 + 1e-12)) ok = false;
        }
        const double lerr = std::abs(rect.levels.back().L - 2.0);
        ok = ok && lerr <= 0.1;
        report(5, ok, "sup dev" + devs + " C " + fmt("%.4g", C) + " |L-2| " + fmt("%.3g", lerr) + " runtime " +
                          fmt("%.1f s", rect_seconds));
    }

    {  // 6
        bool ok = true;
        double worst_ratio = 0;
        const double K = rect.k_hat_calibrated;
        for (const auto& l : rect.levels) {
            if (!l.ok()) {
                ok = false;
                continue;
            }
            const double x = std::max(l.delta, l.mesh_eps);
            const double lg = std::log(l.d_hat / x);
            const double env = lg > 0 ? 8 * K * 4 / lg : INFINITY;
            const double diff = std::abs(l.L - 2.0);
            worst_ratio = std::max(worst_ratio, diff / env);
            if (!(diff <= env)) ok = false;
        }
        report(6, ok, "K_hat " + fmt("%.4g", K) + " max |L_n-2| / envelope " + fmt("%.3g", worst_ratio));
    }

    {  // 7
        bool ok = true;
        std::size_t symmetric = 0;
        double worst_sym = 0, fallback = 0;
        ConvergenceOptions shifted;
        shifted.origin_shift = Point2{0.0, 0.5};
        for (const ConvergenceReport& r : {convergence_run(fixture::unit_square(), 0.25, 5, shifted),
                                           convergence_run(fixture::unit_square(), 0.25, 5)}) {
            for (const auto& l : r.levels) {
                if (!l.ok()) {
                    ok = false;
                    continue;
                }
                const double err = std::abs(l.L - 1.0);
                if (l.self_dual) {
                    ++symmetric;
                    worst_sym = std::max(worst_sym, err);
                    if (err > 1e-8) ok = false;
                } else if (std::abs(l.eps - 1.0 / 64) < 1e-15) {
                    fallback = std::max(fallback, err);
                    if (err > 0.05) ok = false;
                }
            }
        }
        report(7, ok && symmetric > 0, std::to_string(symmetric) + " symmetric levels, max |L-1| " +
                                           fmt("%.2e", worst_sym) + "; asymmetric at 1/64 " + fmt("%.3g", fallback));
    }

    {  // 8
        bool ok = true;
        std::string detail;
        ConvergenceOptions shifted;
        shifted.origin_shift = Point2{0.0, 0.5};
        std::vector<std::pair<std::string, ConvergenceReport>> runs;
        runs.emplace_back("rectangle", rect);
        runs.emplace_back("square", convergence_run(fixture::unit_square(), 0.25, 5, shifted));
        runs.emplace_back("lshape", convergence_run(fixture::l_shape(), 0.25, 5));
        for (const auto& [name, r] : runs) {
            double worst = 0;
            for (const auto& l : r.levels) {
                if (!l.ok()) {
                    ok = false;
                    continue;
                }
                worst = std::max(worst, l.k_hat / r.k_hat_calibrated);
            }
            if (worst > 1.0) ok = false;
            detail += name + " max K_n/(4 K_0) " + fmt("%.3f", worst) + "  ";
        }
        report(8, ok, detail);
    }

    {  // 9
        std::mt19937_64 rng(9);
        bool ok = true;
        double worst = 0;
        std::size_t contours = 0, maps = 0, without = 0;
        for (const auto& in : pool) {
            if (in.ga.map.map().face_count() > 20000) continue;
            const auto links = admissible_links(in.ga.map.map());
            if (links.empty()) {
                // Every side cycle of this map meets the boundary; no contour is admissible.
                ++without;
                continue;
            }
            ++maps;
            DiscreteHolomorphic F = assemble(in.ga.map, in.tb.h, in.tb.h_tilde.field);
            const double fmax = F.max_abs();
            for (int c = 0; c < 20; ++c) {
                auto cyc = random_contour(in.ga.map.map(), links, rng);
                if (cyc.empty()) {
                    ok = false;
                    std::printf("  [9] %s: no admissible contour found\n", in.label.c_str());
                    break;
                }
                const double per = analyze_contour(in.ga.map.map(), cyc).perimeter;
                const double rel = std::abs(contour_integral(F, cyc)) / (per * fmax);
                worst = std::max(worst, rel);
                if (rel > 1e-9) ok = false;
                ++contours;
            }
        }
        report(9, ok && maps > 0, std::to_string(contours) + " contours on " + std::to_string(maps) + " maps (" +
                                      std::to_string(without) + " maps admit none), max |I|/(perimeter max|F|) " +
                                      fmt("%.2e", worst));
    }

    {  // 10
        std::mt19937_64 rng(10);
        std::vector<GridApproximation> maps{grid_approximation(fixture::unit_square(), 1.0 / 64),
                                            grid_approximation(fixture::l_shape(), 1.0 / 32)};
        std::vector<DomainSpec> specs{fixture::unit_square(), fixture::l_shape()};
        int cases = 0, no_path = 0, bad = 0;
        double worst_len = 0, worst_haus = 0;
        for (int attempt = 0; attempt < 100000 && cases < 50; ++attempt) {
            const std::size_t which = attempt % 2;
            const auto& m = maps[which].map.map();
            const BBox bb = specs[which].boundary().bbox();
            const Polyline ring = positions_of(m, m.boundary());
            const double e = m.mesh_eps();
            std::uniform_real_distribution<double> ux(bb.lo.x, bb.hi.x), uy(bb.lo.y, bb.hi.y), ud(4 * e, 12 * e),
                ua(0, 2 * M_PI), ul(8 * e, 0.6);
            const Point2 p0{ux(rng), uy(rng)};
            const double delta = ud(rng), len = ul(rng), ang = ua(rng);
            const Point2 p1{p0.x + len * std::cos(ang), p0.y + len * std::sin(ang)};
            // The map must contain the closed delta-neighbourhood of the segment.
            if (!ring_contains(ring, p0) || !ring_contains(ring, p1)) continue;
            bool clear = true;
            for (std::size_t i = 0; i < ring.size() && clear; ++i)
                if (segment_segment_distance(p0, p1, ring[i], ring[(i + 1) % ring.size()]) <= delta) clear = false;
            if (!clear) continue;
            ++cases;
            const Color col = (rng() % 2) ? Color::primal : Color::dual;
            try {
                ShortContour sc = find_short_contour(m, p0, p1, delta, col);
                worst_len = std::max(worst_len, sc.length / sc.bound);
                worst_haus = std::max(worst_haus, sc.hausdorff / delta);
                if (sc.length > sc.bound || sc.hausdorff > delta) ++bad;
            } catch (const Error& err) {
                ++no_path;
                std::printf("  [10] case %d: %s\n", cases, err.what());
            }
        }
        report(10, cases == 50 && no_path == 0 && bad == 0,
               std::to_string(cases) + " cases, failures " + std::to_string(no_path + bad) + ", max length/bound " +
                   fmt("%.3f", worst_len) + ", max hausdorff/delta " + fmt("%.3f", worst_haus));
    }

    {  // 11
        int pass = 0, fail = 0, inconclusive = 0;
        for (const auto& d : domains())
            for (int k = 2; k <= 7; ++k) {
                auto ga = grid_approximation(d.spec, std::ldexp(1.0, -k));
                auto rec = comparability_check(ga.map, ga.cert, d.spec);
                if (rec.status == BoundStatus::pass) ++pass;
                else if (rec.status == BoundStatus::fail) {
                    ++fail;
                    std::printf("  [11] %s 2^-%d: lambda %.6f outside [%.6f, %.6f]\n", d.name.c_str(), k, rec.lambda,
                                rec.lower, rec.upper);
                } else
                    ++inconclusive;
            }
        report(11, fail == 0 && pass > 0, std::to_string(pass) + " inside, " + std::to_string(fail) + " outside, " +
                                              std::to_string(inconclusive) + " without the delta precondition");
    }

    {  // 12
        double worst = 0;
        std::size_t instances = 0;
        auto check = [&](std::shared_ptr<const WeightedGraph> g, const std::vector<VertexId>& s,
                         const std::vector<VertexId>& t) {
            if (g->vertex_count() > 500) return;
            PinnedValues pin;
            for (auto i : g->locals(s)) pin[i] = 0.0;
            for (auto i : g->locals(t)) pin[i] = 1.0;
            auto dense = oracle::dense_dirichlet(*g, pin);
            auto cg = solve_dirichlet(g, pin);
            for (std::size_t i = 0; i < dense.size(); ++i) worst = std::max(worst, std::abs(dense[i] - cg.values[i]));
            ++instances;
        };
        std::vector<MarkedRectangleMap> maps{fixture::strip(), fixture::lattice_box(4, 4), fixture::lattice_box(7, 3)};
        for (const auto& d : domains())
            for (double eps : {0.5, 0.25, 0.125}) {
                try {
                    maps.push_back(grid_approximation(d.spec, eps).map);
                } catch (const GenerationError&) {
                }
            }
        for (const auto& m : maps) {
            check(m.primal_ptr(), m.arcs().ab, m.arcs().cd);
            check(m.dual_ptr(), m.arcs().bc, m.arcs().da);
        }
        const bool dense_ok = worst <= 1e-8 && instances > 0;

        auto ga = grid_approximation(fixture::unit_square(), 0.125);
        const auto& g = ga.map.primal();
        PinnedValues pin;
        for (auto i : g.locals(ga.map.arcs().ab)) pin[i] = 0.0;
        for (auto i : g.locals(ga.map.arcs().cd)) pin[i] = 1.0;
        auto cg = solve_dirichlet(ga.map.primal_ptr(), pin);
        std::vector<std::size_t> free, probes;
        for (std::size_t i = 0; i < g.vertex_count(); ++i)
            if (!pin.count(i)) free.push_back(i);
        for (std::size_t k = 1; k <= 5; ++k) probes.push_back(free[k * free.size() / 6]);
        double worst_sigma = 0;
        for (std::size_t k = 0; k < probes.size(); ++k) {
            auto est = random_walk_oracle(g, pin, probes[k], 10000, 1000 + k);
            worst_sigma = std::max(worst_sigma, std::abs(est.estimate - cg.values[probes[k]]) / est.std_error);
        }
        const bool walk_ok = probes.size() == 5 && worst_sigma <= 3.0;
        report(12, dense_ok && walk_ok, "dense oracle max diff " + fmt("%.2e", worst) + " on " +
                                            std::to_string(instances) + " graphs; random walk max " +
                                            fmt("%.2f sigma", worst_sigma) + " at " + std::to_string(probes.size()) +
                                            " probes");
    }

    std::printf("acceptance: %d failing, total %.1f s\n", failures, seconds_since(t_start));
    return failures == 0 ? 0 : 1;
}
