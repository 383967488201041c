#include "orthotile/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <limits>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include "orthotile/errors.hpp"
#include "orthotile/holo.hpp"

namespace orthotile {

ModulusProfile modulus_profile(const MarkedRectangleMap& m, const HarmonicField& h, const HarmonicField& h_tilde) {
    ModulusProfile p;
    const WeightedGraph& pg = m.primal();
    const WeightedGraph& dg = m.dual();
    if (h.values.size() != pg.vertex_count() || h_tilde.values.size() != dg.vertex_count())
        throw InputError("fields do not match the map");
    for (const auto& e : pg.edges()) p.chi = std::max(p.chi, std::abs(h.values[e.u] - h.values[e.v]));
    for (const auto& e : dg.edges())
        p.chi_dual = std::max(p.chi_dual, std::abs(h_tilde.values[e.u] - h_tilde.values[e.v]));
    p.eps = m.map().mesh_eps();
    p.d_hat_prime = polyline_distance(m.arc_span_polyline(Arc::bc), m.arc_span_polyline(Arc::da));
    p.k_hat = p.chi * std::log(p.d_hat_prime / p.eps);
    return p;
}

ModulusProfile modulus_profile(const MarkedRectangleMap& m) {
    TilingBuild tb = build_tiling(m);
    return modulus_profile(m, tb.h, tb.h_tilde.field);
}

namespace {

SegmentIndex boundary_index(const OrthodiagonalMap& m) {
    Polyline ring = positions_of(m, m.boundary());
    ring.push_back(ring.front());
    return SegmentIndex(ring);
}

}  // namespace

PointwiseReport modulus_pointwise_check(const MarkedRectangleMap& m, const HarmonicField& h,
                                        const std::vector<std::pair<VertexId, VertexId>>& pairs, double k_hat_global) {
    PointwiseReport rep;
    rep.bound = k_hat_global;
    const OrthodiagonalMap& om = m.map();
    const WeightedGraph& pg = m.primal();
    const double eps = om.mesh_eps();
    const double d_hat_prime = polyline_distance(m.arc_span_polyline(Arc::bc), m.arc_span_polyline(Arc::da));
    SegmentIndex bidx = boundary_index(om);
    for (auto [x, y] : pairs) {
        PairRecord pr{x, y, 0.0, true};
        std::size_t lx = x < om.vertex_count() ? pg.local(x) : npos;
        std::size_t ly = y < om.vertex_count() ? pg.local(y) : npos;
        if (lx == npos || ly == npos) {
            ++rep.skipped;
            rep.notes.push_back("pair (" + std::to_string(x) + ", " + std::to_string(y) + ") is not primal");
            continue;
        }
        const double d = dist(om.pos(x), om.pos(y));
        if (d > std::min(bidx.distance(om.pos(x)), bidx.distance(om.pos(y)))) {
            pr.bulk = false;
            ++rep.skipped;
            rep.notes.push_back("pair (" + std::to_string(x) + ", " + std::to_string(y) + ") is not in the bulk");
            rep.pairs.push_back(pr);
            continue;
        }
        pr.value = std::abs(h.values[ly] - h.values[lx]) * std::log(d_hat_prime / std::max(d, eps));
        rep.max_value = std::max(rep.max_value, pr.value);
        rep.pairs.push_back(pr);
    }
    rep.pass = rep.max_value <= k_hat_global;
    return rep;
}

std::vector<std::pair<VertexId, VertexId>> random_bulk_pairs(const MarkedRectangleMap& m, std::size_t count,
                                                              std::uint64_t seed) {
    const OrthodiagonalMap& om = m.map();
    SegmentIndex bidx = boundary_index(om);
    std::vector<VertexId> primal;
    std::vector<double> room;
    for (VertexId v = 0; v < om.vertex_count(); ++v)
        if (om.color(v) == Color::primal && !om.on_boundary(v)) {
            primal.push_back(v);
            room.push_back(bidx.distance(om.pos(v)));
        }
    std::vector<std::pair<VertexId, VertexId>> out;
    if (primal.empty()) return out;
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, primal.size() - 1);
    std::size_t attempts = 0;
    while (out.size() < count && attempts < 1000 * count) {
        ++attempts;
        std::size_t i = pick(rng), j = pick(rng);
        if (dist(om.pos(primal[i]), om.pos(primal[j])) <= std::min(room[i], room[j]))
            out.emplace_back(primal[i], primal[j]);
    }
    return out;
}

bool self_dual_symmetry(const MarkedRectangleMap& m) {
    const OrthodiagonalMap& om = m.map();
    const std::size_t n = om.vertex_count();
    if (n == 0) return false;
    Point2 lo = om.pos(0), hi = lo;
    for (const auto& v : om.vertices()) {
        lo = {std::min(lo.x, v.pos.x), std::min(lo.y, v.pos.y)};
        hi = {std::max(hi.x, v.pos.x), std::max(hi.y, v.pos.y)};
    }
    const Point2 c = 0.5 * (lo + hi);
    const double q = om.mesh_eps() * 0.25;
    const double tol = om.mesh_eps() * 1e-6;
    auto key = [&](Point2 p) {
        return std::make_pair(static_cast<long long>(std::floor(p.x / q)), static_cast<long long>(std::floor(p.y / q)));
    };
    struct PairHash {
        std::size_t operator()(const std::pair<long long, long long>& k) const {
            return std::hash<long long>()(k.first) * 1000003u ^ std::hash<long long>()(k.second);
        }
    };
    std::unordered_map<std::pair<long long, long long>, std::vector<VertexId>, PairHash> cells;
    for (VertexId v = 0; v < n; ++v) cells[key(om.pos(v))].push_back(v);
    auto find = [&](Point2 p) {
        auto k = key(p);
        for (long long dx = -1; dx <= 1; ++dx)
            for (long long dy = -1; dy <= 1; ++dy) {
                auto it = cells.find({k.first + dx, k.second + dy});
                if (it == cells.end()) continue;
                for (VertexId u : it->second)
                    if (dist(om.pos(u), p) <= tol) return u;
            }
        return npos;
    };
    std::set<std::array<VertexId, 4>> faces;
    for (const Face& f : om.faces()) {
        Face s = f;
        std::sort(s.begin(), s.end());
        faces.insert(s);
    }
    auto as_set = [](std::vector<VertexId> v) {
        std::sort(v.begin(), v.end());
        return v;
    };
    for (double turn : {1.0, -1.0}) {
        std::vector<VertexId> perm(n, npos);
        bool ok = true;
        for (VertexId v = 0; v < n && ok; ++v) {
            Point2 d = om.pos(v) - c;
            Point2 r = c + Point2{-turn * d.y, turn * d.x};
            VertexId u = find(r);
            if (u == npos || om.color(u) == om.color(v)) ok = false;
            perm[v] = u;
        }
        if (!ok) continue;
        for (const Face& f : om.faces()) {
            Face s{perm[f[0]], perm[f[1]], perm[f[2]], perm[f[3]]};
            std::sort(s.begin(), s.end());
            if (!faces.count(s)) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        auto image = [&](const std::vector<VertexId>& arc) {
            std::vector<VertexId> out;
            for (VertexId v : arc) out.push_back(perm[v]);
            return as_set(out);
        };
        const auto ab = image(m.arcs().ab), cd = image(m.arcs().cd);
        const auto bc = as_set(m.arcs().bc), da = as_set(m.arcs().da);
        if ((ab == bc && cd == da) || (ab == da && cd == bc)) return true;
    }
    return false;
}

std::optional<ReferenceMap> rectangle_reference(const DomainSpec& spec) {
    const Polygon& poly = spec.boundary();
    if (poly.size() != 4) return std::nullopt;
    const double tol = default_tolerances().geom_rel * std::max(1.0, poly.diameter());
    for (std::size_t i = 0; i < 4; ++i) {
        auto [p, q] = poly.edge(i);
        if (std::abs(p.x - q.x) > tol && std::abs(p.y - q.y) > tol) return std::nullopt;
    }
    for (const Point2& mk : spec.marked()) {
        bool corner = false;
        for (const Point2& v : poly.vertices()) corner = corner || dist(v, mk) <= tol;
        if (!corner) return std::nullopt;
    }
    const auto& mk = spec.marked();
    const Point2 a = mk[0], b = mk[1], c = mk[2];
    const double width = dist(b, c), height = dist(a, b);
    ReferenceMap ref;
    ref.b = b;
    const std::complex<double> u((c.x - b.x) / width, (c.y - b.y) / width);
    ref.scale = std::conj(u) / height;
    ref.L = width / height;
    return ref;
}

std::vector<Point2> probe_points(const DomainSpec& spec, double margin) {
    const Polygon& poly = spec.boundary();
    const double diam = poly.diameter();
    const double pitch = diam / 64.0;
    const BBox bb = poly.bbox();
    const double tol = default_tolerances().geom_rel * std::max(1.0, diam);
    std::vector<Point2> out;
    const long nx = static_cast<long>(std::floor((bb.hi.x - bb.lo.x) / pitch));
    const long ny = static_cast<long>(std::floor((bb.hi.y - bb.lo.y) / pitch));
    for (long j = 0; j <= ny; ++j)
        for (long i = 0; i <= nx; ++i) {
            Point2 p{bb.lo.x + static_cast<double>(i) * pitch, bb.lo.y + static_cast<double>(j) * pitch};
            if (polygon_contains(poly, p, tol) != Containment::inside) continue;
            if (boundary_distance(poly, p) < margin * diam) continue;
            out.push_back(p);
        }
    return out;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

ConvergenceReport convergence_run(const DomainSpec& spec, double eps0, int levels, const ConvergenceOptions& opt) {
    if (levels < 2) throw InputError("a convergence run needs at least two levels");
    if (!(eps0 > 0) || !std::isfinite(eps0)) throw InputError("initial mesh size must be positive");
    if (!(opt.probe_margin > 0) || !(opt.probe_margin < 0.5)) throw InputError("probe margin must lie in (0, 0.5)");
    ConvergenceReport rep;
    rep.spec = domain_to_json(spec);
    rep.eps0 = eps0;
    rep.levels_requested = levels;
    rep.probe_margin = opt.probe_margin;
    rep.probe_pitch = spec.boundary().diameter() / 64.0;
    rep.timings = opt.timings;
    const auto probes = probe_points(spec, opt.probe_margin);
    rep.probe_count = probes.size();
    const auto ref = rectangle_reference(spec);
    rep.reference = ref ? "affine" : "none";
    if (ref) rep.L_ref = ref->L;
    if (!opt.persist_dir.empty()) std::filesystem::create_directories(opt.persist_dir);

    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<std::vector<std::complex<double>>> probe_vals;
    double eps = eps0;
    for (int k = 0; k < levels; ++k, eps *= 0.5) {
        LevelRecord rec;
        rec.eps = eps;
        std::vector<std::complex<double>> vals(probes.size(), {nan, nan});
        try {
            auto t0 = Clock::now();
            GridOptions gopt;
            if (opt.origin_shift) {
                const BBox bb = spec.boundary().bbox();
                gopt.origin = Point2{bb.lo.x + eps * opt.origin_shift->x, bb.lo.y + eps * opt.origin_shift->y};
            }
            GridApproximation ga = grid_approximation(spec, eps, gopt);
            rec.t_generate = seconds_since(t0);
            const MarkedRectangleMap& m = ga.map;
            rec.mesh_eps = m.map().mesh_eps();
            rec.delta = ga.cert.delta;
            rec.face_count = m.map().face_count();
            rec.vertex_count = m.map().vertex_count();

            t0 = Clock::now();
            TilingBuild tb = build_tiling(m, opt.solver);
            rec.t_tile = seconds_since(t0);
            rec.L = tb.tiling.L;
            rec.cycle_residual = tb.h_tilde.max_cycle_residual;
            rec.degenerate_tiles = tb.tiling.degenerate_count;

            t0 = Clock::now();
            TilingReport tr = verify_tiling(tb.tiling);
            rec.t_verify = seconds_since(t0);
            rec.containment = tr.max_containment_excess;
            rec.overlap = tr.total_overlap;
            rec.area_defect = rec.L > 0 ? tr.area_defect / rec.L : tr.area_defect;

            t0 = Clock::now();
            DiscreteHolomorphic F = assemble(m, tb.h, tb.h_tilde.field);
            rec.max_cr_residual = F.max_cr_residual();
            InterpolatedMap imap(m, tb.h, tb.h_tilde.field);
            rec.tiling_discrepancy = imap.tiling_discrepancy(tb.tiling);
            double dev = 0.0;
            for (std::size_t i = 0; i < probes.size(); ++i) {
                if (imap.locate(probes[i]) == npos) continue;
                vals[i] = imap.evaluate(probes[i]);
                ++rec.probes_located;
                if (ref) dev = std::max(dev, std::abs(vals[i] - (*ref)(probes[i])));
            }
            if (ref && rec.probes_located > 0) rec.sup_dev_vs_reference = dev;
            rec.t_assemble = seconds_since(t0);

            rec.lambda_dual = extremal_length(m, ArcPair::dual, opt.solver).lambda;
            rec.duality_defect = std::abs(rec.L * rec.lambda_dual - 1.0);
            ModulusProfile mp = modulus_profile(m, tb.h, tb.h_tilde.field);
            rec.chi = mp.chi;
            rec.chi_dual = mp.chi_dual;
            rec.k_hat = mp.k_hat;
            rec.d_hat_prime = mp.d_hat_prime;
            rec.d_hat = polyline_distance(m.arc_span_polyline(Arc::ab), m.arc_span_polyline(Arc::cd));
            rec.self_dual = self_dual_symmetry(m);

            if (!opt.persist_dir.empty()) {
                const std::string base = opt.persist_dir + "/level_" + std::to_string(k);
                write_text_file(base + "_map.json", dump_json(marked_map_to_json(m)));
                write_text_file(base + "_tiling.json", dump_json(tiling_to_json(tb.tiling)));
            }
        } catch (const Error& e) {
            rec.error = e.what();
        }
        if (!opt.timings) rec.t_generate = rec.t_tile = rec.t_verify = rec.t_assemble = 0.0;
        rep.levels.push_back(std::move(rec));
        probe_vals.push_back(std::move(vals));
    }

    for (std::size_t k = 0; k + 1 < rep.levels.size(); ++k) {
        if (!rep.levels[k].ok() || !rep.levels[k + 1].ok()) continue;
        double dev = 0.0;
        bool any = false;
        for (std::size_t i = 0; i < probes.size(); ++i) {
            if (std::isnan(probe_vals[k][i].real()) || std::isnan(probe_vals[k + 1][i].real())) continue;
            dev = std::max(dev, std::abs(probe_vals[k][i] - probe_vals[k + 1][i]));
            any = true;
        }
        if (any) rep.levels[k].sup_dev_vs_next_level = dev;
    }
    for (const auto& rec : rep.levels) {
        if (!rec.ok()) continue;
        rep.k_hat_calibrated = 4.0 * rec.k_hat;
        if (rec.sup_dev_vs_reference) rep.rate_constant = *rec.sup_dev_vs_reference * std::log(1.0 / rec.eps);
        break;
    }
    return rep;
}

namespace {

Json opt_json(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

}  // namespace

Json report_to_json(const ConvergenceReport& r) {
    Json j;
    j["schema_version"] = kReportSchemaVersion;
    j["spec"] = r.spec;
    j["eps0"] = r.eps0;
    j["levels_requested"] = r.levels_requested;
    j["probe_margin"] = r.probe_margin;
    j["probe_pitch"] = r.probe_pitch;
    j["probe_count"] = r.probe_count;
    j["reference"] = r.reference;
    j["L_ref"] = opt_json(r.L_ref);
    j["calibration"] = {{"rule", kCalibrationRule}, {"K_hat", r.k_hat_calibrated}};
    j["rate_constant"] = opt_json(r.rate_constant);
    Json levels = Json::array();
    for (const auto& l : r.levels) {
        Json e;
        e["eps"] = l.eps;
        e["mesh_eps"] = l.mesh_eps;
        if (!l.ok()) {
            e["error"] = l.error;
            levels.push_back(std::move(e));
            continue;
        }
        e["delta"] = l.delta;
        e["L"] = l.L;
        e["lambda_dual"] = l.lambda_dual;
        e["duality_defect"] = l.duality_defect;
        e["face_count"] = l.face_count;
        e["vertex_count"] = l.vertex_count;
        e["sup_dev_vs_reference"] = opt_json(l.sup_dev_vs_reference);
        e["sup_dev_vs_next_level"] = opt_json(l.sup_dev_vs_next_level);
        e["probes_located"] = l.probes_located;
        e["chi"] = l.chi;
        e["chi_dual"] = l.chi_dual;
        e["K_hat"] = l.k_hat;
        e["d_hat"] = l.d_hat;
        e["d_hat_prime"] = l.d_hat_prime;
        e["tiling_defects"] = {{"containment", l.containment},
                               {"overlap", l.overlap},
                               {"area_rel", l.area_defect},
                               {"degenerate_tiles", l.degenerate_tiles}};
        e["cycle_residual"] = l.cycle_residual;
        e["max_cr_residual"] = l.max_cr_residual;
        e["tiling_discrepancy"] = l.tiling_discrepancy;
        e["self_dual"] = l.self_dual;
        if (r.timings)
            e["runtimes"] = {{"generate", l.t_generate}, {"tile", l.t_tile}, {"verify", l.t_verify},
                             {"assemble", l.t_assemble}};
        levels.push_back(std::move(e));
    }
    j["levels"] = std::move(levels);
    return j;
}

std::string report_to_csv(const ConvergenceReport& r) {
    std::ostringstream os;
    os << "level,eps,mesh_eps,delta,L,lambda_dual,duality_defect,face_count,sup_dev_vs_reference,"
          "sup_dev_vs_next_level,chi,chi_dual,K_hat,containment,overlap,area_rel,degenerate_tiles,self_dual,error\n";
    auto num = [](double v) { return fmt12(v); };
    auto opt = [&](const std::optional<double>& v) { return v ? num(*v) : std::string(); };
    for (std::size_t k = 0; k < r.levels.size(); ++k) {
        const auto& l = r.levels[k];
        std::string err = l.error;
        std::replace(err.begin(), err.end(), ',', ';');
        std::replace(err.begin(), err.end(), '\n', ' ');
        os << k << ',' << num(l.eps) << ',' << num(l.mesh_eps) << ',' << num(l.delta) << ',' << num(l.L) << ','
           << num(l.lambda_dual) << ',' << num(l.duality_defect) << ',' << l.face_count << ','
           << opt(l.sup_dev_vs_reference) << ',' << opt(l.sup_dev_vs_next_level) << ',' << num(l.chi) << ','
           << num(l.chi_dual) << ',' << num(l.k_hat) << ',' << num(l.containment) << ',' << num(l.overlap) << ','
           << num(l.area_defect) << ',' << l.degenerate_tiles << ',' << (l.self_dual ? 1 : 0) << ',' << err << '\n';
    }
    return os.str();
}

}  // namespace orthotile
