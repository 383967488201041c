#include "cli.hpp"

#include <algorithm>
#include <exception>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "orthotile/errors.hpp"
#include "orthotile/experiments.hpp"
#include "orthotile/extremal.hpp"
#include "orthotile/gridgen.hpp"
#include "orthotile/io.hpp"
#include "orthotile/tiling.hpp"

namespace orthotile::cli {

namespace {

Point2 parse_point(const std::string& s) {
    std::istringstream is(s);
    Point2 p;
    char comma = 0;
    if (!(is >> p.x >> comma >> p.y) || comma != ',' || !is_finite(p)) throw InputError("expected X,Y but got '" + s + "'");
    is >> std::ws;
    if (!is.eof()) throw InputError("expected X,Y but got '" + s + "'");
    return p;
}

MarkedRectangleMap load_map(const std::string& path) {
    MarkedRectangleMap m = marked_map_from_json(parse_json(read_text_file(path), path));
    ValidationReport vr = validate(m.map());
    if (!vr.ok()) {
        const Violation& v = vr.violations.front();
        throw InputError(path + ": not an orthodiagonal map (" + to_string(v.kind) + ": " + v.message + ")");
    }
    return m;
}

struct GenerateArgs {
    std::string domain, out, cert, origin_shift;
    double mesh = 0.0;
};

struct TileArgs {
    std::string map, out, svg;
    double tol = default_tolerances().solver_rel;
};

struct VerifyArgs {
    std::string tiling;
    double tol = default_tolerances().verify;
};

struct ConvergeArgs {
    std::string domain, report, csv, persist, origin_shift;
    double mesh0 = 0.0, margin = 0.1;
    double tol = default_tolerances().solver_rel;
    int levels = 0;
    bool timings = false;
};

std::optional<Point2> origin_shift_of(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return parse_point(s);
}

int cmd_generate(const GenerateArgs& a, std::ostream& out) {
    DomainSpec spec = domain_from_json(parse_json(read_text_file(a.domain), a.domain));
    GridOptions opt;
    if (auto shift = origin_shift_of(a.origin_shift)) {
        const BBox bb = spec.boundary().bbox();
        opt.origin = Point2{bb.lo.x + a.mesh * shift->x, bb.lo.y + a.mesh * shift->y};
    }
    GridApproximation ga = grid_approximation(spec, a.mesh, opt);
    Json j = marked_map_to_json(ga.map);
    j["certificate"] = certificate_to_json(ga.cert);
    write_text_file(a.out, dump_json(j));
    if (!a.cert.empty()) write_text_file(a.cert, dump_json(certificate_to_json(ga.cert)));
    out << "faces " << ga.map.map().face_count() << "\n";
    out << "vertices " << ga.map.map().vertex_count() << "\n";
    out << "mesh_eps " << fmt12(ga.map.map().mesh_eps()) << "\n";
    out << "delta " << fmt12(ga.cert.delta) << "\n";
    return 0;
}

void print_report(const TilingReport& r, const Tiling& t, std::ostream& out) {
    out << "containment_excess " << fmt12(r.max_containment_excess) << (r.containment_ok ? " ok" : " FAIL") << "\n";
    out << "overlap_total " << fmt12(r.total_overlap) << (r.overlap_ok ? " ok" : " FAIL") << "\n";
    out << "area_sum " << fmt12(r.area_sum) << " L " << fmt12(r.L) << (r.area_ok ? " ok" : " FAIL") << "\n";
    for (const auto& p : r.pairs)
        out << "overlap tile " << p.a << " (face " << t.tiles[p.a].face << ") tile " << p.b << " (face "
            << t.tiles[p.b].face << ") area " << fmt12(p.area) << "\n";
    if (r.pair_count > r.pairs.size()) out << "overlapping pairs not listed " << r.pair_count - r.pairs.size() << "\n";
}

int cmd_tile(const TileArgs& a, std::ostream& out) {
    MarkedRectangleMap m = load_map(a.map);
    SolverOptions so;
    so.tol = a.tol;
    TilingBuild tb = build_tiling(m, so);
    write_text_file(a.out, dump_json(tiling_to_json(tb.tiling)));
    if (!a.svg.empty()) write_text_file(a.svg, render_svg(tb.tiling));
    TilingReport r = verify_tiling(tb.tiling);
    out << "L " << fmt12(tb.tiling.L) << "\n";
    out << "tiles " << tb.tiling.tiles.size() << " degenerate " << tb.tiling.degenerate_count << "\n";
    out << "solver_iterations " << tb.h.iterations << " rel_residual " << fmt12(tb.h.rel_residual) << "\n";
    out << "cycle_residual " << fmt12(tb.h_tilde.max_cycle_residual) << "\n";
    print_report(r, tb.tiling, out);
    return r.ok() ? 0 : static_cast<int>(ErrorKind::verification);
}

int cmd_verify(const VerifyArgs& a, std::ostream& out, std::ostream& err) {
    Tiling t = tiling_from_json(parse_json(read_text_file(a.tiling), a.tiling));
    TilingReport r = verify_tiling(t, a.tol);
    print_report(r, t, out);
    if (!r.ok()) {
        err << "tiling check failed";
        if (!r.pairs.empty()) err << ": tiles " << r.pairs.front().a << " and " << r.pairs.front().b << " overlap";
        err << "\n";
        return static_cast<int>(ErrorKind::verification);
    }
    return 0;
}

int cmd_duality(const std::string& path, double tol, std::ostream& out) {
    MarkedRectangleMap m = load_map(path);
    SolverOptions so;
    so.tol = tol;
    DualityResult d = duality_product(m, so);
    out << "lambda_primal " << fmt12(d.lambda_primal) << "\n";
    out << "lambda_dual " << fmt12(d.lambda_dual) << "\n";
    out << "product " << fmt12(d.product) << "\n";
    return 0;
}

std::string opt12(const std::optional<double>& v) { return v ? fmt12(*v) : std::string("-"); }

int cmd_converge(const ConvergeArgs& a, std::ostream& out) {
    DomainSpec spec = domain_from_json(parse_json(read_text_file(a.domain), a.domain));
    ConvergenceOptions opt;
    opt.probe_margin = a.margin;
    opt.origin_shift = origin_shift_of(a.origin_shift);
    opt.timings = a.timings;
    opt.persist_dir = a.persist;
    opt.solver.tol = a.tol;
    ConvergenceReport r = convergence_run(spec, a.mesh0, a.levels, opt);
    write_text_file(a.report, dump_json(report_to_json(r)));
    if (!a.csv.empty()) write_text_file(a.csv, report_to_csv(r));
    out << "probes " << r.probe_count << " reference " << r.reference << "\n";
    for (std::size_t k = 0; k < r.levels.size(); ++k) {
        const auto& l = r.levels[k];
        out << "level " << k << " eps " << fmt12(l.eps);
        if (!l.ok()) {
            out << " error " << l.error << "\n";
            continue;
        }
        out << " faces " << l.face_count << " L " << fmt12(l.L) << " dev_ref " << opt12(l.sup_dev_vs_reference)
            << " dev_next " << opt12(l.sup_dev_vs_next_level) << " K_hat " << fmt12(l.k_hat) << " duality_defect "
            << fmt12(l.duality_defect) << "\n";
    }
    out << "K_hat_calibrated " << fmt12(r.k_hat_calibrated) << "\n";
    return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Rectangle tilings of orthodiagonal maps", "orthotile"};
    app.require_subcommand(1);
    auto tol_range = CLI::Range(0.0, 1e-2);

    GenerateArgs ga;
    auto* gen = app.add_subcommand("generate", "Build a grid approximation of a marked polygon");
    gen->add_option("--domain", ga.domain, "Domain JSON")->required();
    gen->add_option("--mesh", ga.mesh, "Lattice spacing")->required();
    gen->add_option("--out", ga.out, "Output map JSON")->required();
    gen->add_option("--cert", ga.cert, "Also write the certificate here");
    gen->add_option("--origin-shift", ga.origin_shift, "Lattice anchor as SX,SY in mesh units from the bbox corner");

    TileArgs ta;
    auto* tile = app.add_subcommand("tile", "Solve and build the rectangle tiling of a map");
    tile->add_option("--map", ta.map, "Map JSON")->required();
    tile->add_option("--out", ta.out, "Output tiling JSON")->required();
    tile->add_option("--svg", ta.svg, "Output SVG");
    tile->add_option("--tol", ta.tol, "Solver relative residual")->check(tol_range);

    VerifyArgs va;
    auto* ver = app.add_subcommand("verify", "Check a tiling for containment, overlaps and area");
    ver->add_option("--tiling", va.tiling, "Tiling JSON")->required();
    ver->add_option("--tol", va.tol, "Relative tolerance")->check(tol_range);

    std::string dmap;
    double dtol = default_tolerances().solver_rel;
    auto* dual = app.add_subcommand("duality", "Print primal and dual extremal lengths");
    dual->add_option("--map", dmap, "Map JSON")->required();
    dual->add_option("--tol", dtol, "Solver relative residual")->check(tol_range);

    ConvergeArgs ca;
    auto* conv = app.add_subcommand("converge", "Refinement study with a JSON report");
    conv->add_option("--domain", ca.domain, "Domain JSON")->required();
    conv->add_option("--mesh0", ca.mesh0, "Coarsest lattice spacing")->required();
    conv->add_option("--levels", ca.levels, "Number of levels")->required()->check(CLI::Range(2, 30));
    conv->add_option("--report", ca.report, "Output report JSON")->required();
    conv->add_option("--csv", ca.csv, "Also write a CSV table");
    conv->add_option("--persist", ca.persist, "Directory for per-level map and tiling files");
    conv->add_option("--margin", ca.margin, "Probe margin, times the diameter")->check(CLI::Range(1e-6, 0.49));
    conv->add_option("--tol", ca.tol, "Solver relative residual")->check(tol_range);
    conv->add_option("--origin-shift", ca.origin_shift, "Lattice anchor as SX,SY in mesh units from the bbox corner");
    conv->add_flag("--timings", ca.timings, "Record runtimes in the report");

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        app.exit(e, out, err);
        return kExitUsage;
    }

    try {
        if (*gen) return cmd_generate(ga, out);
        if (*tile) return cmd_tile(ta, out);
        if (*ver) return cmd_verify(va, out, err);
        if (*dual) return cmd_duality(dmap, dtol, out);
        if (*conv) return cmd_converge(ca, out);
    } catch (const SolverError& e) {
        err << "solver error: " << e.what() << " (residual " << fmt12(e.residual()) << ")\n";
        return static_cast<int>(e.kind());
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return static_cast<int>(ErrorKind::input);
    }
    return kExitUsage;
}

}  // namespace orthotile::cli
