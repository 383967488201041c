#include "orthotile/harmonic.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <random>
#include <string>

#include "orthotile/errors.hpp"
#include "orthotile/io.hpp"
#include "orthotile/kernels.hpp"

namespace orthotile {

double dirichlet_energy(const WeightedGraph& g, const std::vector<double>& f) {
    // blocked sum for thread-count independence
    const auto& es = g.edges();
    const std::size_t n = es.size();
    constexpr std::size_t block = 2048;
    const std::size_t nb = (n + block - 1) / block;
    std::vector<double> part(nb, 0.0);
    const long lnb = static_cast<long>(nb);
#pragma omp parallel for schedule(static) num_threads(thread_count()) if (n >= 8192)
    for (long b = 0; b < lnb; ++b) {
        double s = 0.0;
        std::size_t lo = static_cast<std::size_t>(b) * block, hi = std::min(n, lo + block);
        for (std::size_t k = lo; k < hi; ++k) {
            double d = f[es[k].v] - f[es[k].u];
            s += es[k].conductance * d * d;
        }
        part[b] = s;
    }
    double s = 0.0;
    for (double p : part) s += p;
    return s;
}

std::vector<double> laplacian(const WeightedGraph& g, const std::vector<double>& f) {
    std::vector<double> out(g.vertex_count(), 0.0);
    for (std::size_t x = 0; x < g.vertex_count(); ++x) {
        double s = 0.0;
        for (const auto& inc : g.incident(x)) s += g.edge(inc.edge).conductance * (f[inc.neighbor] - f[x]);
        out[x] = s;
    }
    return out;
}

double flow_energy(const WeightedGraph& g, const std::vector<double>& theta) {
    double s = 0.0;
    for (std::size_t e = 0; e < g.edge_count(); ++e) s += g.edge(e).resistance * theta[e] * theta[e];
    return s;
}

std::vector<double> divergence(const WeightedGraph& g, const std::vector<double>& theta) {
    std::vector<double> div(g.vertex_count(), 0.0);
    for (std::size_t e = 0; e < g.edge_count(); ++e) {
        div[g.edge(e).u] += theta[e];
        div[g.edge(e).v] -= theta[e];
    }
    return div;
}

HarmonicField solve_dirichlet(std::shared_ptr<const WeightedGraph> gp, const PinnedValues& pinned, const SolverOptions& opt) {
    const WeightedGraph& g = *gp;
    const std::size_t n = g.vertex_count();
    if (pinned.empty()) throw InputError("solve_dirichlet needs at least one pinned vertex");
    HarmonicField out;
    out.graph = gp;
    out.values.assign(n, 0.0);
    out.pinned.assign(n, 0);
    for (const auto& [v, val] : pinned) {
        if (v >= n) throw InputError("pinned vertex " + std::to_string(v) + " out of range");
        if (!std::isfinite(val)) throw InputError("pinned value is not finite");
        out.pinned[v] = 1;
        out.values[v] = val;
    }
    // every free vertex must reach a pinned one
    std::vector<std::uint8_t> seen(out.pinned);
    std::deque<std::size_t> queue;
    for (const auto& kv : pinned) queue.push_back(kv.first);
    while (!queue.empty()) {
        std::size_t x = queue.front();
        queue.pop_front();
        for (const auto& inc : g.incident(x))
            if (!seen[inc.neighbor]) {
                seen[inc.neighbor] = 1;
                queue.push_back(inc.neighbor);
            }
    }
    for (std::size_t v = 0; v < n; ++v)
        if (!seen[v]) throw SolverError("vertex " + std::to_string(v) + " lies in a free component with no pinned vertex");

    std::vector<std::size_t> free_index(n, npos), free_vertices;
    for (std::size_t v = 0; v < n; ++v)
        if (!out.pinned[v]) {
            free_index[v] = free_vertices.size();
            free_vertices.push_back(v);
        }
    const std::size_t nf = free_vertices.size();
    CsrMatrix a;
    a.n = nf;
    a.row_ptr.assign(nf + 1, 0);
    std::vector<double> b(nf, 0.0), diag_inv(nf, 0.0);
    for (std::size_t i = 0; i < nf; ++i) {
        std::size_t x = free_vertices[i];
        a.col.push_back(i);
        a.val.push_back(g.weight(x));
        for (const auto& inc : g.incident(x)) {
            double c = g.edge(inc.edge).conductance;
            if (out.pinned[inc.neighbor]) {
                b[i] += c * out.values[inc.neighbor];
            } else {
                a.col.push_back(free_index[inc.neighbor]);
                a.val.push_back(-c);
            }
        }
        a.row_ptr[i + 1] = a.col.size();
        diag_inv[i] = 1.0 / g.weight(x);
    }
    std::vector<double> x(nf, 0.0);
    std::size_t max_iter = opt.max_iter;
    if (max_iter == 0)
        max_iter = std::max<std::size_t>(10000, static_cast<std::size_t>(20.0 * std::sqrt(static_cast<double>(nf))));
    CgResult cg = pcg(a, diag_inv, b, x, opt.tol, max_iter, opt.parallel);
    if (!cg.converged)
        throw SolverError("conjugate gradient did not converge in " + std::to_string(cg.iterations) +
                              " iterations (relative residual " + fmt12(cg.rel_residual) + ")",
                          cg.rel_residual);
    out.iterations = cg.iterations;

    // Iterative refinement: residuals in long double, corrections by CG in double.
    std::vector<long double> xl(n);
    for (std::size_t v = 0; v < n; ++v) xl[v] = out.values[v];
    for (std::size_t i = 0; i < nf; ++i) xl[free_vertices[i]] = x[i];
    long double bnorm = 0.0L;
    for (double bi : b) bnorm += static_cast<long double>(bi) * bi;
    bnorm = std::sqrt(bnorm);
    std::vector<double> r(nf), d(nf);
    auto residual = [&] {
        long double s2 = 0.0L;
        for (std::size_t i = 0; i < nf; ++i) {
            const std::size_t v = free_vertices[i];
            long double s = 0.0L;
            for (const auto& inc : g.incident(v))
                s += static_cast<long double>(g.edge(inc.edge).conductance) * (xl[inc.neighbor] - xl[v]);
            r[i] = static_cast<double>(s);
            s2 += s * s;
        }
        return std::sqrt(s2);
    };
    long double rnorm = residual();
    for (std::size_t step = 0; step < opt.refine_steps && bnorm > 0 && rnorm > 1e-19L * bnorm; ++step) {
        std::fill(d.begin(), d.end(), 0.0);
        CgResult c = pcg(a, diag_inv, r, d, 1e-8, max_iter, opt.parallel);
        out.iterations += c.iterations;
        std::vector<long double> saved(nf);
        for (std::size_t i = 0; i < nf; ++i) {
            saved[i] = xl[free_vertices[i]];
            xl[free_vertices[i]] += d[i];
        }
        const long double next = residual();
        if (!(next < rnorm)) {  // stagnated at the extended-precision floor
            for (std::size_t i = 0; i < nf; ++i) xl[free_vertices[i]] = saved[i];
            rnorm = residual();
            break;
        }
        rnorm = next;
    }
    out.rel_residual = bnorm > 0 ? static_cast<double>(rnorm / bnorm) : 0.0;
    for (std::size_t v = 0; v < n; ++v) out.values[v] = static_cast<double>(xl[v]);
    out.precise = std::move(xl);
    auto lap = laplacian(g, out.values);
    for (std::size_t v = 0; v < n; ++v)
        if (!out.pinned[v]) out.residual = std::max(out.residual, std::abs(lap[v]));
    out.energy = dirichlet_energy(g, out.values);
    return out;
}

Flow gradient_flow(const HarmonicField& f) {
    const WeightedGraph& g = *f.graph;
    Flow fl;
    fl.graph = f.graph;
    fl.values.resize(g.edge_count());
    for (std::size_t e = 0; e < g.edge_count(); ++e)
        fl.values[e] = g.edge(e).conductance * (f.values[g.edge(e).v] - f.values[g.edge(e).u]);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t v = 0; v < g.vertex_count(); ++v)
        if (f.pinned[v]) {
            lo = std::min(lo, f.values[v]);
            hi = std::max(hi, f.values[v]);
        }
    if (lo == hi) return fl;  // constant boundary data: zero flow, no source or sink
    for (std::size_t v = 0; v < g.vertex_count(); ++v) {
        if (!f.pinned[v]) continue;
        if (f.values[v] == lo) fl.sources.push_back(v);
        if (f.values[v] == hi) fl.sinks.push_back(v);
    }
    auto div = divergence(g, fl.values);
    for (std::size_t v : fl.sources) fl.strength += div[v];
    return fl;
}

namespace {

PinnedValues pin_sets(const WeightedGraph& g, const std::vector<std::size_t>& s, const std::vector<std::size_t>& t) {
    if (s.empty() || t.empty()) throw InputError("source and sink sets must be nonempty");
    PinnedValues p;
    for (std::size_t v : s) {
        if (v >= g.vertex_count()) throw InputError("vertex out of range");
        p[v] = 0.0;
    }
    for (std::size_t v : t) {
        if (v >= g.vertex_count()) throw InputError("vertex out of range");
        if (p.count(v) && p[v] == 0.0) throw InputError("vertex " + std::to_string(v) + " is in both S and T");
        p[v] = 1.0;
    }
    return p;
}

}  // namespace

HarmonicField unit_potential(std::shared_ptr<const WeightedGraph> g, const std::vector<std::size_t>& s,
                             const std::vector<std::size_t>& t, const SolverOptions& opt) {
    return solve_dirichlet(g, pin_sets(*g, s, t), opt);
}

double effective_resistance(std::shared_ptr<const WeightedGraph> g, const std::vector<std::size_t>& s,
                            const std::vector<std::size_t>& t, const SolverOptions& opt) {
    HarmonicField u = unit_potential(g, s, t, opt);
    if (!(u.energy > 0)) throw SolverError("zero energy: S and T are not connected");
    return 1.0 / u.energy;
}

ConjugateField harmonic_conjugate(const MarkedRectangleMap& m, const HarmonicField& h, const Tolerances& tol) {
    const WeightedGraph& pg = m.primal();
    const auto dgp = m.dual_ptr();
    const WeightedGraph& dg = *dgp;
    if (h.values.size() != pg.vertex_count()) throw InputError("field does not live on the primal graph of this map");

    // Extended values are used only while they still round to the stored ones.
    std::vector<long double> hv(h.values.begin(), h.values.end());
    bool precise_ok = h.precise.size() == h.values.size();
    for (std::size_t i = 0; precise_ok && i < hv.size(); ++i)
        precise_ok = static_cast<double>(h.precise[i]) == h.values[i];
    if (precise_ok) hv = h.precise;
    // Increment along dual edge e from edge.u to edge.v.
    std::vector<long double> inc(dg.edge_count());
    for (std::size_t e = 0; e < dg.edge_count(); ++e) {
        const auto& pe = pg.edge(e);
        inc[e] = static_cast<long double>(pe.conductance) * (hv[pe.v] - hv[pe.u]);
    }
    const std::size_t nd = dg.vertex_count();
    std::vector<long double> vals(nd, 0.0L);
    std::vector<std::uint8_t> seen(nd, 0), tree(dg.edge_count(), 0);
    std::size_t root = dg.local(m.arcs().da.front());
    std::deque<std::size_t> queue{root};
    seen[root] = 1;
    ConjugateField out;
    while (!queue.empty()) {
        std::size_t x = queue.front();
        queue.pop_front();
        for (const auto& ic : dg.incident(x)) {
            if (seen[ic.neighbor]) continue;
            const auto& de = dg.edge(ic.edge);
            vals[ic.neighbor] = vals[x] + (de.u == x ? inc[ic.edge] : -inc[ic.edge]);
            seen[ic.neighbor] = 1;
            tree[ic.edge] = 1;
            ++out.tree_edges;
            queue.push_back(ic.neighbor);
        }
    }
    for (std::size_t v = 0; v < nd; ++v)
        if (!seen[v]) throw SolverError("dual graph is disconnected");
    double hmin = std::numeric_limits<double>::infinity(), hmax = -hmin;
    for (double v : h.values) {
        hmin = std::min(hmin, v);
        hmax = std::max(hmax, v);
    }
    const double span = hmax - hmin;
    for (std::size_t e = 0; e < dg.edge_count(); ++e) {
        if (tree[e]) continue;
        const auto& de = dg.edge(e);
        out.max_cycle_residual =
            std::max(out.max_cycle_residual, static_cast<double>(std::fabs(vals[de.v] - vals[de.u] - inc[e])));
    }
    if (out.max_cycle_residual > tol.conjugate_cycle * span)
        throw SolverError("harmonic conjugate is inconsistent: cycle residual " + fmt12(out.max_cycle_residual) +
                              " exceeds " + fmt12(tol.conjugate_cycle * span),
                          out.max_cycle_residual);
    long double shift = std::numeric_limits<long double>::infinity();
    for (VertexId w : m.arcs().bc) shift = std::min(shift, vals[dg.local(w)]);
    for (long double& v : vals) v -= shift;

    HarmonicField& f = out.field;
    f.graph = dgp;
    f.values.assign(vals.begin(), vals.end());
    f.precise = std::move(vals);
    f.pinned.assign(nd, 0);
    for (VertexId w : m.arcs().bc) f.pinned[dg.local(w)] = 1;
    for (VertexId w : m.arcs().da) f.pinned[dg.local(w)] = 1;
    auto lap = laplacian(dg, f.values);
    for (std::size_t v = 0; v < nd; ++v)
        if (!f.pinned[v]) f.residual = std::max(f.residual, std::abs(lap[v]));
    f.energy = dirichlet_energy(dg, f.values);
    return out;
}

WalkEstimate random_walk_oracle(const WeightedGraph& g, const PinnedValues& pinned, std::size_t v, std::size_t n_walks,
                                std::uint64_t seed) {
    if (n_walks < 100) throw InputError("random walk oracle needs at least 100 walks");
    if (v >= g.vertex_count()) throw InputError("start vertex out of range");
    if (pinned.count(v)) throw InputError("start vertex must be free");
    const std::size_t n = g.vertex_count();
    std::vector<double> value(n, 0.0);
    std::vector<std::uint8_t> is_pinned(n, 0);
    for (const auto& [p, val] : pinned) {
        is_pinned[p] = 1;
        value[p] = val;
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    constexpr std::size_t kMaxSteps = 100000000;
    std::size_t steps = 0;
    double sum = 0.0, sum2 = 0.0;
    for (std::size_t w = 0; w < n_walks; ++w) {
        std::size_t x = v;
        while (!is_pinned[x]) {
            if (++steps > kMaxSteps) throw SolverError("random walk exceeded 1e8 total steps");
            auto inc = g.incident(x);
            if (inc.empty()) throw SolverError("random walk reached an isolated vertex");
            double target = unif(rng) * g.weight(x);
            double acc = 0.0;
            std::size_t next = inc.back().neighbor;
            for (const auto& ic : inc) {
                acc += g.edge(ic.edge).conductance;
                if (target < acc) {
                    next = ic.neighbor;
                    break;
                }
            }
            x = next;
        }
        sum += value[x];
        sum2 += value[x] * value[x];
    }
    const double nw = static_cast<double>(n_walks);
    WalkEstimate est;
    est.estimate = sum / nw;
    double var = (sum2 - sum * sum / nw) / (nw - 1.0);
    est.std_error = var > 0 ? std::sqrt(var / nw) : 0.0;
    return est;
}

}  // namespace orthotile
