#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <vector>

#include "orthotile/config.hpp"
#include "orthotile/odmap.hpp"

namespace orthotile {

// Local vertex index -> pinned value.
using PinnedValues = std::map<std::size_t, double>;

struct SolverOptions {
    double tol = default_tolerances().solver_rel;
    std::size_t max_iter = 0;  // 0: max(20*sqrt(#free), 10^4)
    bool parallel = true;
    std::size_t refine_steps = 4;  // corrections driven by extended-precision residuals
};

struct HarmonicField {
    std::shared_ptr<const WeightedGraph> graph;
    std::vector<double> values;
    std::vector<std::uint8_t> pinned;
    double residual = 0.0;  // max |Laplacian| over free vertices
    double energy = 0.0;
    std::size_t iterations = 0;
    double rel_residual = 0.0;
    std::vector<long double> precise;  // extended-precision values; ignored once they disagree with values

    double operator[](std::size_t i) const { return values[i]; }
};

struct Flow {
    std::shared_ptr<const WeightedGraph> graph;
    std::vector<double> values;  // theta on edge e oriented edge(e).u -> edge(e).v
    std::vector<std::size_t> sources, sinks;
    double strength = 0.0;
};

double dirichlet_energy(const WeightedGraph& g, const std::vector<double>& f);
// Laplacian sum_y c(x,y) (f(y) - f(x)).
std::vector<double> laplacian(const WeightedGraph& g, const std::vector<double>& f);
double flow_energy(const WeightedGraph& g, const std::vector<double>& theta);
// Net outflow at each vertex.
std::vector<double> divergence(const WeightedGraph& g, const std::vector<double>& theta);

HarmonicField solve_dirichlet(std::shared_ptr<const WeightedGraph> g, const PinnedValues& pinned,
                              const SolverOptions& opt = {});
Flow gradient_flow(const HarmonicField& f);

// Pins S to 0 and T to 1 and returns 1 / energy.
double effective_resistance(std::shared_ptr<const WeightedGraph> g, const std::vector<std::size_t>& s,
                            const std::vector<std::size_t>& t, const SolverOptions& opt = {});
HarmonicField unit_potential(std::shared_ptr<const WeightedGraph> g, const std::vector<std::size_t>& s,
                             const std::vector<std::size_t>& t, const SolverOptions& opt = {});

struct ConjugateField {
    HarmonicField field;           // on the dual graph; 0 on the [B,C] dual arc
    double max_cycle_residual = 0.0;  // over non-tree dual edges
    std::size_t tree_edges = 0;
};

// h must be the primal potential of m (0 on [A,B], L on [C,D]).
ConjugateField harmonic_conjugate(const MarkedRectangleMap& m, const HarmonicField& h,
                                  const Tolerances& tol = default_tolerances());

struct WalkEstimate {
    double estimate = 0.0;
    double std_error = 0.0;
};

WalkEstimate random_walk_oracle(const WeightedGraph& g, const PinnedValues& pinned, std::size_t v, std::size_t n_walks,
                                std::uint64_t seed);

}  // namespace orthotile
