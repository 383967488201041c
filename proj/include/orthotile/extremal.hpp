#pragma once

#include <optional>
#include <string>
#include <vector>

#include "orthotile/gridgen.hpp"
#include "orthotile/harmonic.hpp"
#include "orthotile/odmap.hpp"

namespace orthotile {

enum class ArcPair { primal, dual };

struct ELResult {
    double lambda = 0.0;
    double energy = 0.0;
    HarmonicField witness_field;  // 0 on the first arc, 1 on the opposite one
    Flow witness_flow;
};

// Primal: [A,B] to [C,D] in the primal graph. Dual: [B,C] to [D,A] in the dual graph.
ELResult extremal_length(const MarkedRectangleMap& m, ArcPair pair, const SolverOptions& opt = {});

struct DualityResult {
    double lambda_primal = 0.0;
    double lambda_dual = 0.0;
    double product = 0.0;
};

DualityResult duality_product(const MarkedRectangleMap& m, const SolverOptions& opt = {});

struct MetricBound {
    bool reachable = false;
    double length = 0.0;  // shortest S-T path under rho
    double area = 0.0;    // sum c rho^2
    double bound = 0.0;   // length^2 / area
};

// rho is indexed by edge and must be nonnegative and not identically zero.
MetricBound metric_lower_bound(const WeightedGraph& g, const std::vector<std::size_t>& s,
                               const std::vector<std::size_t>& t, const std::vector<double>& rho);

struct CutPathResult {
    enum class Status { ok, non_separating, non_minimal, mismatch };
    Status status = Status::ok;
    std::vector<VertexId> dual_path;     // map ids, from [B,C] to [D,A]
    std::vector<VertexId> witness_path;  // primal map ids of an uncut [A,B]-[C,D] path
    std::size_t witness_edge = npos;     // removable cut edge
    std::string message;
};

// cut is a set of face ids, i.e. primal edge ids.
CutPathResult min_cut_dual_path(const MarkedRectangleMap& m, const std::vector<std::size_t>& cut);
// Faces whose dual edges join consecutive vertices of the path.
std::vector<std::size_t> dual_path_to_cut(const MarkedRectangleMap& m, const std::vector<VertexId>& path);

enum class BoundStatus { pass, fail, inconclusive };
std::string to_string(BoundStatus s);

struct ComparabilityRecord {
    BoundStatus status = BoundStatus::inconclusive;
    double lambda = 0.0;
    double lower = 0.0, upper = 0.0;
    double ell = 0.0, ell_prime = 0.0;  // arc-distance proxies
    double area = 0.0;
    double delta = 0.0;
};

ComparabilityRecord comparability_check(const MarkedRectangleMap& m, const ApproximationCertificate& cert,
                                        const DomainSpec& spec, std::optional<double> lambda = std::nullopt);

struct RateRecord {
    BoundStatus status = BoundStatus::inconclusive;
    double l_sub = 0.0, l_full = 0.0, diff = 0.0;
    double lower = 0.0, upper = 0.0;
    double delta = 0.0, eps = 0.0, d_hat = 0.0, d_hat_prime = 0.0, k_hat = 0.0;
    std::string note;
};

// sub must sit inside full; L' = EL(sub), L = EL(full).
RateRecord el_rate_check(const MarkedRectangleMap& sub, const MarkedRectangleMap& full, double k_hat,
                         std::optional<double> l_sub = std::nullopt, std::optional<double> l_full = std::nullopt);

struct ShortContour {
    std::vector<VertexId> path;
    double length = 0.0;
    double bound = 0.0;  // 2 |seg| (1 + 4 eps / delta)
    double hausdorff = 0.0;
};

ShortContour find_short_contour(const OrthodiagonalMap& m, Point2 p0, Point2 p1, double delta, Color color);

}  // namespace orthotile
