#pragma once

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "orthotile/extremal.hpp"
#include "orthotile/gridgen.hpp"
#include "orthotile/harmonic.hpp"
#include "orthotile/tiling.hpp"

namespace orthotile {

struct ModulusProfile {
    double chi = 0.0;       // max |h(x) - h(y)| over primal edges
    double chi_dual = 0.0;  // max |h~(u) - h~(v)| over dual edges
    double d_hat_prime = 0.0;
    double eps = 0.0;       // mesh size of the map
    double k_hat = 0.0;     // chi * log(d_hat_prime / eps)
};

ModulusProfile modulus_profile(const MarkedRectangleMap& m, const HarmonicField& h, const HarmonicField& h_tilde);
ModulusProfile modulus_profile(const MarkedRectangleMap& m);

struct PairRecord {
    VertexId x = 0, y = 0;
    double value = 0.0;  // |h(y) - h(x)| log(d_hat' / (|y - x| v eps))
    bool bulk = true;
};

struct PointwiseReport {
    std::vector<PairRecord> pairs;
    std::size_t skipped = 0;
    double max_value = 0.0;
    double bound = 0.0;
    bool pass = true;
    std::vector<std::string> notes;
};

// Pairs are primal map vertex ids; k_hat_global is the calibrated constant.
PointwiseReport modulus_pointwise_check(const MarkedRectangleMap& m, const HarmonicField& h,
                                        const std::vector<std::pair<VertexId, VertexId>>& pairs, double k_hat_global);
// Random primal pairs satisfying the bulk condition.
std::vector<std::pair<VertexId, VertexId>> random_bulk_pairs(const MarkedRectangleMap& m, std::size_t count,
                                                              std::uint64_t seed);

// Rotation by a quarter turn about the centre of the marks that swaps colours and
// carries the primal Dirichlet arcs onto the dual ones.
bool self_dual_symmetry(const MarkedRectangleMap& m);

// Closed-form reference map when the domain is an axis-aligned rectangle marked at its corners.
struct ReferenceMap {
    Point2 b{};
    std::complex<double> scale{};  // phi(z) = (z - B) * scale
    double L = 0.0;
    std::complex<double> operator()(Point2 p) const { return std::complex<double>(p.x - b.x, p.y - b.y) * scale; }
};
std::optional<ReferenceMap> rectangle_reference(const DomainSpec& spec);

std::vector<Point2> probe_points(const DomainSpec& spec, double margin);

struct LevelRecord {
    double eps = 0.0;
    double mesh_eps = 0.0;
    double delta = 0.0;
    double L = 0.0;
    double lambda_dual = 0.0;
    double duality_defect = 0.0;  // |L lambda_dual - 1|
    std::size_t face_count = 0;
    std::size_t vertex_count = 0;
    std::optional<double> sup_dev_vs_reference;
    std::optional<double> sup_dev_vs_next_level;
    std::size_t probes_located = 0;
    double chi = 0.0, chi_dual = 0.0, k_hat = 0.0, d_hat = 0.0, d_hat_prime = 0.0;
    double containment = 0.0, overlap = 0.0, area_defect = 0.0;  // area defect relative to L
    std::size_t degenerate_tiles = 0;
    double cycle_residual = 0.0;
    double max_cr_residual = 0.0;
    double tiling_discrepancy = 0.0;
    bool self_dual = false;
    double t_generate = 0.0, t_tile = 0.0, t_verify = 0.0, t_assemble = 0.0;
    std::string error;
    bool ok() const { return error.empty(); }
};

struct ConvergenceOptions {
    double probe_margin = 0.1;          // times the domain diameter
    std::optional<Point2> origin_shift; // lattice anchor, bbox corner + eps * shift
    SolverOptions solver;
    bool timings = false;
    std::string persist_dir;            // empty: nothing written
};

struct ConvergenceReport {
    Json spec;
    double eps0 = 0.0;
    int levels_requested = 0;
    double probe_margin = 0.0;
    double probe_pitch = 0.0;
    std::size_t probe_count = 0;
    std::string reference;  // "affine" or "none"
    std::optional<double> L_ref;
    double k_hat_calibrated = 0.0;  // 4 x coarsest successful level
    std::optional<double> rate_constant;  // sup_dev * log(1/eps) at the coarsest level
    bool timings = false;
    std::vector<LevelRecord> levels;
};

ConvergenceReport convergence_run(const DomainSpec& spec, double eps0, int levels, const ConvergenceOptions& opt = {});

Json report_to_json(const ConvergenceReport& r);
std::string report_to_csv(const ConvergenceReport& r);

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kCalibrationRule = "K_hat = 4 x chi log(d_hat'/eps) at the coarsest level";

}  // namespace orthotile
