#include "oracles.hpp"

#include <Eigen/Dense>
#include <stdexcept>

namespace oracle {

std::vector<double> dense_dirichlet(const orthotile::WeightedGraph& g, const orthotile::PinnedValues& pinned) {
    const std::size_t n = g.vertex_count();
    std::vector<long> slot(n, -1);
    long nfree = 0;
    for (std::size_t v = 0; v < n; ++v)
        if (!pinned.count(v)) slot[v] = nfree++;
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(nfree, nfree);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(nfree);
    for (const auto& e : g.edges()) {
        const double c = e.conductance;
        for (auto [x, y] : {std::pair{e.u, e.v}, std::pair{e.v, e.u}}) {
            if (slot[x] < 0) continue;
            a(slot[x], slot[x]) += c;
            if (slot[y] >= 0)
                a(slot[x], slot[y]) -= c;
            else
                b(slot[x]) += c * pinned.at(y);
        }
    }
    Eigen::VectorXd sol = a.fullPivLu().solve(b);
    std::vector<double> out(n);
    for (std::size_t v = 0; v < n; ++v) out[v] = slot[v] < 0 ? pinned.at(v) : sol(slot[v]);
    return out;
}

double dense_extremal_length(const orthotile::WeightedGraph& g, const std::vector<std::size_t>& s,
                             const std::vector<std::size_t>& t) {
    orthotile::PinnedValues p;
    for (auto v : s) p[v] = 0.0;
    for (auto v : t) p[v] = 1.0;
    auto f = dense_dirichlet(g, p);
    double energy = 0.0;
    for (const auto& e : g.edges()) energy += e.conductance * (f[e.u] - f[e.v]) * (f[e.u] - f[e.v]);
    if (!(energy > 0)) throw std::runtime_error("zero energy");
    return 1.0 / energy;
}

}  // namespace oracle
