#pragma once

#include <cstddef>
#include <vector>

namespace orthotile {

struct CsrMatrix {
    std::size_t n = 0;
    std::vector<std::size_t> row_ptr;  // size n+1
    std::vector<std::size_t> col;
    std::vector<double> val;
};

// OpenMP kernels. Reductions sum fixed-size blocks and then combine the block
// partials in order, so results are bitwise independent of the thread count.
namespace kernels {
void spmv(const CsrMatrix& a, const double* x, double* y);
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);   // y += alpha x
void xpby(const double* x, double beta, double* y, std::size_t n);    // y = x + beta y
void hadamard(const double* d, const double* r, double* z, std::size_t n);  // z = d .* r
}  // namespace kernels

// Plain sequential loops, kept as the reference for the parallel kernels.
namespace kernels::serial {
void spmv(const CsrMatrix& a, const double* x, double* y);
double dot(const double* a, const double* b, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void xpby(const double* x, double beta, double* y, std::size_t n);
void hadamard(const double* d, const double* r, double* z, std::size_t n);
}  // namespace kernels::serial

struct CgResult {
    std::size_t iterations = 0;
    double rel_residual = 0.0;  // ||b - Ax|| / ||b||, recomputed at exit
    bool converged = false;
};

// Jacobi-preconditioned conjugate gradient on an SPD system; x holds the initial guess.
CgResult pcg(const CsrMatrix& a, const std::vector<double>& diag_inv, const std::vector<double>& b,
             std::vector<double>& x, double tol, std::size_t max_iter, bool parallel = true);

}  // namespace orthotile
