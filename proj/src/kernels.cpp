#include "orthotile/kernels.hpp"

#include <cmath>
#include <omp.h>

#include "orthotile/config.hpp"

namespace orthotile {

namespace {
constexpr std::size_t kBlock = 2048;
constexpr std::size_t kParallelMin = 8192;
}  // namespace

namespace kernels {

void spmv(const CsrMatrix& a, const double* x, double* y) {
    const long n = static_cast<long>(a.n);
#pragma omp parallel for schedule(static) num_threads(thread_count()) if (a.n >= kParallelMin)
    for (long i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) s += a.val[k] * x[a.col[k]];
        y[i] = s;
    }
}

double dot(const double* a, const double* b, std::size_t n) {
    const std::size_t nb = (n + kBlock - 1) / kBlock;
    std::vector<double> part(nb, 0.0);
    const long lnb = static_cast<long>(nb);
#pragma omp parallel for schedule(static) num_threads(thread_count()) if (n >= kParallelMin)
    for (long blk = 0; blk < lnb; ++blk) {
        std::size_t lo = static_cast<std::size_t>(blk) * kBlock, hi = std::min(n, lo + kBlock);
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += a[i] * b[i];
        part[blk] = s;
    }
    double s = 0.0;
    for (double p : part) s += p;
    return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    const long ln = static_cast<long>(n);
#pragma omp parallel for schedule(static) num_threads(thread_count()) if (n >= kParallelMin)
    for (long i = 0; i < ln; ++i) y[i] += alpha * x[i];
}

void xpby(const double* x, double beta, double* y, std::size_t n) {
    const long ln = static_cast<long>(n);
#pragma omp parallel for schedule(static) num_threads(thread_count()) if (n >= kParallelMin)
    for (long i = 0; i < ln; ++i) y[i] = x[i] + beta * y[i];
}

void hadamard(const double* d, const double* r, double* z, std::size_t n) {
    const long ln = static_cast<long>(n);
#pragma omp parallel for schedule(static) num_threads(thread_count()) if (n >= kParallelMin)
    for (long i = 0; i < ln; ++i) z[i] = d[i] * r[i];
}

}  // namespace kernels

namespace kernels::serial {

void spmv(const CsrMatrix& a, const double* x, double* y) {
    for (std::size_t i = 0; i < a.n; ++i) {
        double s = 0.0;
        for (std::size_t k = a.row_ptr[i]; k < a.row_ptr[i + 1]; ++k) s += a.val[k] * x[a.col[k]];
        y[i] = s;
    }
}

double dot(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[i];
    return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void xpby(const double* x, double beta, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + beta * y[i];
}

void hadamard(const double* d, const double* r, double* z, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) z[i] = d[i] * r[i];
}

}  // namespace kernels::serial

namespace {

struct Ops {
    void (*spmv)(const CsrMatrix&, const double*, double*);
    double (*dot)(const double*, const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    void (*xpby)(const double*, double, double*, std::size_t);
    void (*hadamard)(const double*, const double*, double*, std::size_t);
};

}  // namespace

CgResult pcg(const CsrMatrix& a, const std::vector<double>& diag_inv, const std::vector<double>& b, std::vector<double>& x,
             double tol, std::size_t max_iter, bool parallel) {
    const Ops ops = parallel ? Ops{kernels::spmv, kernels::dot, kernels::axpy, kernels::xpby, kernels::hadamard}
                             : Ops{kernels::serial::spmv, kernels::serial::dot, kernels::serial::axpy,
                                   kernels::serial::xpby, kernels::serial::hadamard};
    const std::size_t n = a.n;
    CgResult res;
    x.resize(n, 0.0);
    if (n == 0) {
        res.converged = true;
        return res;
    }
    const double bnorm = std::sqrt(ops.dot(b.data(), b.data(), n));
    if (bnorm == 0.0) {
        x.assign(n, 0.0);
        res.converged = true;
        return res;
    }
    std::vector<double> r(n), z(n), p(n), q(n);
    auto true_residual = [&]() {
        ops.spmv(a, x.data(), q.data());
        for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - q[i];
        return std::sqrt(ops.dot(r.data(), r.data(), n)) / bnorm;
    };
    double rel = true_residual();
    ops.hadamard(diag_inv.data(), r.data(), z.data(), n);
    p = z;
    double rz = ops.dot(r.data(), z.data(), n);
    std::size_t it = 0;
    while (rel > tol && it < max_iter) {
        ops.spmv(a, p.data(), q.data());
        const double pq = ops.dot(p.data(), q.data(), n);
        if (!(pq > 0)) break;
        const double alpha = rz / pq;
        ops.axpy(alpha, p.data(), x.data(), n);
        ops.axpy(-alpha, q.data(), r.data(), n);
        ++it;
        if (it % 50 == 0) {
            rel = true_residual();
        } else {
            rel = std::sqrt(ops.dot(r.data(), r.data(), n)) / bnorm;
            if (rel <= tol) rel = true_residual();
        }
        ops.hadamard(diag_inv.data(), r.data(), z.data(), n);
        const double rz_new = ops.dot(r.data(), z.data(), n);
        const double beta = rz_new / rz;
        rz = rz_new;
        ops.xpby(z.data(), beta, p.data(), n);
    }
    res.iterations = it;
    res.rel_residual = true_residual();
    res.converged = res.rel_residual <= tol;
    return res;
}

}  // namespace orthotile
