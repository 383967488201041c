#pragma once

#include <cstddef>

namespace orthotile {

// Every numerical slack used by the library lives here.
struct Tolerances {
    double geom_rel = 1e-9;           // predicate slack, times domain diameter
    double orth = 1e-9;               // diagonal orthogonality, relative
    double solver_rel = 1e-13;        // CG relative residual target
    double conjugate_cycle = 1e-8;    // max CR residual on non-tree dual edges, times L
    double degenerate_tile = 1e-9;    // tile side below this (times max(L,1)) counts as zero
    double verify = 1e-9;             // tiling containment/area checks, times L
    double mark_tie = 1e-12;          // equidistant marked-vertex candidates, times diameter
};

const Tolerances& default_tolerances();

// Worker cap: ORTHOTILE_THREADS if set, else the OpenMP default.
int thread_count();
void set_thread_count(int n);

}  // namespace orthotile
