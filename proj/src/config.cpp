#include "orthotile/config.hpp"

#include <cstdlib>
#include <omp.h>

namespace orthotile {

namespace {
int g_threads = 0;
}

const Tolerances& default_tolerances() {
    static const Tolerances tol{};
    return tol;
}

int thread_count() {
    if (g_threads > 0) return g_threads;
    int n = omp_get_max_threads();
    if (const char* env = std::getenv("ORTHOTILE_THREADS")) {
        int cap = std::atoi(env);
        if (cap > 0 && cap < n) n = cap;
    }
    return n < 1 ? 1 : n;
}

void set_thread_count(int n) { g_threads = n; }

}  // namespace orthotile
