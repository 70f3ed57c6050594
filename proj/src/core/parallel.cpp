#include "modsim/core/parallel.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace modsim::core {

namespace {
int g_threads = 0; // 0 = library default
}

void set_thread_count(int n) { g_threads = n < 0 ? 0 : n; }

int thread_count() {
#ifdef _OPENMP
    if (g_threads > 0) return g_threads;
    return omp_get_max_threads();
#else
    return 1;
#endif
}

bool parallel_enabled() {
#ifdef _OPENMP
    return g_threads != 1;
#else
    return false;
#endif
}

} // namespace modsim::core
