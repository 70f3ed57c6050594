#pragma once

#include <cstdint>

namespace modsim::core {

// Runtime switch for the OpenMP kernels. 0 = library default (all cores),
// 1 = serial. Every parallel kernel in this project also has a *_serial
// reference implementation used by the parity tests and the benchmark.
void set_thread_count(int n);
int thread_count();
bool parallel_enabled();

template <typename F>
void parallel_for(std::int64_t n, F&& body);

} // namespace modsim::core

#ifdef _OPENMP
#include <omp.h>
#endif

namespace modsim::core {

template <typename F>
void parallel_for(std::int64_t n, F&& body) {
#ifdef _OPENMP
    if (parallel_enabled()) {
        const int threads = thread_count();
#pragma omp parallel for schedule(static) num_threads(threads)
        for (std::int64_t i = 0; i < n; ++i) {
            body(i);
        }
        return;
    }
#endif
    for (std::int64_t i = 0; i < n; ++i) {
        body(i);
    }
}

} // namespace modsim::core
