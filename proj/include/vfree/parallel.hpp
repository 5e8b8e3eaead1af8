#ifndef VFREE_PARALLEL_HPP
#define VFREE_PARALLEL_HPP

#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace vfree {

// Execution policy for the data-parallel kernels. Every kernel has a serial
// reference path; results are bit-identical across policies (all reductions
// are exact modular or exact integer sums).
enum class Exec { serial, parallel };

inline int thread_count(Exec exec) {
#ifdef _OPENMP
    return exec == Exec::parallel ? omp_get_max_threads() : 1;
#else
    (void)exec;
    return 1;
#endif
}

template <class Body>
void parallel_for(Exec exec, std::int64_t begin, std::int64_t end, Body&& body) {
    if (exec == Exec::parallel) {
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 16)
        for (std::int64_t i = begin; i < end; ++i)
            body(i);
        return;
#endif
    }
    for (std::int64_t i = begin; i < end; ++i)
        body(i);
}

} // namespace vfree

#endif
