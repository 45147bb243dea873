#pragma once

#ifdef _OPENMP
#include <omp.h>
#endif

namespace cml {

// Deterministic parallel-for: iterations write to disjoint slots, so results
// are identical for any thread count and in serial mode.
template <class F>
void parallel_for(long long count, bool parallel, F&& body) {
#ifdef _OPENMP
    if (parallel) {
#pragma omp parallel for schedule(dynamic, 1)
        for (long long i = 0; i < count; ++i) body(i);
        return;
    }
#endif
    (void)parallel;
    for (long long i = 0; i < count; ++i) body(i);
}

inline void set_jobs(int jobs) {
#ifdef _OPENMP
    if (jobs > 0) omp_set_num_threads(jobs);
#else
    (void)jobs;
#endif
}

inline int max_jobs() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace cml
