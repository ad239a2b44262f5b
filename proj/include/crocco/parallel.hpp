#pragma once

/**
 * @file parallel.hpp
 * @brief Execution policy for the data-parallel kernels.
 *
 * Every hot loop in the solver is a map over independent columns or nodes
 * with disjoint output buffers, so the OpenMP variant is bit-identical to
 * the serial reference.  Reductions that feed reports are always performed
 * serially over precomputed per-item arrays to keep results independent of
 * the worker count.
 */

#include <cstddef>

#if defined(_OPENMP)
#include <omp.h>
#endif

namespace crocco {

enum class ExecMode { Serial, OpenMP };

struct ExecPolicy {
    ExecMode mode = ExecMode::Serial;
    int threads = 1;  ///< worker count for the OpenMP variant

    /// Resolve a config-level worker count: 1 -> serial reference,
    /// 0 -> all hardware threads, n -> OpenMP with n workers.
    static ExecPolicy from_workers(int workers) {
#if defined(_OPENMP)
        if (workers == 1) return {ExecMode::Serial, 1};
        int n = workers;
        if (n <= 0) n = omp_get_max_threads();
        return {ExecMode::OpenMP, n};
#else
        (void)workers;
        return {ExecMode::Serial, 1};
#endif
    }
};

/// Serial reference loop, kept separate from the OpenMP variant so tests can
/// compare the two drivers directly.
template <class F>
void for_each_index_serial(std::size_t n, F&& f) {
    for (std::size_t i = 0; i < n; ++i) f(i);
}

template <class F>
void for_each_index_omp(std::size_t n, int threads, F&& f) {
#if defined(_OPENMP)
#pragma omp parallel for schedule(static) num_threads(threads)
    for (long long i = 0; i < static_cast<long long>(n); ++i)
        f(static_cast<std::size_t>(i));
#else
    (void)threads;
    for_each_index_serial(n, f);
#endif
}

template <class F>
void for_each_index(std::size_t n, const ExecPolicy& pol, F&& f) {
    if (pol.mode == ExecMode::OpenMP)
        for_each_index_omp(n, pol.threads, f);
    else
        for_each_index_serial(n, f);
}

}  // namespace crocco
