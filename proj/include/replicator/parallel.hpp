#pragma once

#include <cstddef>
#include <exception>
#include <limits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace replicator {

/// Selects between the OpenMP kernel and the serial reference loop.
enum class ExecPolicy { serial, parallel };

/// Calls body(i) for i in [0, count). Results must be written by index so the
/// outcome is identical under both policies. If any call throws, the exception
/// raised by the lowest index is rethrown after the loop.
template <class Body>
void for_each_index(std::size_t count, ExecPolicy policy, Body&& body) {
    if (policy == ExecPolicy::serial) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }

    std::vector<std::exception_ptr> errors(count);
    const auto n = static_cast<long long>(count);
#pragma omp parallel for schedule(dynamic, 4)
    for (long long i = 0; i < n; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

/// Number of threads the parallel policy will use.
inline int available_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_thread_count(int threads) {
#ifdef _OPENMP
    if (threads > 0) omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

}  // namespace replicator
