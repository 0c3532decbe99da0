#pragma once

#include <exception>

namespace weyl {

// Process-wide switch between the OpenMP kernels and their serial reference.
// Every parallel loop writes to per-index slots only, so both paths produce
// bitwise-identical results; the serial path is kept for testing and for the
// benchmark comparison.
inline bool& parallel_enabled() {
    static bool on = true;
    return on;
}

template <class F>
void parallel_for(int n, F&& body, bool parallel = true) {
    if (parallel && parallel_enabled()) {
        std::exception_ptr err = nullptr;
#pragma omp parallel for schedule(dynamic)
        for (int i = 0; i < n; ++i) {
            try {
                body(i);
            } catch (...) {
#pragma omp critical
                if (!err) err = std::current_exception();
            }
        }
        if (err) std::rethrow_exception(err);
    } else {
        for (int i = 0; i < n; ++i) body(i);
    }
}

}  // namespace weyl
