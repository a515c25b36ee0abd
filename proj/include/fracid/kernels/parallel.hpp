#pragma once

// Data-parallel inner loops. Every kernel has a serial reference next to the
// OpenMP version; tests check that they agree and bench/ compares their speed.
// Parallel reductions use a fixed chunking that does not depend on the thread
// count, so results are reproducible run to run.

#include <cstddef>
#include <exception>
#include <span>
#include <vector>

namespace fracid::kernels {

enum class Backend { Serial, OpenMP };

inline constexpr std::size_t kChunk = 2048;
// Below this length the chunked reduction runs on the calling thread.
inline constexpr std::size_t kParallelThreshold = 4 * kChunk;

int max_threads();
bool openmp_enabled();

/// sum_{j=1}^{len} w[j] * x[n - j]
double history_dot_serial(std::span<const double> w, std::span<const double> x, std::size_t n, std::size_t len);
double history_dot_parallel(std::span<const double> w, std::span<const double> x, std::size_t n, std::size_t len);

inline double history_dot(Backend b, std::span<const double> w, std::span<const double> x, std::size_t n,
                          std::size_t len) {
    return b == Backend::Serial ? history_dot_serial(w, x, n, len) : history_dot_parallel(w, x, n, len);
}

/// out[n] = sum_{j=0}^{min(n, window-1)} b[j] * u[n - j]
void causal_convolve_serial(std::span<const double> b, std::span<const double> u, std::span<double> out,
                            std::size_t window);
void causal_convolve_parallel(std::span<const double> b, std::span<const double> u, std::span<double> out,
                              std::size_t window);

inline void causal_convolve(Backend be, std::span<const double> b, std::span<const double> u, std::span<double> out,
                            std::size_t window) {
    if (be == Backend::Serial) causal_convolve_serial(b, u, out, window);
    else causal_convolve_parallel(b, u, out, window);
}

namespace detail {
void run_indexed(std::size_t count, void (*thunk)(void*, std::size_t), void* ctx, bool parallel);
}

/// Calls f(i) for i in [0, count). Each call must only write state owned by
/// index i. The first exception (lowest index) is rethrown after the loop.
template <class F>
void for_each_index(Backend b, std::size_t count, F&& f) {
    std::vector<std::exception_ptr> errors(count);
    struct Ctx {
        F* fn;
        std::vector<std::exception_ptr>* errs;
    } ctx{&f, &errors};
    auto thunk = [](void* p, std::size_t i) {
        auto* c = static_cast<Ctx*>(p);
        try {
            (*c->fn)(i);
        } catch (...) {
            (*c->errs)[i] = std::current_exception();
        }
    };
    detail::run_indexed(count, thunk, &ctx, b == Backend::OpenMP);
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace fracid::kernels
