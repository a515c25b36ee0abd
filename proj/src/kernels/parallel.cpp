#include "fracid/kernels/parallel.hpp"

#include <algorithm>

#ifdef FRACID_HAVE_OPENMP
#include <omp.h>
#endif

namespace fracid::kernels {

int max_threads() {
#ifdef FRACID_HAVE_OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

bool openmp_enabled() {
#ifdef FRACID_HAVE_OPENMP
    return true;
#else
    return false;
#endif
}

double history_dot_serial(std::span<const double> w, std::span<const double> x, std::size_t n, std::size_t len) {
    double acc = 0.0;
    for (std::size_t j = 1; j <= len; ++j) acc += w[j] * x[n - j];
    return acc;
}

double history_dot_parallel(std::span<const double> w, std::span<const double> x, std::size_t n, std::size_t len) {
    if (len == 0) return 0.0;
    const std::size_t chunks = (len + kChunk - 1) / kChunk;
    double stack_partial[64];
    std::vector<double> heap_partial;
    double* partial = stack_partial;
    if (chunks > 64) {
        heap_partial.resize(chunks);
        partial = heap_partial.data();
    }
    const double* wp = w.data();
    const double* xp = x.data();
    auto chunk_sum = [&](std::size_t c) {
        const std::size_t lo = 1 + c * kChunk;
        const std::size_t hi = std::min(len, lo + kChunk - 1);
        double acc = 0.0;
        for (std::size_t j = lo; j <= hi; ++j) acc += wp[j] * xp[n - j];
        partial[c] = acc;
    };
#ifdef FRACID_HAVE_OPENMP
    if (len >= kParallelThreshold && omp_get_max_threads() > 1) {
        const auto nc = static_cast<long>(chunks);
#pragma omp parallel for schedule(static)
        for (long c = 0; c < nc; ++c) chunk_sum(static_cast<std::size_t>(c));
    } else {
        for (std::size_t c = 0; c < chunks; ++c) chunk_sum(c);
    }
#else
    for (std::size_t c = 0; c < chunks; ++c) chunk_sum(c);
#endif
    double acc = 0.0;
    for (std::size_t c = 0; c < chunks; ++c) acc += partial[c];
    return acc;
}

namespace {

inline double conv_at(const double* b, const double* u, std::size_t n, std::size_t window) {
    const std::size_t top = std::min(n, window - 1);
    double acc = 0.0;
    for (std::size_t j = 0; j <= top; ++j) acc += b[j] * u[n - j];
    return acc;
}

} // namespace

void causal_convolve_serial(std::span<const double> b, std::span<const double> u, std::span<double> out,
                            std::size_t window) {
    const std::size_t count = std::min(out.size(), u.size());
    const std::size_t win = std::min(window, b.size());
    for (std::size_t n = 0; n < count; ++n) out[n] = conv_at(b.data(), u.data(), n, win);
}

void causal_convolve_parallel(std::span<const double> b, std::span<const double> u, std::span<double> out,
                              std::size_t window) {
    const std::size_t count = std::min(out.size(), u.size());
    const std::size_t win = std::min(window, b.size());
#ifdef FRACID_HAVE_OPENMP
    const auto nc = static_cast<long>(count);
    // later rows are longer; small dynamic chunks balance the triangle
#pragma omp parallel for schedule(dynamic, 256)
    for (long n = 0; n < nc; ++n)
        out[static_cast<std::size_t>(n)] = conv_at(b.data(), u.data(), static_cast<std::size_t>(n), win);
#else
    for (std::size_t n = 0; n < count; ++n) out[n] = conv_at(b.data(), u.data(), n, win);
#endif
}

namespace detail {

void run_indexed(std::size_t count, void (*thunk)(void*, std::size_t), void* ctx, bool parallel) {
#ifdef FRACID_HAVE_OPENMP
    if (parallel && count > 1) {
        const auto nc = static_cast<long>(count);
#pragma omp parallel for schedule(dynamic, 1)
        for (long i = 0; i < nc; ++i) thunk(ctx, static_cast<std::size_t>(i));
        return;
    }
#else
    (void)parallel;
#endif
    for (std::size_t i = 0; i < count; ++i) thunk(ctx, i);
}

} // namespace detail

} // namespace fracid::kernels
