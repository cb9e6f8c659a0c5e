#include "rag/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace rag::simd {

namespace {

Backend detect_backend() {
#if defined(__x86_64__)
    const char* env = std::getenv("RAG_SIMD");
    if (env != nullptr) {
        if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0) {
            if (!__builtin_cpu_supports("avx2"))
                throw std::invalid_argument("RAG_SIMD=avx2 but the CPU lacks AVX2");
            return Backend::avx2;
        }
        // anything else (including "auto") falls through to detection
    }
    return __builtin_cpu_supports("avx2") ? Backend::avx2 : Backend::scalar;
#else
    return Backend::scalar;
#endif
}

std::atomic<Backend> g_backend{detect_backend()};

} // namespace

Backend active_backend() { return g_backend.load(std::memory_order_relaxed); }

const char* backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

bool backend_supported(Backend b) {
#if defined(__x86_64__)
    return b == Backend::scalar || __builtin_cpu_supports("avx2");
#else
    return b == Backend::scalar;
#endif
}

void set_backend(Backend b) {
    if (!backend_supported(b))
        throw std::invalid_argument("requested SIMD backend not supported on this CPU");
    g_backend.store(b, std::memory_order_relaxed);
}

void edge_indicator_row(double x0, const double* xs, std::size_t n, double r1, double r2,
                        std::uint8_t* out) {
#if defined(__x86_64__)
    if (active_backend() == Backend::avx2) {
        detail::edge_indicator_row_avx2(x0, xs, n, r1, r2, out);
        return;
    }
#endif
    detail::edge_indicator_row_scalar(x0, xs, n, r1, r2, out);
}

void mc_accumulate(const double* x1, const double* x2, const double* x3, const double* x4,
                   std::size_t n, double r1, double r2, McMoments& acc) {
#if defined(__x86_64__)
    if (active_backend() == Backend::avx2) {
        detail::mc_accumulate_avx2(x1, x2, x3, x4, n, r1, r2, acc);
        return;
    }
#endif
    detail::mc_accumulate_scalar(x1, x2, x3, x4, n, r1, r2, acc);
}

} // namespace rag::simd
