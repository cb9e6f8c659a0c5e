#pragma once

#include <cstddef>
#include <cstdint>

namespace rag::simd {

// Data-parallel inner loops for the annulus indicator arithmetic. Each kernel
// has a scalar reference implementation and an AVX2 variant selected at
// runtime; both perform the same IEEE operations and accumulate integer
// pattern counts, so their results are identical bit for bit (equivalence is
// tested in tests/test_kernels.cpp).

enum class Backend { scalar, avx2 };

/// Backend chosen at startup: AVX2 when the CPU supports it, overridable via
/// the RAG_SIMD environment variable ("scalar", "avx2", "auto").
Backend active_backend();
const char* backend_name(Backend b);
bool backend_supported(Backend b);

/// Force a backend (tests). Throws std::invalid_argument if unsupported.
void set_backend(Backend b);

/// out[j] = 1 iff r2 < d(x0, xs[j]) < r1 (strict), else 0.
void edge_indicator_row(double x0, const double* xs, std::size_t n, double r1, double r2,
                        std::uint8_t* out);

/// Integer monomial sums over Monte Carlo quadruples for sigma^2 estimation.
/// Per sample, with T = triangle indicator and W = number of adjacent pairs
/// among the triple (W in {0,1,3}, W=3 iff T=1):
///   tt = T1*T2, tw = T1*W2 + T2*W1, ww = W1*W2,
/// where (T1,W1) comes from (x1,x2,x3) and (T2,W2) from (x1,x2,x4).
/// The kernel product is h1*h2 = tt - c*tw + c^2*ww; keeping the monomials
/// exact makes the reduction associative and thread-count independent.
struct McMoments {
    std::uint64_t n = 0;
    std::uint64_t tt = 0, tw = 0, ww = 0;
    std::uint64_t tt_tw = 0, tt_ww = 0, tw_tw = 0, tw_ww = 0, ww_ww = 0;

    void merge(const McMoments& o) {
        n += o.n;
        tt += o.tt;
        tw += o.tw;
        ww += o.ww;
        tt_tw += o.tt_tw;
        tt_ww += o.tt_ww;
        tw_tw += o.tw_tw;
        tw_ww += o.tw_ww;
        ww_ww += o.ww_ww;
    }

    bool operator==(const McMoments&) const = default;
};

void mc_accumulate(const double* x1, const double* x2, const double* x3, const double* x4,
                   std::size_t n, double r1, double r2, McMoments& acc);

namespace detail {
void edge_indicator_row_scalar(double x0, const double* xs, std::size_t n, double r1, double r2,
                               std::uint8_t* out);
void mc_accumulate_scalar(const double* x1, const double* x2, const double* x3, const double* x4,
                          std::size_t n, double r1, double r2, McMoments& acc);
#if defined(__x86_64__)
void edge_indicator_row_avx2(double x0, const double* xs, std::size_t n, double r1, double r2,
                             std::uint8_t* out);
void mc_accumulate_avx2(const double* x1, const double* x2, const double* x3, const double* x4,
                        std::size_t n, double r1, double r2, McMoments& acc);
#endif
} // namespace detail

} // namespace rag::simd
