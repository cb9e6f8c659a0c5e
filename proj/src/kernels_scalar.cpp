#include <cmath>

#include "rag/kernels.hpp"

// Reference kernels. The AVX2 variants in kernels_avx2.cpp perform exactly
// these IEEE operations lane-wise; any divergence is a bug caught by the
// equivalence tests.

namespace rag::simd::detail {

namespace {

inline int annulus(double x, double y, double r1, double r2) {
    const double a = std::fabs(x - y);
    const double d = std::fmin(a, 1.0 - a);
    return (r2 < d && d < r1) ? 1 : 0;
}

} // namespace

void edge_indicator_row_scalar(double x0, const double* xs, std::size_t n, double r1, double r2,
                               std::uint8_t* out) {
    for (std::size_t j = 0; j < n; ++j)
        out[j] = static_cast<std::uint8_t>(annulus(x0, xs[j], r1, r2));
}

void mc_accumulate_scalar(const double* x1, const double* x2, const double* x3, const double* x4,
                          std::size_t n, double r1, double r2, McMoments& acc) {
    for (std::size_t i = 0; i < n; ++i) {
        const int a12 = annulus(x1[i], x2[i], r1, r2);
        const int a13 = annulus(x1[i], x3[i], r1, r2);
        const int a23 = annulus(x2[i], x3[i], r1, r2);
        const int a14 = annulus(x1[i], x4[i], r1, r2);
        const int a24 = annulus(x2[i], x4[i], r1, r2);

        const std::uint64_t t1 = static_cast<std::uint64_t>(a12 & a13 & a23);
        const std::uint64_t w1 = static_cast<std::uint64_t>(a12 * a13 + a12 * a23 + a13 * a23);
        const std::uint64_t t2 = static_cast<std::uint64_t>(a12 & a14 & a24);
        const std::uint64_t w2 = static_cast<std::uint64_t>(a12 * a14 + a12 * a24 + a14 * a24);

        const std::uint64_t tt = t1 * t2;
        const std::uint64_t tw = t1 * w2 + t2 * w1;
        const std::uint64_t ww = w1 * w2;

        acc.tt += tt;
        acc.tw += tw;
        acc.ww += ww;
        acc.tt_tw += tt * tw;
        acc.tt_ww += tt * ww;
        acc.tw_tw += tw * tw;
        acc.tw_ww += tw * ww;
        acc.ww_ww += ww * ww;
    }
    acc.n += n;
}

} // namespace rag::simd::detail
