#if defined(__x86_64__)

#include <immintrin.h>

#include "rag/kernels.hpp"

namespace rag::simd::detail {

namespace {

// |x - y|, then min(d, 1 - d), then strict (r2, r1) band; same operation
// sequence as the scalar reference.
__attribute__((target("avx2"))) inline __m256d annulus_mask(__m256d x, __m256d y, __m256d r1v,
                                                            __m256d r2v, __m256d ones,
                                                            __m256d signmask) {
    const __m256d diff = _mm256_sub_pd(x, y);
    const __m256d a = _mm256_andnot_pd(signmask, diff);
    const __m256d d = _mm256_min_pd(a, _mm256_sub_pd(ones, a));
    const __m256d lo = _mm256_cmp_pd(r2v, d, _CMP_LT_OQ);
    const __m256d hi = _mm256_cmp_pd(d, r1v, _CMP_LT_OQ);
    return _mm256_and_pd(lo, hi);
}

__attribute__((target("avx2"))) inline std::uint64_t hsum_epi64(__m256i v) {
    alignas(32) std::uint64_t lanes[4];
    _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), v);
    return lanes[0] + lanes[1] + lanes[2] + lanes[3];
}

} // namespace

__attribute__((target("avx2"))) void edge_indicator_row_avx2(double x0, const double* xs,
                                                             std::size_t n, double r1, double r2,
                                                             std::uint8_t* out) {
    const __m256d xv = _mm256_set1_pd(x0);
    const __m256d r1v = _mm256_set1_pd(r1);
    const __m256d r2v = _mm256_set1_pd(r2);
    const __m256d ones = _mm256_set1_pd(1.0);
    const __m256d signmask = _mm256_set1_pd(-0.0);

    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        const __m256d y = _mm256_loadu_pd(xs + j);
        const int bits = _mm256_movemask_pd(annulus_mask(xv, y, r1v, r2v, ones, signmask));
        out[j + 0] = static_cast<std::uint8_t>(bits & 1);
        out[j + 1] = static_cast<std::uint8_t>((bits >> 1) & 1);
        out[j + 2] = static_cast<std::uint8_t>((bits >> 2) & 1);
        out[j + 3] = static_cast<std::uint8_t>((bits >> 3) & 1);
    }
    if (j < n) edge_indicator_row_scalar(x0, xs + j, n - j, r1, r2, out + j);
}

__attribute__((target("avx2"))) void mc_accumulate_avx2(const double* x1, const double* x2,
                                                        const double* x3, const double* x4,
                                                        std::size_t n, double r1, double r2,
                                                        McMoments& acc) {
    const __m256d r1v = _mm256_set1_pd(r1);
    const __m256d r2v = _mm256_set1_pd(r2);
    const __m256d ones = _mm256_set1_pd(1.0);
    const __m256d signmask = _mm256_set1_pd(-0.0);
    const __m256i zero = _mm256_setzero_si256();

    __m256i s_tt = zero, s_tw = zero, s_ww = zero;
    __m256i s_tt_tw = zero, s_tt_ww = zero, s_tw_tw = zero, s_tw_ww = zero, s_ww_ww = zero;

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v1 = _mm256_loadu_pd(x1 + i);
        const __m256d v2 = _mm256_loadu_pd(x2 + i);
        const __m256d v3 = _mm256_loadu_pd(x3 + i);
        const __m256d v4 = _mm256_loadu_pd(x4 + i);

        const __m256i a12 = _mm256_castpd_si256(annulus_mask(v1, v2, r1v, r2v, ones, signmask));
        const __m256i a13 = _mm256_castpd_si256(annulus_mask(v1, v3, r1v, r2v, ones, signmask));
        const __m256i a23 = _mm256_castpd_si256(annulus_mask(v2, v3, r1v, r2v, ones, signmask));
        const __m256i a14 = _mm256_castpd_si256(annulus_mask(v1, v4, r1v, r2v, ones, signmask));
        const __m256i a24 = _mm256_castpd_si256(annulus_mask(v2, v4, r1v, r2v, ones, signmask));

        // masks are 0 or ~0 per 64-bit lane; -mask turns them into 0/1 ints
        const __m256i t1m = _mm256_and_si256(_mm256_and_si256(a12, a13), a23);
        const __m256i t2m = _mm256_and_si256(_mm256_and_si256(a12, a14), a24);
        const __m256i w1 = _mm256_sub_epi64(
            zero, _mm256_add_epi64(_mm256_add_epi64(_mm256_and_si256(a12, a13),
                                                    _mm256_and_si256(a12, a23)),
                                   _mm256_and_si256(a13, a23)));
        const __m256i w2 = _mm256_sub_epi64(
            zero, _mm256_add_epi64(_mm256_add_epi64(_mm256_and_si256(a12, a14),
                                                    _mm256_and_si256(a12, a24)),
                                   _mm256_and_si256(a14, a24)));

        const __m256i ttm = _mm256_and_si256(t1m, t2m);
        const __m256i tt = _mm256_sub_epi64(zero, ttm);
        const __m256i tw =
            _mm256_add_epi64(_mm256_and_si256(w2, t1m), _mm256_and_si256(w1, t2m));
        const __m256i ww = _mm256_mul_epu32(w1, w2);  // lane values <= 3, low 32 bits suffice

        s_tt = _mm256_add_epi64(s_tt, tt);
        s_tw = _mm256_add_epi64(s_tw, tw);
        s_ww = _mm256_add_epi64(s_ww, ww);
        s_tt_tw = _mm256_add_epi64(s_tt_tw, _mm256_and_si256(tw, ttm));
        s_tt_ww = _mm256_add_epi64(s_tt_ww, _mm256_and_si256(ww, ttm));
        s_tw_tw = _mm256_add_epi64(s_tw_tw, _mm256_mul_epu32(tw, tw));
        s_tw_ww = _mm256_add_epi64(s_tw_ww, _mm256_mul_epu32(tw, ww));
        s_ww_ww = _mm256_add_epi64(s_ww_ww, _mm256_mul_epu32(ww, ww));
    }

    acc.tt += hsum_epi64(s_tt);
    acc.tw += hsum_epi64(s_tw);
    acc.ww += hsum_epi64(s_ww);
    acc.tt_tw += hsum_epi64(s_tt_tw);
    acc.tt_ww += hsum_epi64(s_tt_ww);
    acc.tw_tw += hsum_epi64(s_tw_tw);
    acc.tw_ww += hsum_epi64(s_tw_ww);
    acc.ww_ww += hsum_epi64(s_ww_ww);
    acc.n += i;

    if (i < n) mc_accumulate_scalar(x1 + i, x2 + i, x3 + i, x4 + i, n - i, r1, r2, acc);
}

} // namespace rag::simd::detail

#endif // __x86_64__
