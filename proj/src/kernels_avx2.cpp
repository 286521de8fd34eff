#if defined(FRACSDE_HAVE_AVX2_TU)

#include <immintrin.h>

#include <cmath>

#include "kernels_detail.hpp"

namespace fracsde::kernels::detail {

namespace {

constexpr double kInvLn2 = 1.4426950408889634074;
constexpr double kLn2Hi = 6.93147180369123816490e-1;  // 0x3FE62E42FEE00000
constexpr double kLn2Lo = 1.90821492927058770002e-10;
constexpr double kSqrt2 = 1.41421356237309504880;

/// exp for |x| <= ~700: x = n ln2 + r, e^r by a degree-13 Taylor series
/// (remainder < 1e-17 relative for |r| <= ln2/2), scaled by 2^n through
/// the exponent bits.
inline __m256d vexp(__m256d x) {
    const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, _mm256_set1_pd(kInvLn2)),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(n, _mm256_set1_pd(kLn2Hi), x);
    r = _mm256_fnmadd_pd(n, _mm256_set1_pd(kLn2Lo), r);

    // 1/k! for k = 13 down to 0
    __m256d p = _mm256_set1_pd(1.0 / 6227020800.0);
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 479001600.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 39916800.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 3628800.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 362880.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 40320.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 5040.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 720.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 120.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 24.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0 / 6.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(0.5));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));
    p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(1.0));

    const __m128i n32 = _mm256_cvtpd_epi32(n);
    const __m256i n64 = _mm256_cvtepi32_epi64(n32);
    const __m256i bits =
        _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
    return _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
}

/// log for positive normal finite x: x = m 2^e with m in [sqrt2/2, sqrt2),
/// log m = 2 atanh((m-1)/(m+1)) by its series in s^2 (12 terms, remainder
/// < 1e-18 relative), plus e ln2 in hi/lo pieces.
inline __m256d vlog(__m256d x) {
    const __m256i bits = _mm256_castpd_si256(x);
    __m256i e64 = _mm256_srli_epi64(bits, 52);
    // compact the four low 32-bit halves of the 64-bit lanes
    const __m256i pick = _mm256_setr_epi32(0, 2, 4, 6, 0, 0, 0, 0);
    __m128i e32 = _mm256_castsi256_si128(_mm256_permutevar8x32_epi32(e64, pick));
    e32 = _mm_sub_epi32(e32, _mm_set1_epi32(1023));
    __m256d e = _mm256_cvtepi32_pd(e32);

    const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
    const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000LL);
    __m256d m = _mm256_castsi256_pd(
        _mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));

    const __m256d too_big = _mm256_cmp_pd(m, _mm256_set1_pd(kSqrt2), _CMP_GT_OQ);
    m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), too_big);
    e = _mm256_add_pd(e, _mm256_and_pd(too_big, _mm256_set1_pd(1.0)));

    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d s =
        _mm256_div_pd(_mm256_sub_pd(m, one), _mm256_add_pd(m, one));
    const __m256d z = _mm256_mul_pd(s, s);

    // 1/(2k+1) for k = 11 down to 0
    __m256d p = _mm256_set1_pd(1.0 / 23.0);
    p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.0 / 21.0));
    p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.0 / 19.0));
    p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.0 / 17.0));
    p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.0 / 15.0));
    p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.0 / 13.0));
    p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.0 / 11.0));
    p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.0 / 9.0));
    p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.0 / 7.0));
    p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.0 / 5.0));
    p = _mm256_fmadd_pd(p, z, _mm256_set1_pd(1.0 / 3.0));
    p = _mm256_fmadd_pd(p, z, one);

    const __m256d log_m = _mm256_mul_pd(_mm256_add_pd(s, s), p);
    __m256d result = _mm256_fmadd_pd(e, _mm256_set1_pd(kLn2Lo), log_m);
    result = _mm256_fmadd_pd(e, _mm256_set1_pd(kLn2Hi), result);
    return result;
}

double lane_sum(__m256d v) {
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, v);
    return ((lanes[0] + lanes[1]) + lanes[2]) + lanes[3];
}

void powlaw_avx2(const double* y, std::size_t n, std::size_t dim, double h,
                 double alpha, double* out) {
    if (dim != 1 || n < 8) {
        powlaw_scalar(y, n, dim, h, alpha, out);
        return;
    }
    const __m256d vh = _mm256_set1_pd(h);
    const __m256d neg_alpha = _mm256_set1_pd(-alpha);
    const double nd = static_cast<double>(n);
    __m256d vk = _mm256_setr_pd(nd, nd - 1.0, nd - 2.0, nd - 3.0);
    const __m256d four = _mm256_set1_pd(4.0);
    __m256d acc = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= n; j += 4) {
        const __m256d t = _mm256_mul_pd(vk, vh);
        const __m256d w = vexp(_mm256_mul_pd(neg_alpha, vlog(t)));
        acc = _mm256_fmadd_pd(w, _mm256_loadu_pd(y + j), acc);
        vk = _mm256_sub_pd(vk, four);
    }
    double sum = lane_sum(acc);
    for (; j < n; ++j) {
        const double t = static_cast<double>(n - j) * h;
        sum += std::exp(-alpha * std::log(t)) * y[j];
    }
    out[0] = sum;
}

void decay_update_avx2(double* accum, const double* decay, const double* push,
                       const double* x, std::size_t terms, std::size_t dim) {
    if (dim != 1) {
        decay_update_scalar(accum, decay, push, x, terms, dim);
        return;
    }
    const __m256d xv = _mm256_set1_pd(x[0]);
    std::size_t j = 0;
    for (; j + 4 <= terms; j += 4) {
        const __m256d u = _mm256_loadu_pd(accum + j);
        const __m256d d = _mm256_loadu_pd(decay + j);
        const __m256d pxv = _mm256_mul_pd(_mm256_loadu_pd(push + j), xv);
        _mm256_storeu_pd(accum + j, _mm256_fmadd_pd(d, u, pxv));
    }
    for (; j < terms; ++j) accum[j] = decay[j] * accum[j] + push[j] * x[0];
}

void term_sum_avx2(const double* accum, const double* w, std::size_t terms,
                   std::size_t dim, double* out) {
    if (dim != 1) {
        term_sum_scalar(accum, w, terms, dim, out);
        return;
    }
    __m256d acc = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 4 <= terms; j += 4)
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(w + j), _mm256_loadu_pd(accum + j), acc);
    double sum = lane_sum(acc);
    for (; j < terms; ++j) sum += w[j] * accum[j];
    out[0] = sum;
}

}  // namespace

const Vtable avx2_vtable{powlaw_avx2, decay_update_avx2, term_sum_avx2};

}  // namespace fracsde::kernels::detail

#endif  // FRACSDE_HAVE_AVX2_TU
