// AVX2/FMA variants of the batch kernels. Compiled with -mavx2 -mfma and only
// called after a runtime CPU check.

#include <immintrin.h>

#include <cmath>
#include <cstdint>

#include "sdbf/kernels.hpp"

namespace sdbf::kernels::avx2 {

namespace {

constexpr std::size_t kWidth = 4;

// exp for |x| <= 708; other lanes are patched by the caller.
inline __m256d exp_core(__m256d x) {
    const __m256d log2e = _mm256_set1_pd(1.44269504088896340736);
    const __m256d ln2_hi = _mm256_set1_pd(0.693145751953125);
    const __m256d ln2_lo = _mm256_set1_pd(1.42860682030941723212e-6);

    const __m256d n = _mm256_round_pd(_mm256_mul_pd(x, log2e),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(n, ln2_hi, x);
    r = _mm256_fnmadd_pd(n, ln2_lo, r);

    // Taylor series to r^13 on |r| <= ln2/2; truncation error below 1e-17.
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

    // 2^n via the exponent field; n is in [-1022, 1022] here.
    const __m256d magic = _mm256_set1_pd(4503599627370496.0 + 1023.0);  // 2^52 + bias
    const __m256i bits = _mm256_slli_epi64(_mm256_castpd_si256(_mm256_add_pd(n, magic)), 52);
    return _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
}

// Lanes below -746 flush to zero; lanes in the subnormal range, above 708,
// or NaN fall back to std::exp.
inline __m256d exp_pd(__m256d x) {
    const __m256d abs_x = _mm256_andnot_pd(_mm256_set1_pd(-0.0), x);
    const __m256d underflow = _mm256_cmp_pd(x, _mm256_set1_pd(-746.0), _CMP_LT_OQ);
    const __m256d fast = _mm256_cmp_pd(abs_x, _mm256_set1_pd(708.0), _CMP_LE_OQ);
    __m256d y = _mm256_and_pd(exp_core(_mm256_and_pd(x, fast)), fast);
    const __m256d ok = _mm256_or_pd(fast, underflow);
    if (_mm256_movemask_pd(ok) != 0xF) {
        alignas(32) double xs[kWidth];
        alignas(32) double ys[kWidth];
        _mm256_store_pd(xs, x);
        _mm256_store_pd(ys, y);
        const int mask = _mm256_movemask_pd(ok);
        for (std::size_t k = 0; k < kWidth; ++k) {
            if (!(mask & (1 << k))) ys[k] = std::exp(xs[k]);
        }
        y = _mm256_load_pd(ys);
    }
    return y;
}

// log for positive normal doubles, fdlibm reduction m in [sqrt(1/2), sqrt(2)).
inline __m256d log_core(__m256d x) {
    const __m256i bits = _mm256_castpd_si256(x);
    const __m256i exp_bits = _mm256_srli_epi64(bits, 52);
    // int64 -> double for small non-negative integers
    const __m256d two52 = _mm256_set1_pd(4503599627370496.0);
    __m256d e = _mm256_sub_pd(
        _mm256_castsi256_pd(_mm256_or_si256(exp_bits, _mm256_castpd_si256(two52))), two52);
    e = _mm256_sub_pd(e, _mm256_set1_pd(1023.0));

    const __m256i mant_mask = _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL);
    const __m256i one_bits = _mm256_set1_epi64x(0x3FF0000000000000LL);
    __m256d m = _mm256_castsi256_pd(_mm256_or_si256(_mm256_and_si256(bits, mant_mask), one_bits));

    const __m256d big = _mm256_cmp_pd(m, _mm256_set1_pd(1.41421356237309504880), _CMP_GT_OQ);
    m = _mm256_blendv_pd(m, _mm256_mul_pd(m, _mm256_set1_pd(0.5)), big);
    e = _mm256_add_pd(e, _mm256_and_pd(big, _mm256_set1_pd(1.0)));

    const __m256d f = _mm256_sub_pd(m, _mm256_set1_pd(1.0));
    const __m256d s = _mm256_div_pd(f, _mm256_add_pd(_mm256_set1_pd(2.0), f));
    const __m256d z = _mm256_mul_pd(s, s);
    const __m256d w = _mm256_mul_pd(z, z);

    __m256d t1 = _mm256_fmadd_pd(w, _mm256_set1_pd(1.531383769920937332e-01),
                                 _mm256_set1_pd(2.222219843214978396e-01));
    t1 = _mm256_fmadd_pd(w, t1, _mm256_set1_pd(3.999999999940941908e-01));
    t1 = _mm256_mul_pd(w, t1);
    __m256d t2 = _mm256_fmadd_pd(w, _mm256_set1_pd(1.479819860511658591e-01),
                                 _mm256_set1_pd(1.818357216161805012e-01));
    t2 = _mm256_fmadd_pd(w, t2, _mm256_set1_pd(2.857142874366239149e-01));
    t2 = _mm256_fmadd_pd(w, t2, _mm256_set1_pd(6.666666666666735130e-01));
    t2 = _mm256_mul_pd(z, t2);
    const __m256d R = _mm256_add_pd(t1, t2);
    const __m256d hfsq = _mm256_mul_pd(_mm256_set1_pd(0.5), _mm256_mul_pd(f, f));

    const __m256d ln2_hi = _mm256_set1_pd(6.93147180369123816490e-01);
    const __m256d ln2_lo = _mm256_set1_pd(1.90821492927058770002e-10);
    // e*ln2_hi - ((hfsq - (s*(hfsq+R) + e*ln2_lo)) - f)
    const __m256d inner = _mm256_fmadd_pd(s, _mm256_add_pd(hfsq, R), _mm256_mul_pd(e, ln2_lo));
    const __m256d tail = _mm256_sub_pd(_mm256_sub_pd(hfsq, inner), f);
    return _mm256_fmsub_pd(e, ln2_hi, tail);
}

// Lanes that are not positive normal finite numbers fall back to std::log.
inline __m256d log_pd(__m256d x) {
    __m256d y = log_core(x);
    const __m256d ok = _mm256_and_pd(
        _mm256_cmp_pd(x, _mm256_set1_pd(2.2250738585072014e-308), _CMP_GE_OQ),
        _mm256_cmp_pd(x, _mm256_set1_pd(1.7976931348623157e308), _CMP_LE_OQ));
    if (_mm256_movemask_pd(ok) != 0xF) {
        alignas(32) double xs[kWidth];
        alignas(32) double ys[kWidth];
        _mm256_store_pd(xs, x);
        _mm256_store_pd(ys, y);
        const int mask = _mm256_movemask_pd(ok);
        for (std::size_t k = 0; k < kWidth; ++k) {
            if (!(mask & (1 << k))) ys[k] = std::log(xs[k]);
        }
        y = _mm256_load_pd(ys);
    }
    return y;
}

// log1p(u) for u >= 0: log(1+u) plus the rounding correction of 1+u.
inline __m256d log1p_nonneg(__m256d u) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d w = _mm256_add_pd(one, u);
    const __m256d c = _mm256_div_pd(_mm256_sub_pd(u, _mm256_sub_pd(w, one)), w);
    return _mm256_add_pd(log_pd(w), c);
}

}  // namespace

void evaluate(const ProductIntegrand& p, std::span<const double> theta, std::span<double> out) {
    const std::size_t n = theta.size();
    const std::size_t body = n - n % kWidth;

    const __m256d center = _mm256_set1_pd(p.center);
    const __m256d inv_se = _mm256_set1_pd(p.inv_se);
    const __m256d location = _mm256_set1_pd(p.location);
    const __m256d inv_scale = _mm256_set1_pd(p.inv_scale);
    const __m256d log_const = _mm256_set1_pd(p.log_const);
    const __m256d lower = _mm256_set1_pd(p.lower);
    const __m256d upper = _mm256_set1_pd(p.upper);
    const __m256d minus_half = _mm256_set1_pd(-0.5);
    const __m256d inv_df = _mm256_set1_pd(1.0 / p.df);
    const __m256d minus_half_df1 = _mm256_set1_pd(-0.5 * (p.df + 1.0));

    for (std::size_t i = 0; i < body; i += kWidth) {
        const __m256d t = _mm256_loadu_pd(theta.data() + i);
        const __m256d inside = _mm256_and_pd(_mm256_cmp_pd(t, lower, _CMP_GE_OQ),
                                             _mm256_cmp_pd(t, upper, _CMP_LE_OQ));
        const __m256d d = _mm256_mul_pd(_mm256_sub_pd(t, center), inv_se);
        const __m256d z = _mm256_mul_pd(_mm256_sub_pd(t, location), inv_scale);
        const __m256d z2 = _mm256_mul_pd(z, z);
        __m256d kernel;
        if (p.student) {
            kernel = _mm256_mul_pd(minus_half_df1, log1p_nonneg(_mm256_mul_pd(z2, inv_df)));
        } else {
            kernel = _mm256_mul_pd(minus_half, z2);
        }
        __m256d expo = _mm256_fmadd_pd(minus_half, _mm256_mul_pd(d, d), kernel);
        expo = _mm256_add_pd(expo, log_const);
        // Outside the support the exponent is irrelevant; keep exp() on its fast path.
        expo = _mm256_and_pd(expo, inside);
        const __m256d f = exp_pd(expo);
        _mm256_storeu_pd(out.data() + i, _mm256_and_pd(f, inside));
    }
    if (body < n) scalar::evaluate(p, theta.subspan(body), out.subspan(body));
}

void exp(std::span<const double> x, std::span<double> out) {
    const std::size_t n = x.size();
    const std::size_t body = n - n % kWidth;
    for (std::size_t i = 0; i < body; i += kWidth) {
        _mm256_storeu_pd(out.data() + i, exp_pd(_mm256_loadu_pd(x.data() + i)));
    }
    if (body < n) scalar::exp(x.subspan(body), out.subspan(body));
}

void log(std::span<const double> x, std::span<double> out) {
    const std::size_t n = x.size();
    const std::size_t body = n - n % kWidth;
    for (std::size_t i = 0; i < body; i += kWidth) {
        _mm256_storeu_pd(out.data() + i, log_pd(_mm256_loadu_pd(x.data() + i)));
    }
    if (body < n) scalar::log(x.subspan(body), out.subspan(body));
}

}  // namespace sdbf::kernels::avx2
