// AVX2+FMA kernels. Compiled with -mavx2 -mfma; only reachable through the
// dispatch table after a runtime CPU check.
//
// The vector log/exp use the classic fdlibm reduction schemes (log via
// s = f/(2+f) and the Lg1..Lg7 minimax polynomial; exp via Cody-Waite ln2
// splitting and a degree-13 Taylor kernel on |r| <= ln2/2), giving ~1-2 ulp,
// which the scalar-equivalence suite bounds at 1e-14 relative.

#include "qmaxent/kernels.hpp"

#if defined(__x86_64__) || defined(__i386__)

#include <immintrin.h>

#include <cmath>
#include <cstdint>
#include <limits>

namespace qmaxent::kernels {
namespace {

inline __m256d vset(double v) { return _mm256_set1_pd(v); }

// ----- vector exp ----------------------------------------------------------

const __m256d kLog2E = vset(1.4426950408889634074);
const __m256d kLn2Hi = vset(6.93147180369123816490e-01);
const __m256d kLn2Lo = vset(1.90821492927058770002e-10);
// Taylor coefficients 1/k!, k = 13 down to 2.
const double kExpC[12] = {
    1.6059043836821614599e-10, 2.0876756987868098979e-9,
    2.5052108385441718775e-8,  2.7557319223985890653e-7,
    2.7557319223985892510e-6,  2.4801587301587301566e-5,
    1.9841269841269841253e-4,  1.3888888888888889419e-3,
    8.3333333333333332177e-3,  4.1666666666666664354e-2,
    1.6666666666666665741e-1,  5.0e-1,
};

inline __m256d vexp(__m256d x) {
    const __m256d nf = _mm256_round_pd(_mm256_mul_pd(x, kLog2E),
                                       _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fnmadd_pd(nf, kLn2Hi, x);
    r = _mm256_fnmadd_pd(nf, kLn2Lo, r);

    __m256d p = vset(kExpC[0]);
    for (int i = 1; i < 12; ++i) p = _mm256_fmadd_pd(p, r, vset(kExpC[i]));
    p = _mm256_fmadd_pd(p, _mm256_mul_pd(r, r), _mm256_add_pd(r, vset(1.0)));

    // Scale by 2^n in two halves so both factors stay normal; this keeps the
    // result exact through the subnormal range and defers overflow to the
    // final multiply. n is in [-1100, 1030] for any in-range x.
    const __m128i n32 = _mm256_cvtpd_epi32(nf);
    const __m128i h32 = _mm_srai_epi32(n32, 1);
    const __m128i r32 = _mm_sub_epi32(n32, h32);
    const __m256i bias = _mm256_set1_epi64x(1023);
    const __m256d s1 = _mm256_castsi256_pd(
        _mm256_slli_epi64(_mm256_add_epi64(_mm256_cvtepi32_epi64(h32), bias), 52));
    const __m256d s2 = _mm256_castsi256_pd(
        _mm256_slli_epi64(_mm256_add_epi64(_mm256_cvtepi32_epi64(r32), bias), 52));
    __m256d res = _mm256_mul_pd(_mm256_mul_pd(p, s1), s2);

    // Hard clamps: 0 below the subnormal range (also squashes the garbage the
    // int conversion makes of -inf), +inf above ln(DBL_MAX).
    const __m256d lo = _mm256_cmp_pd(x, vset(-745.2), _CMP_LT_OQ);
    const __m256d hi = _mm256_cmp_pd(x, vset(709.7827), _CMP_GT_OQ);
    res = _mm256_andnot_pd(lo, res);
    res = _mm256_blendv_pd(res, vset(std::numeric_limits<double>::infinity()), hi);
    return res;
}

// ----- vector log ----------------------------------------------------------

const double kLg1 = 6.666666666666735130e-01, kLg2 = 3.999999999940941908e-01,
             kLg3 = 2.857142874366239149e-01, kLg4 = 2.222219843214978396e-01,
             kLg5 = 1.818357216161805012e-01, kLg6 = 1.531383769920937332e-01,
             kLg7 = 1.479819860511658591e-01;

inline __m256d vlog(__m256d x) {
    const __m256i bits = _mm256_castpd_si256(x);
    // Biased exponent -> e = exponent - 1023, as int32 in each lane's low dword.
    __m256i e64 = _mm256_sub_epi64(_mm256_srli_epi64(bits, 52),
                                   _mm256_set1_epi64x(1023));
    const __m256i pick = _mm256_setr_epi32(0, 2, 4, 6, 0, 0, 0, 0);
    const __m128i e32 = _mm256_castsi256_si128(_mm256_permutevar8x32_epi32(e64, pick));
    __m256d e = _mm256_cvtepi32_pd(e32);

    // Mantissa rebased to [1, 2), then to [sqrt(2)/2, sqrt(2)).
    const __m256i mant = _mm256_or_si256(
        _mm256_and_si256(bits, _mm256_set1_epi64x(0x000FFFFFFFFFFFFFLL)),
        _mm256_set1_epi64x(0x3FF0000000000000LL));
    __m256d m = _mm256_castsi256_pd(mant);
    const __m256d geq = _mm256_cmp_pd(m, vset(1.4142135623730951), _CMP_GE_OQ);
    m = _mm256_blendv_pd(m, _mm256_mul_pd(m, vset(0.5)), geq);
    e = _mm256_add_pd(e, _mm256_and_pd(geq, vset(1.0)));

    const __m256d f = _mm256_sub_pd(m, vset(1.0));
    const __m256d s = _mm256_div_pd(f, _mm256_add_pd(f, vset(2.0)));
    const __m256d z = _mm256_mul_pd(s, s);
    const __m256d w = _mm256_mul_pd(z, z);
    const __m256d t1 = _mm256_mul_pd(
        w, _mm256_fmadd_pd(w, _mm256_fmadd_pd(w, vset(kLg6), vset(kLg4)), vset(kLg2)));
    const __m256d t2 = _mm256_mul_pd(
        z, _mm256_fmadd_pd(
               w, _mm256_fmadd_pd(w, _mm256_fmadd_pd(w, vset(kLg7), vset(kLg5)), vset(kLg3)),
               vset(kLg1)));
    const __m256d R = _mm256_add_pd(t1, t2);
    const __m256d hfsq = _mm256_mul_pd(vset(0.5), _mm256_mul_pd(f, f));

    // k*ln2_hi - ((hfsq - (s*(hfsq+R) + k*ln2_lo)) - f)
    const __m256d inner = _mm256_fmadd_pd(s, _mm256_add_pd(hfsq, R),
                                          _mm256_mul_pd(e, kLn2Lo));
    __m256d res = _mm256_fmadd_pd(
        e, kLn2Hi, _mm256_sub_pd(f, _mm256_sub_pd(hfsq, inner)));

    const __m256d zero = _mm256_cmp_pd(x, _mm256_setzero_pd(), _CMP_EQ_OQ);
    res = _mm256_blendv_pd(res, vset(-std::numeric_limits<double>::infinity()), zero);
    return res;
}

inline __m256d vpow(__m256d x, __m256d a) {
    const __m256d pos = _mm256_cmp_pd(x, _mm256_setzero_pd(), _CMP_GT_OQ);
    const __m256d r = vexp(_mm256_mul_pd(a, vlog(x)));
    return _mm256_and_pd(pos, r);
}

// ----- compensated lane accumulator ----------------------------------------

struct VAccum {
    __m256d s = _mm256_setzero_pd();
    __m256d c = _mm256_setzero_pd();
    void add(__m256d v) {
        const __m256d t = _mm256_add_pd(s, v);
        const __m256d abss = _mm256_andnot_pd(vset(-0.0), s);
        const __m256d absv = _mm256_andnot_pd(vset(-0.0), v);
        const __m256d big_s = _mm256_cmp_pd(abss, absv, _CMP_GE_OQ);
        const __m256d corr_s = _mm256_add_pd(_mm256_sub_pd(s, t), v);
        const __m256d corr_v = _mm256_add_pd(_mm256_sub_pd(v, t), s);
        c = _mm256_add_pd(c, _mm256_blendv_pd(corr_v, corr_s, big_s));
        s = t;
    }
    // Final horizontal combine through a scalar Neumaier pass.
    double value() const {
        alignas(32) double sv[4], cv[4];
        _mm256_store_pd(sv, s);
        _mm256_store_pd(cv, c);
        double acc = 0.0, comp = 0.0;
        for (double v : {sv[0], sv[1], sv[2], sv[3], cv[0], cv[1], cv[2], cv[3]}) {
            double t = acc + v;
            if (std::abs(acc) >= std::abs(v))
                comp += (acc - t) + v;
            else
                comp += (v - t) + acc;
            acc = t;
        }
        return acc + comp;
    }
};

struct ScalarAccum {
    double s = 0.0, c = 0.0;
    void add(double v) {
        double t = s + v;
        if (std::abs(s) >= std::abs(v))
            c += (s - t) + v;
        else
            c += (v - t) + s;
        s = t;
    }
};

// ----- kernel entry points --------------------------------------------------

double k_sum(const double* x, std::size_t n) {
    VAccum acc;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc.add(_mm256_loadu_pd(x + i));
    double tail = acc.value();
    ScalarAccum a;
    a.add(tail);
    for (; i < n; ++i) a.add(x[i]);
    return a.s + a.c;
}

double k_dot(const double* x, const double* y, std::size_t n) {
    VAccum acc;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc.add(_mm256_mul_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(y + i)));
    ScalarAccum a;
    a.add(acc.value());
    for (; i < n; ++i) a.add(x[i] * y[i]);
    return a.s + a.c;
}

void k_axpy(double a, const double* x, double* y, std::size_t n) {
    const __m256d va = vset(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i),
                                                _mm256_loadu_pd(y + i)));
    for (; i < n; ++i) y[i] += a * x[i];
}

double k_neg_sum_xlogx(const double* x, std::size_t n) {
    VAccum acc;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(x + i);
        const __m256d pos = _mm256_cmp_pd(v, _mm256_setzero_pd(), _CMP_GT_OQ);
        // masked lanes: x*ln(x) with ln(0) lanes zeroed before the multiply
        const __m256d lg = _mm256_and_pd(pos, vlog(v));
        acc.add(_mm256_mul_pd(v, lg));
    }
    ScalarAccum a;
    a.add(acc.value());
    for (; i < n; ++i)
        if (x[i] > 0.0) a.add(x[i] * std::log(x[i]));
    return -(a.s + a.c);
}

double k_sum_pow(const double* x, std::size_t n, double q) {
    const __m256d vq = vset(q);
    VAccum acc;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) acc.add(vpow(_mm256_loadu_pd(x + i), vq));
    ScalarAccum a;
    a.add(acc.value());
    for (; i < n; ++i)
        if (x[i] > 0.0) a.add(std::pow(x[i], q));
    return a.s + a.c;
}

double k_sum_xlog_ratio(const double* p, const double* r, std::size_t n,
                        bool* diverged) {
    VAccum acc;
    std::size_t i = 0;
    __m256d bad = _mm256_setzero_pd();
    for (; i + 4 <= n; i += 4) {
        const __m256d vp = _mm256_loadu_pd(p + i);
        const __m256d vr = _mm256_loadu_pd(r + i);
        const __m256d pos = _mm256_cmp_pd(vp, _mm256_setzero_pd(), _CMP_GT_OQ);
        const __m256d rzero = _mm256_cmp_pd(vr, _mm256_setzero_pd(), _CMP_LE_OQ);
        bad = _mm256_or_pd(bad, _mm256_and_pd(pos, rzero));
        // contribute only where p > 0 and r > 0
        const __m256d ok = _mm256_andnot_pd(rzero, pos);
        const __m256d ratio = _mm256_div_pd(vp, vr);
        // force masked lanes to ratio 1 so vlog stays in-domain
        const __m256d safe = _mm256_blendv_pd(vset(1.0), ratio, ok);
        acc.add(_mm256_and_pd(ok, _mm256_mul_pd(vp, vlog(safe))));
    }
    if (_mm256_movemask_pd(bad) != 0) *diverged = true;
    ScalarAccum a;
    a.add(acc.value());
    for (; i < n; ++i) {
        if (p[i] <= 0.0) continue;
        if (r[i] <= 0.0) {
            *diverged = true;
            continue;
        }
        a.add(p[i] * std::log(p[i] / r[i]));
    }
    return a.s + a.c;
}

double k_log_sum_exp(const double* x, std::size_t n) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, x[i]);
    if (std::isinf(m) && m < 0) return m;
    const __m256d vm = vset(m);
    VAccum acc;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4)
        acc.add(vexp(_mm256_sub_pd(_mm256_loadu_pd(x + i), vm)));
    ScalarAccum a;
    a.add(acc.value());
    for (; i < n; ++i) a.add(std::exp(x[i] - m));
    return m + std::log(a.s + a.c);
}

void k_exp_fill(double* out, const double* x, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, vexp(_mm256_loadu_pd(x + i)));
    for (; i < n; ++i) out[i] = std::exp(x[i]);
}

void k_log_fill(double* out, const double* x, std::size_t n) {
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, vlog(_mm256_loadu_pd(x + i)));
    for (; i < n; ++i) out[i] = std::log(x[i]);
}

void k_pow_fill(double* out, const double* x, double a, std::size_t n) {
    const __m256d va = vset(a);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) _mm256_storeu_pd(out + i, vpow(_mm256_loadu_pd(x + i), va));
    for (; i < n; ++i) out[i] = x[i] > 0.0 ? std::pow(x[i], a) : 0.0;
}

constexpr Ops kAvx2Ops = {
    "avx2",          k_sum,      k_dot,      k_axpy,     k_neg_sum_xlogx,
    k_sum_pow,       k_sum_xlog_ratio,       k_log_sum_exp,
    k_exp_fill,      k_log_fill, k_pow_fill,
};

} // namespace

const Ops* avx2_ops() { return &kAvx2Ops; }

} // namespace qmaxent::kernels

#else // non-x86 build: no AVX2 backend

namespace qmaxent::kernels {
const Ops* avx2_ops() { return nullptr; }
} // namespace qmaxent::kernels

#endif
