#include <immintrin.h>

#include <cmath>
#include <numbers>

#include "nonpv/simd/kernels.hpp"

namespace nonpv::simd {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct V2 {
    __m256d re, im;
};

inline __m256d vset(double x) { return _mm256_set1_pd(x); }
inline __m256d vround(__m256d x) { return _mm256_round_pd(x, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC); }
inline __m256d vfloor(__m256d x) { return _mm256_round_pd(x, _MM_FROUND_TO_NEG_INF | _MM_FROUND_NO_EXC); }
inline __m256d vneg(__m256d x) { return _mm256_xor_pd(x, vset(-0.0)); }
inline __m256d vabs(__m256d x) { return _mm256_andnot_pd(vset(-0.0), x); }

// sin and cos of 2 pi r
inline void sincos_turns(__m256d r, __m256d& s, __m256d& c)
{
    r = _mm256_sub_pd(r, vround(r));
    __m256d q = vround(_mm256_mul_pd(r, vset(4.0)));
    __m256d f = _mm256_sub_pd(r, _mm256_mul_pd(q, vset(0.25)));
    __m256d t = _mm256_mul_pd(f, vset(kTwoPi));
    __m256d t2 = _mm256_mul_pd(t, t);

    __m256d ps = vset(-1.0 / 1307674368000.0);
    ps = _mm256_fmadd_pd(ps, t2, vset(1.0 / 6227020800.0));
    ps = _mm256_fmadd_pd(ps, t2, vset(-1.0 / 39916800.0));
    ps = _mm256_fmadd_pd(ps, t2, vset(1.0 / 362880.0));
    ps = _mm256_fmadd_pd(ps, t2, vset(-1.0 / 5040.0));
    ps = _mm256_fmadd_pd(ps, t2, vset(1.0 / 120.0));
    ps = _mm256_fmadd_pd(ps, t2, vset(-1.0 / 6.0));
    ps = _mm256_mul_pd(ps, t2);
    __m256d sv = _mm256_fmadd_pd(ps, t, t);

    __m256d pc = vset(1.0 / 20922789888000.0);
    pc = _mm256_fmadd_pd(pc, t2, vset(-1.0 / 87178291200.0));
    pc = _mm256_fmadd_pd(pc, t2, vset(1.0 / 479001600.0));
    pc = _mm256_fmadd_pd(pc, t2, vset(-1.0 / 3628800.0));
    pc = _mm256_fmadd_pd(pc, t2, vset(1.0 / 40320.0));
    pc = _mm256_fmadd_pd(pc, t2, vset(-1.0 / 720.0));
    pc = _mm256_fmadd_pd(pc, t2, vset(1.0 / 24.0));
    pc = _mm256_fmadd_pd(pc, t2, vset(-0.5));
    __m256d cv = _mm256_fmadd_pd(pc, t2, vset(1.0));

    // quadrant q mod 4
    __m256d qm = _mm256_sub_pd(q, _mm256_mul_pd(vset(4.0), vfloor(_mm256_mul_pd(q, vset(0.25)))));
    __m256d odd = _mm256_or_pd(_mm256_cmp_pd(qm, vset(1.0), _CMP_EQ_OQ), _mm256_cmp_pd(qm, vset(3.0), _CMP_EQ_OQ));
    __m256d neg = _mm256_cmp_pd(qm, vset(2.0), _CMP_GE_OQ);
    __m256d s1 = _mm256_blendv_pd(sv, cv, odd);
    __m256d c1 = _mm256_blendv_pd(cv, vneg(sv), odd);
    __m256d sign = _mm256_and_pd(neg, vset(-0.0));
    s = _mm256_xor_pd(s1, sign);
    c = _mm256_xor_pd(c1, sign);
}

inline void cos_turns(__m256d r, __m256d& c)
{
    __m256d s;
    sincos_turns(r, s, c);
}

inline V2 cmul(V2 a, V2 b)
{
    return {_mm256_sub_pd(_mm256_mul_pd(a.re, b.re), _mm256_mul_pd(a.im, b.im)),
            _mm256_add_pd(_mm256_mul_pd(a.re, b.im), _mm256_mul_pd(a.im, b.re))};
}
inline V2 cadd(V2 a, V2 b) { return {_mm256_add_pd(a.re, b.re), _mm256_add_pd(a.im, b.im)}; }
inline __m256d cnorm(V2 a) { return _mm256_add_pd(_mm256_mul_pd(a.re, a.re), _mm256_mul_pd(a.im, a.im)); }

inline void neumaier(__m256d& s, __m256d& c, __m256d x)
{
    __m256d t = _mm256_add_pd(s, x);
    __m256d big = _mm256_cmp_pd(vabs(s), vabs(x), _CMP_GE_OQ);
    __m256d a = _mm256_add_pd(_mm256_sub_pd(s, t), x);
    __m256d b = _mm256_add_pd(_mm256_sub_pd(x, t), s);
    c = _mm256_add_pd(c, _mm256_blendv_pd(b, a, big));
    s = t;
}

inline void neumaier1(double& s, double& c, double x)
{
    double t = s + x;
    c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    s = t;
}

cplx exp_sum(const double* pos, const unsigned char* type, std::size_t n, double k, cplx u0, cplx u1)
{
    __m256d sr = _mm256_setzero_pd(), cr = sr, si = sr, ci = sr;
    const __m256d vk = vset(-k);
    const __m256d u0r = vset(u0.real()), u0i = vset(u0.imag()), u1r = vset(u1.real()), u1i = vset(u1.imag());
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d x = _mm256_loadu_pd(pos + i);
        int tb;
        __builtin_memcpy(&tb, type + i, 4);
        __m256i t64 = _mm256_cvtepu8_epi64(_mm_cvtsi32_si128(tb));
        __m256d is1 = _mm256_castsi256_pd(_mm256_cmpeq_epi64(t64, _mm256_set1_epi64x(1)));
        V2 u{_mm256_blendv_pd(u0r, u1r, is1), _mm256_blendv_pd(u0i, u1i, is1)};
        V2 e;
        sincos_turns(_mm256_mul_pd(vk, x), e.im, e.re);
        V2 t = cmul(u, e);
        neumaier(sr, cr, t.re);
        neumaier(si, ci, t.im);
    }
    alignas(32) double a[4], b[4], c[4], d[4];
    _mm256_store_pd(a, sr);
    _mm256_store_pd(b, cr);
    _mm256_store_pd(c, si);
    _mm256_store_pd(d, ci);
    double re = 0, rc = 0, im = 0, ic = 0;
    for (int l = 0; l < 4; ++l) {
        neumaier1(re, rc, a[l]);
        neumaier1(re, rc, b[l]);
        neumaier1(im, ic, c[l]);
        neumaier1(im, ic, d[l]);
    }
    for (; i < n; ++i) {
        double r = -(k * pos[i]);
        r -= std::nearbyint(r);
        cplx e(std::cos(kTwoPi * r), std::sin(kTwoPi * r));
        cplx t = (type[i] ? u1 : u0) * e;
        neumaier1(re, rc, t.real());
        neumaier1(im, ic, t.imag());
    }
    return {re + rc, im + ic};
}

void spectral_density(const double* ks, std::size_t count, const double* lam_pow, int steps, cplx u0, cplx u1,
                      double scale, double* out)
{
    std::size_t j = 0;
    const __m256d one = vset(1.0), two = vset(2.0), zero = _mm256_setzero_pd();
    for (; j + 4 <= count; j += 4) {
        __m256d k = _mm256_loadu_pd(ks + j);
        V2 s00{one, zero}, s01{zero, zero}, s10{zero, zero}, s11{one, zero};
        for (int m = 0; m < steps; ++m) {
            __m256d y = _mm256_mul_pd(vset(lam_pow[m]), k);
            __m256d x = _mm256_mul_pd(vset(lam_pow[m + 1]), k);
            y = _mm256_sub_pd(y, vfloor(y));
            x = _mm256_sub_pd(x, vfloor(x));
            V2 e;
            sincos_turns(_mm256_add_pd(x, y), e.im, e.re);
            __m256d cy;
            cos_turns(y, cy);
            __m256d amp = _mm256_add_pd(one, _mm256_mul_pd(two, cy));
            V2 p{_mm256_mul_pd(e.re, amp), vneg(_mm256_mul_pd(e.im, amp))};
            V2 n00 = cadd(s00, cmul(p, s10)), n01 = cadd(s01, cmul(p, s11));
            s10 = s00;
            s11 = s01;
            s00 = n00;
            s01 = n01;
        }
        V2 tot = cadd(cmul({vset(u0.real()), vset(u0.imag())}, s00), cmul({vset(u1.real()), vset(u1.imag())}, s01));
        V2 e;
        sincos_turns(_mm256_mul_pd(vset(lam_pow[steps + 1]), k), e.im, e.re);
        e.re = _mm256_add_pd(e.re, one);
        tot = cmul(tot, e);
        _mm256_storeu_pd(out + j, _mm256_mul_pd(cnorm(tot), vset(scale)));
    }
    if (j < count) scalar_kernels().spectral_density(ks + j, count - j, lam_pow, steps, u0, u1, scale, out + j);
}

void torus_frob2(const double* xs, const double* ys, std::size_t count, int n, double* out)
{
    std::size_t j = 0;
    const __m256d one = vset(1.0), two = vset(2.0), three = vset(3.0), zero = _mm256_setzero_pd();
    for (; j + 4 <= count; j += 4) {
        __m256d x = _mm256_loadu_pd(xs + j), y = _mm256_loadu_pd(ys + j);
        V2 a{one, zero}, b{zero, zero}, c{zero, zero}, d{one, zero};
        for (int m = 0; m < n; ++m) {
            V2 e;
            sincos_turns(_mm256_add_pd(x, y), e.im, e.re);
            __m256d cy;
            cos_turns(y, cy);
            __m256d amp = _mm256_add_pd(one, _mm256_mul_pd(two, cy));
            V2 p{_mm256_mul_pd(e.re, amp), _mm256_mul_pd(e.im, amp)};
            V2 na = cadd(a, cmul(b, p)), nc = cadd(c, cmul(d, p));
            b = a;
            d = c;
            a = na;
            c = nc;
            __m256d nx = _mm256_add_pd(x, _mm256_mul_pd(three, y));
            y = x;
            x = _mm256_sub_pd(nx, vfloor(nx));
        }
        __m256d f = _mm256_add_pd(_mm256_add_pd(cnorm(a), cnorm(b)), _mm256_add_pd(cnorm(c), cnorm(d)));
        _mm256_storeu_pd(out + j, f);
    }
    if (j < count) scalar_kernels().torus_frob2(xs + j, ys + j, count - j, n, out + j);
}

}  // namespace

const Kernels& avx2_table()
{
    static const Kernels k{"avx2", exp_sum, spectral_density, torus_frob2};
    return k;
}

}  // namespace nonpv::simd
