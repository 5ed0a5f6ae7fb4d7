#include "mdlbb/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <limits>

namespace mdlbb::kernels {

namespace {

double hmin(__m256d v) {
    alignas(32) double a[4];
    _mm256_store_pd(a, v);
    return std::min(std::min(a[0], a[1]), std::min(a[2], a[3]));
}

double hmax(__m256d v) {
    alignas(32) double a[4];
    _mm256_store_pd(a, v);
    return std::max(std::max(a[0], a[1]), std::max(a[2], a[3]));
}

NbStep nb_step_avx2(std::size_t n, const double* phi, const double* x, const double* T, const std::int32_t* dst,
                    const std::int32_t* rev, double shift, double* z) {
    __m256d lo = _mm256_set1_pd(std::numeric_limits<double>::infinity());
    __m256d hi = _mm256_set1_pd(-std::numeric_limits<double>::infinity());
    __m256d zmax = _mm256_setzero_pd();
    const __m256d s = _mm256_set1_pd(shift);
    std::size_t e = 0;
    for (; e + 4 <= n; e += 4) {
        const __m128i id = _mm_loadu_si128(reinterpret_cast<const __m128i*>(dst + e));
        const __m128i ir = _mm_loadu_si128(reinterpret_cast<const __m128i*>(rev + e));
        const __m256d td = _mm256_i32gather_pd(T, id, 8);
        const __m256d xr = _mm256_i32gather_pd(x, ir, 8);
        const __m256d xe = _mm256_loadu_pd(x + e);
        const __m256d y = _mm256_mul_pd(_mm256_loadu_pd(phi + e), _mm256_sub_pd(td, xr));
        const __m256d q = _mm256_div_pd(y, xe);
        lo = _mm256_min_pd(lo, q);
        hi = _mm256_max_pd(hi, q);
        const __m256d zz = _mm256_add_pd(y, _mm256_mul_pd(s, xe));
        _mm256_storeu_pd(z + e, zz);
        zmax = _mm256_max_pd(zmax, zz);
    }
    NbStep r{hmin(lo), hmax(hi), hmax(zmax)};
    for (; e < n; ++e) {
        const double y = phi[e] * (T[dst[e]] - x[rev[e]]);
        const double q = y / x[e];
        r.lo = std::min(r.lo, q);
        r.hi = std::max(r.hi, q);
        z[e] = y + shift * x[e];
        r.zmax = std::max(r.zmax, z[e]);
    }
    return r;
}

double mp_update_avx2(std::size_t n, const double* phi, const double* t, const double* u, double* u_new) {
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d sign = _mm256_set1_pd(-0.0);
    __m256d delta = _mm256_setzero_pd();
    std::size_t e = 0;
    for (; e + 4 <= n; e += 4) {
        const __m256d tv = _mm256_loadu_pd(t + e);
        const __m256d nu = _mm256_sub_pd(one, _mm256_mul_pd(_mm256_loadu_pd(phi + e), _mm256_sub_pd(one, tv)));
        _mm256_storeu_pd(u_new + e, nu);
        delta = _mm256_max_pd(delta, _mm256_andnot_pd(sign, _mm256_sub_pd(nu, _mm256_loadu_pd(u + e))));
    }
    double d = hmax(delta);
    for (; e < n; ++e) {
        u_new[e] = 1.0 - phi[e] * (1.0 - t[e]);
        d = std::max(d, std::abs(u_new[e] - u[e]));
    }
    return d;
}

constexpr KernelSet kAvx2{"avx2", nb_step_avx2, mp_update_avx2};

} // namespace

const KernelSet* avx2_impl() { return &kAvx2; }

} // namespace mdlbb::kernels
