// AVX2 variant of the batch quadratic-form kernel. This translation unit is
// compiled with -mavx2 (and only this one); dispatch happens at runtime in
// point_kernels.cpp. The vector body mirrors the scalar kernel's operation
// order exactly — mul/add, no FMA — so both backends produce bit-identical
// results.

#include "ellipfuse/point_kernels.hpp"

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace ellipfuse::kernels {

#if defined(__AVX2__)

bool avx2_compiled() { return true; }

void eval_avx2(const QuadForm& q, const double* xs, const double* ys, std::size_t n,
               double* out) {
    const __m256d cx = _mm256_set1_pd(q.cx);
    const __m256d cy = _mm256_set1_pd(q.cy);
    const __m256d ia = _mm256_set1_pd(q.ia);
    const __m256d ib2 = _mm256_set1_pd(q.ib2);
    const __m256d ic = _mm256_set1_pd(q.ic);

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + i), cx);
        const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + i), cy);
        const __m256d dxx = _mm256_mul_pd(dx, dx);
        const __m256d dxy = _mm256_mul_pd(dx, dy);
        const __m256d dyy = _mm256_mul_pd(dy, dy);
        const __m256d acc = _mm256_add_pd(
            _mm256_add_pd(_mm256_mul_pd(ia, dxx), _mm256_mul_pd(ib2, dxy)),
            _mm256_mul_pd(ic, dyy));
        _mm256_storeu_pd(out + i, acc);
    }
    if (i < n) {
        eval_scalar(q, xs + i, ys + i, n - i, out + i);
    }
}

#else

bool avx2_compiled() { return false; }

void eval_avx2(const QuadForm& q, const double* xs, const double* ys, std::size_t n,
               double* out) {
    eval_scalar(q, xs, ys, n, out);
}

#endif

} // namespace ellipfuse::kernels
