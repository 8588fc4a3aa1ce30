// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 repotopics contributors

// AVX2 kernels. Compiled with -mavx2 -mno-fma; mul and add stay separate
// instructions so each lane is bit-identical to the scalar reference.

#include "repotopics/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace repotopics::kernels::avx2 {

double dot(const double* a, const double* b, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    const std::size_t nblk = n & ~static_cast<std::size_t>(3);
    for (std::size_t i = 0; i < nblk; i += 4) {
        const __m256d va = _mm256_loadu_pd(a + i);
        const __m256d vb = _mm256_loadu_pd(b + i);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(va, vb));
    }
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    double tail = 0.0;
    for (std::size_t i = nblk; i < n; ++i) tail += a[i] * b[i];
    return ((lane[0] + lane[1]) + (lane[2] + lane[3])) + tail;
}

double sum(const double* x, std::size_t n) {
    __m256d acc = _mm256_setzero_pd();
    const std::size_t nblk = n & ~static_cast<std::size_t>(3);
    for (std::size_t i = 0; i < nblk; i += 4) {
        acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
    }
    alignas(32) double lane[4];
    _mm256_store_pd(lane, acc);
    double tail = 0.0;
    for (std::size_t i = nblk; i < n; ++i) tail += x[i];
    return ((lane[0] + lane[1]) + (lane[2] + lane[3])) + tail;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    const std::size_t nblk = n & ~static_cast<std::size_t>(3);
    for (std::size_t i = 0; i < nblk; i += 4) {
        const __m256d vy = _mm256_loadu_pd(y + i);
        const __m256d vx = _mm256_loadu_pd(x + i);
        _mm256_storeu_pd(y + i, _mm256_add_pd(vy, _mm256_mul_pd(va, vx)));
    }
    for (std::size_t i = nblk; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

void scale(double* x, double alpha, std::size_t n) {
    const __m256d va = _mm256_set1_pd(alpha);
    const std::size_t nblk = n & ~static_cast<std::size_t>(3);
    for (std::size_t i = 0; i < nblk; i += 4) {
        _mm256_storeu_pd(x + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), va));
    }
    for (std::size_t i = nblk; i < n; ++i) x[i] = x[i] * alpha;
}

}  // namespace repotopics::kernels::avx2

#endif
