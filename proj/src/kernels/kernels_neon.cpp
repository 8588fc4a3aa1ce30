// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 repotopics contributors

// NEON kernels. Two float64x2 registers emulate the four-lane contract
// (lanes 0..1 and 2..3); vmulq/vaddq are kept unfused.

#include "repotopics/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

namespace repotopics::kernels::neon {

double dot(const double* a, const double* b, std::size_t n) {
    float64x2_t acc01 = vdupq_n_f64(0.0);
    float64x2_t acc23 = vdupq_n_f64(0.0);
    const std::size_t nblk = n & ~static_cast<std::size_t>(3);
    for (std::size_t i = 0; i < nblk; i += 4) {
        acc01 = vaddq_f64(acc01, vmulq_f64(vld1q_f64(a + i), vld1q_f64(b + i)));
        acc23 = vaddq_f64(acc23, vmulq_f64(vld1q_f64(a + i + 2), vld1q_f64(b + i + 2)));
    }
    double tail = 0.0;
    for (std::size_t i = nblk; i < n; ++i) tail += a[i] * b[i];
    const double l0 = vgetq_lane_f64(acc01, 0), l1 = vgetq_lane_f64(acc01, 1);
    const double l2 = vgetq_lane_f64(acc23, 0), l3 = vgetq_lane_f64(acc23, 1);
    return ((l0 + l1) + (l2 + l3)) + tail;
}

double sum(const double* x, std::size_t n) {
    float64x2_t acc01 = vdupq_n_f64(0.0);
    float64x2_t acc23 = vdupq_n_f64(0.0);
    const std::size_t nblk = n & ~static_cast<std::size_t>(3);
    for (std::size_t i = 0; i < nblk; i += 4) {
        acc01 = vaddq_f64(acc01, vld1q_f64(x + i));
        acc23 = vaddq_f64(acc23, vld1q_f64(x + i + 2));
    }
    double tail = 0.0;
    for (std::size_t i = nblk; i < n; ++i) tail += x[i];
    const double l0 = vgetq_lane_f64(acc01, 0), l1 = vgetq_lane_f64(acc01, 1);
    const double l2 = vgetq_lane_f64(acc23, 0), l3 = vgetq_lane_f64(acc23, 1);
    return ((l0 + l1) + (l2 + l3)) + tail;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(alpha);
    const std::size_t nblk = n & ~static_cast<std::size_t>(1);
    for (std::size_t i = 0; i < nblk; i += 2) {
        vst1q_f64(y + i, vaddq_f64(vld1q_f64(y + i), vmulq_f64(va, vld1q_f64(x + i))));
    }
    for (std::size_t i = nblk; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

void scale(double* x, double alpha, std::size_t n) {
    const float64x2_t va = vdupq_n_f64(alpha);
    const std::size_t nblk = n & ~static_cast<std::size_t>(1);
    for (std::size_t i = 0; i < nblk; i += 2) {
        vst1q_f64(x + i, vmulq_f64(vld1q_f64(x + i), va));
    }
    for (std::size_t i = nblk; i < n; ++i) x[i] = x[i] * alpha;
}

}  // namespace repotopics::kernels::neon

#endif
