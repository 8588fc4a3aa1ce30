// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 repotopics contributors

// Reference kernels. The four-lane block structure is part of the
// contract, not an optimization: SIMD variants replay exactly these
// operations per lane, so keep the order fixed.

#include "repotopics/kernels.hpp"

namespace repotopics::kernels::scalar {

double dot(const double* a, const double* b, std::size_t n) {
    double l0 = 0.0, l1 = 0.0, l2 = 0.0, l3 = 0.0;
    const std::size_t nblk = n & ~static_cast<std::size_t>(3);
    for (std::size_t i = 0; i < nblk; i += 4) {
        l0 += a[i + 0] * b[i + 0];
        l1 += a[i + 1] * b[i + 1];
        l2 += a[i + 2] * b[i + 2];
        l3 += a[i + 3] * b[i + 3];
    }
    double tail = 0.0;
    for (std::size_t i = nblk; i < n; ++i) tail += a[i] * b[i];
    return ((l0 + l1) + (l2 + l3)) + tail;
}

double sum(const double* x, std::size_t n) {
    double l0 = 0.0, l1 = 0.0, l2 = 0.0, l3 = 0.0;
    const std::size_t nblk = n & ~static_cast<std::size_t>(3);
    for (std::size_t i = 0; i < nblk; i += 4) {
        l0 += x[i + 0];
        l1 += x[i + 1];
        l2 += x[i + 2];
        l3 += x[i + 3];
    }
    double tail = 0.0;
    for (std::size_t i = nblk; i < n; ++i) tail += x[i];
    return ((l0 + l1) + (l2 + l3)) + tail;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] = y[i] + alpha * x[i];
}

void scale(double* x, double alpha, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) x[i] = x[i] * alpha;
}

}  // namespace repotopics::kernels::scalar
