// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 repotopics contributors
#pragma once

// Dense f64 kernels behind the training and similarity math.
//
// Every kernel is defined by the scalar reference implementation; SIMD
// variants (AVX2 on x86-64, NEON on aarch64) must produce bit-identical
// results. This works because all variants share one accumulation
// contract: four independent lanes over blocks of four elements, lanes
// combined as ((l0+l1)+(l2+l3)) followed by a scalar tail, and no
// fused multiply-add anywhere. The active variant is picked at runtime
// from CPU capabilities and may be overridden with set_backend() or the
// REPOTOPICS_KERNELS environment variable (scalar|avx2|neon|auto).

#include <cstddef>

namespace repotopics::kernels {

enum class Backend { scalar, avx2, neon };

const char* backend_name(Backend b);
Backend active_backend();
Backend best_supported();
bool supported(Backend b);
// Returns false (and leaves the active backend unchanged) if `b` is not
// supported on this CPU.
bool set_backend(Backend b);

// sum_i a[i]*b[i]
double dot(const double* a, const double* b, std::size_t n);
// sum_i x[i]
double sum(const double* x, std::size_t n);
// y[i] += alpha * x[i]
void axpy(double alpha, const double* x, double* y, std::size_t n);
// x[i] *= alpha
void scale(double* x, double alpha, std::size_t n);

// Scalar reference path, always available; the dispatched entry points
// above are equivalence-tested against these.
namespace scalar {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* x, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double* x, double alpha, std::size_t n);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* x, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double* x, double alpha, std::size_t n);
}  // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
double dot(const double* a, const double* b, std::size_t n);
double sum(const double* x, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void scale(double* x, double alpha, std::size_t n);
}  // namespace neon
#endif

}  // namespace repotopics::kernels
