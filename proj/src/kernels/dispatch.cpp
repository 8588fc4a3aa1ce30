// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 repotopics contributors

#include "repotopics/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace repotopics::kernels {
namespace {

struct Ops {
    double (*dot)(const double*, const double*, std::size_t);
    double (*sum)(const double*, std::size_t);
    void (*axpy)(double, const double*, double*, std::size_t);
    void (*scale)(double*, double, std::size_t);
};

constexpr Ops kScalarOps{scalar::dot, scalar::sum, scalar::axpy, scalar::scale};

#if defined(__x86_64__) || defined(_M_X64)
constexpr Ops kAvx2Ops{avx2::dot, avx2::sum, avx2::axpy, avx2::scale};
#endif
#if defined(__aarch64__)
constexpr Ops kNeonOps{neon::dot, neon::sum, neon::axpy, neon::scale};
#endif

const Ops* ops_for(Backend b) {
    switch (b) {
        case Backend::scalar:
            return &kScalarOps;
#if defined(__x86_64__) || defined(_M_X64)
        case Backend::avx2:
            return &kAvx2Ops;
#endif
#if defined(__aarch64__)
        case Backend::neon:
            return &kNeonOps;
#endif
        default:
            return nullptr;
    }
}

struct State {
    Backend backend;
    const Ops* ops;
};

Backend detect_best() {
#if defined(__x86_64__) || defined(_M_X64)
    if (__builtin_cpu_supports("avx2")) return Backend::avx2;
#elif defined(__aarch64__)
    return Backend::neon;
#endif
    return Backend::scalar;
}

Backend initial_backend() {
    const char* env = std::getenv("REPOTOPICS_KERNELS");
    if (env != nullptr) {
        if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0 && supported(Backend::avx2)) return Backend::avx2;
        if (std::strcmp(env, "neon") == 0 && supported(Backend::neon)) return Backend::neon;
        // "auto" or anything unrecognized falls through to detection.
    }
    return detect_best();
}

State& state() {
    static State s = [] {
        Backend b = initial_backend();
        return State{b, ops_for(b)};
    }();
    return s;
}

}  // namespace

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::scalar:
            return "scalar";
        case Backend::avx2:
            return "avx2";
        case Backend::neon:
            return "neon";
    }
    return "?";
}

Backend best_supported() { return detect_best(); }

bool supported(Backend b) {
    if (b == Backend::scalar) return true;
#if defined(__x86_64__) || defined(_M_X64)
    if (b == Backend::avx2) return __builtin_cpu_supports("avx2") != 0;
#endif
#if defined(__aarch64__)
    if (b == Backend::neon) return true;
#endif
    return false;
}

Backend active_backend() { return state().backend; }

bool set_backend(Backend b) {
    if (!supported(b)) return false;
    state() = State{b, ops_for(b)};
    return true;
}

double dot(const double* a, const double* b, std::size_t n) { return state().ops->dot(a, b, n); }
double sum(const double* x, std::size_t n) { return state().ops->sum(x, n); }
void axpy(double alpha, const double* x, double* y, std::size_t n) { state().ops->axpy(alpha, x, y, n); }
void scale(double* x, double alpha, std::size_t n) { state().ops->scale(x, alpha, n); }

}  // namespace repotopics::kernels
