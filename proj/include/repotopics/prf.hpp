// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 repotopics contributors
#pragma once

#include <cstddef>

namespace repotopics {

struct Prf {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

// Micro-averaged rates from pooled counts. Conventions: precision is 0
// when nothing was predicted, recall is 0 when nothing was true, F1 is
// 0 when both rates are 0. One shared definition keeps the tuners and
// the evaluation kit bit-for-bit consistent.
inline Prf prf_from_counts(std::size_t tp, std::size_t predicted, std::size_t actual) {
    Prf out;
    out.precision = predicted > 0 ? static_cast<double>(tp) / static_cast<double>(predicted) : 0.0;
    out.recall = actual > 0 ? static_cast<double>(tp) / static_cast<double>(actual) : 0.0;
    const double denom = out.precision + out.recall;
    out.f1 = denom > 0.0 ? 2.0 * out.precision * out.recall / denom : 0.0;
    return out;
}

}  // namespace repotopics
