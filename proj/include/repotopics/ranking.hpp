// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 repotopics contributors
#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

namespace repotopics::ranking {

// Label indices ranked by descending score; ties broken by label name
// (code-point order) so rankings are reproducible.
inline std::vector<std::size_t> top_k_indices(const std::vector<double>& scores,
                                              const std::vector<std::string>& names,
                                              std::size_t k) {
    std::vector<std::size_t> idx(scores.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return names[a] < names[b];
    });
    if (idx.size() > k) idx.resize(k);
    return idx;
}

}  // namespace repotopics::ranking
