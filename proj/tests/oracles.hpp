// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 repotopics contributors
#pragma once

// Independent oracles for the test suite. Everything here recomputes
// expected values from first principles and stays clear of the library
// implementation paths it checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace oracles {

// Pooled-count metrics directly from binary truth/selected sets.
struct BrutePrf {
    double precision = 0.0, recall = 0.0, f1 = 0.0;
    std::size_t tp = 0, predicted = 0, actual = 0;
};

inline BrutePrf brute_prf(const std::vector<std::vector<std::uint8_t>>& truth,
                          const std::vector<std::vector<std::uint8_t>>& selected) {
    BrutePrf out;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        for (std::size_t c = 0; c < truth[i].size(); ++c) {
            const bool t = truth[i][c] != 0, s = selected[i][c] != 0;
            out.tp += (t && s) ? 1 : 0;
            out.predicted += s ? 1 : 0;
            out.actual += t ? 1 : 0;
        }
    }
    out.precision = out.predicted > 0 ? double(out.tp) / double(out.predicted) : 0.0;
    out.recall = out.actual > 0 ? double(out.tp) / double(out.actual) : 0.0;
    out.f1 = (out.precision + out.recall) > 0.0
                 ? 2.0 * out.precision * out.recall / (out.precision + out.recall)
                 : 0.0;
    return out;
}

// Coverage counted cell by cell: truth-present classes predicted at
// least once over truth-present classes.
inline double brute_coverage(const std::vector<std::vector<std::uint8_t>>& truth,
                             const std::vector<std::vector<std::uint8_t>>& selected) {
    const std::size_t c_count = truth.empty() ? 0 : truth[0].size();
    std::size_t present = 0, covered = 0;
    for (std::size_t c = 0; c < c_count; ++c) {
        bool has_t = false, has_s = false;
        for (std::size_t i = 0; i < truth.size(); ++i) {
            has_t = has_t || truth[i][c] != 0;
            has_s = has_s || selected[i][c] != 0;
        }
        if (has_t) {
            ++present;
            if (has_s) ++covered;
        }
    }
    return present > 0 ? double(covered) / double(present) : -1.0;
}

// Straightforward re-derivation of the ranking rule: descending score,
// ties by name, cut at k.
inline std::vector<std::size_t> reference_topk(const std::vector<double>& scores,
                                               const std::vector<std::string>& names,
                                               std::size_t k) {
    std::vector<std::size_t> idx(scores.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return names[a] < names[b];
    });
    if (idx.size() > k) idx.resize(k);
    return idx;
}

// Central finite differences of a scalar function over a flat parameter
// vector.
template <typename LossFn>
std::vector<double> fd_gradient(std::vector<double>& params, double eps, LossFn loss) {
    std::vector<double> grad(params.size(), 0.0);
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double keep = params[i];
        params[i] = keep + eps;
        const double hi = loss();
        params[i] = keep - eps;
        const double lo = loss();
        params[i] = keep;
        grad[i] = (hi - lo) / (2.0 * eps);
    }
    return grad;
}

inline double max_rel_err(const std::vector<double>& a, const std::vector<double>& b,
                          double floor = 1e-7) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double scale = std::max({std::fabs(a[i]), std::fabs(b[i]), floor});
        worst = std::max(worst, std::fabs(a[i] - b[i]) / scale);
    }
    return worst;
}

// Textbook Pearson, kept independent of the library's formulation.
inline double pearson_direct(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = double(x.size());
    double sx = 0, sy = 0, sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxy += x[i] * y[i];
        sxx += x[i] * x[i];
        syy += y[i] * y[i];
    }
    const double cov = sxy - sx * sy / n;
    const double vx = sxx - sx * sx / n;
    const double vy = syy - sy * sy / n;
    return cov / std::sqrt(vx * vy);
}

inline std::vector<double> ranks_direct(const std::vector<double>& v) {
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        double less = 0, equal = 0;
        for (std::size_t j = 0; j < v.size(); ++j) {
            if (v[j] < v[i]) ++less;
            if (v[j] == v[i]) ++equal;
        }
        r[i] = less + (equal + 1.0) / 2.0;
    }
    return r;
}

inline double spearman_direct(const std::vector<double>& x, const std::vector<double>& y) {
    return pearson_direct(ranks_direct(x), ranks_direct(y));
}

inline double unit(std::mt19937_64& rng) {
    return double(rng() >> 11) * 0x1.0p-53;
}

}  // namespace oracles
