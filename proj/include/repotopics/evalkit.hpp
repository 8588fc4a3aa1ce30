// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 repotopics contributors
#pragma once

// Multi-label metrics, error budgets, confusion structure, and
// distribution diagnostics.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "repotopics/prf.hpp"
#include "repotopics/thresholds.hpp"

namespace repotopics::evalkit {

// Binary truth/prediction indicators, row per repository.
struct EvalMatrix {
    std::size_t repos = 0;
    std::size_t labels = 0;
    std::vector<std::uint8_t> truth;      // repos x labels, row-major
    std::vector<std::uint8_t> predicted;  // same shape

    std::uint8_t y(std::size_t i, std::size_t c) const { return truth[i * labels + c]; }
    std::uint8_t yhat(std::size_t i, std::size_t c) const { return predicted[i * labels + c]; }
};

// Micro P/R/F1 of the policy's selections at ranking cutoff k (the
// policy's own k is overridden by the argument).
Prf micro_prf_at_k(const std::vector<models::PredictionSet>& preds,
                   const std::vector<std::vector<std::uint8_t>>& truth,
                   const std::vector<std::string>& taxonomy,
                   const thresholds::ThresholdPolicy& policy, std::size_t k);

// Truth-present classes predicted at least once, over truth-present
// classes. Throws std::invalid_argument when no class has a positive
// truth entry.
double class_coverage(const EvalMatrix& matrix);

struct ClassErrorRow {
    std::string label;
    std::size_t support = 0;
    double recall_at_5 = 0.0;
    double missed = 0.0;  // support * (1 - recall@5)
};

// Per-class error budget over truth-present classes, in taxonomy order.
// recall@5 runs the same selection pipeline with cutoff 5 and the
// policy's filter active.
std::vector<ClassErrorRow> error_budget(const std::vector<models::PredictionSet>& preds,
                                        const std::vector<std::vector<std::uint8_t>>& truth,
                                        const std::vector<std::string>& taxonomy,
                                        const thresholds::ThresholdPolicy& policy);

inline double missed_count(std::size_t support, double recall) {
    return static_cast<double>(support) * (1.0 - recall);
}

// Missed-descending view with a minimum-support filter (ties by label).
std::vector<ClassErrorRow> sorted_by_missed(std::vector<ClassErrorRow> table,
                                            std::size_t min_support);

struct ConfusionMatrix {
    std::vector<std::string> labels;  // the top_c most frequent truth labels
    std::vector<double> cells;        // top_c x top_c, rows normalized by support

    double at(std::size_t g, std::size_t p) const { return cells[g * labels.size() + p]; }
};

// Substitution structure over the top_c most frequent truth labels:
// cell (g, p) is the fraction of g's true instances where g was missed
// and p was the top-ranked selected non-truth label. Rows are
// normalized by support, so every row sums to at most 1.
ConfusionMatrix confusion_counts(const std::vector<models::PredictionSet>& preds,
                                 const std::vector<std::vector<std::uint8_t>>& truth,
                                 const std::vector<std::string>& taxonomy,
                                 const thresholds::ThresholdPolicy& policy, std::size_t top_c);

struct Correlations {
    double pearson = 0.0;
    double spearman = 0.0;
};

// Pearson and Spearman (average ranks on ties) over paired samples.
// Needs >= 3 points; throws UndefinedResultError on zero variance.
Correlations correlations(const std::vector<double>& x, const std::vector<double>& y);

// Pearson of (log support, recall@5) over the error-budget rows.
double support_recall_correlation(const std::vector<ClassErrorRow>& table);

// Least-squares slope of log(frequency) on log(rank); frequencies are
// ranked descending internally. Throws std::invalid_argument on
// nonpositive frequencies or fewer than two points.
double power_law_fit(const std::vector<double>& topic_frequencies);

struct EvalReport {
    std::vector<std::size_t> k_list;
    std::vector<Prf> metrics;  // parallel to k_list
    double class_coverage = 0.0;
    double unpredicted_fraction = 0.0;
    std::vector<ClassErrorRow> error_budget;
    std::optional<double> support_recall_pearson;
    std::optional<double> power_law_exponent;
};

// Machine-readable JSON plus an aligned human-readable dump (rates at
// three decimals, missed counts rounded to the nearest integer).
std::string report_to_json(const EvalReport& report);
std::string report_to_table(const EvalReport& report);

}  // namespace repotopics::evalkit
