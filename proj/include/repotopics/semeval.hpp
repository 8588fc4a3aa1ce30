// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 repotopics contributors
#pragma once

// Synonym-aware relaxed evaluation driven by ingested label embeddings,
// plus similarity/confusion diagnostics.

#include <map>
#include <string>
#include <vector>

#include "repotopics/evalkit.hpp"

namespace repotopics::semeval {

struct LabelEmbeddings {
    std::map<std::string, std::vector<double>> vectors;

    // Same dimension everywhere, every taxonomy label present, no zero
    // vectors. Throws std::invalid_argument otherwise.
    void validate(const std::vector<std::string>& taxonomy) const;

    // File format: label TAB space-separated decimal floats, one label
    // per line; the dimension is inferred from the first line.
    static LabelEmbeddings load(const std::string& path);
    void save(const std::string& path) const;
};

// Hermetic fallback: character-trigram count vectors over the taxonomy
// labels, L2-normalized. Deterministic; never produces a zero vector.
LabelEmbeddings trigram_embeddings(const std::vector<std::string>& taxonomy);

struct SimilarityMatrix {
    std::vector<std::string> labels;
    std::vector<double> cells;  // labels x labels, symmetric, unit diagonal

    double at(std::size_t a, std::size_t b) const { return cells[a * labels.size() + b]; }
};

// Cosine similarities in taxonomy order.
SimilarityMatrix similarity_matrix(const LabelEmbeddings& emb,
                                   const std::vector<std::string>& taxonomy);

struct SemEvalConfig {
    double similarity_threshold = 0.5;
    std::size_t k = 5;
    // Exhaustive one-to-one matching instead of greedy; only permitted
    // for per-repository instances of at most 10 unmatched labels a side.
    bool exhaustive_matching = false;

    void validate() const;
};

struct RelaxedMetrics {
    Prf prf;
    std::size_t corrections = 0;              // accepted one-to-one synonym pairs
    std::size_t corrections_any_overlap = 0;  // selected non-truth labels with any
                                              // qualifying missed-truth partner
};

// Exact matches first, then remaining (selected, truth) pairs matched
// greedily in descending similarity (ties lexicographic), accepting
// pairs at or above the threshold; each label is consumed at most once.
RelaxedMetrics relaxed_metrics(const std::vector<models::PredictionSet>& preds,
                               const std::vector<std::vector<std::uint8_t>>& truth,
                               const std::vector<std::string>& taxonomy,
                               const thresholds::ThresholdPolicy& policy,
                               const SimilarityMatrix& sim, const SemEvalConfig& cfg);

// Correlation between off-diagonal confusion cells and the similarity
// of the same label pairs.
evalkit::Correlations similarity_confusion_correlation(const evalkit::ConfusionMatrix& confusions,
                                                       const SimilarityMatrix& sim);

struct DenseRegionScore {
    double top_mean = 0.0;     // mean pairwise similarity among top error contributors
    double global_mean = 0.0;  // mean over all label pairs
};

// Top contributors are taken from the error-budget ordering (missed
// descending). top_n must be at least 2.
DenseRegionScore dense_region_score(const std::vector<evalkit::ClassErrorRow>& error_table,
                                    const SimilarityMatrix& sim, std::size_t top_n);

}  // namespace repotopics::semeval
