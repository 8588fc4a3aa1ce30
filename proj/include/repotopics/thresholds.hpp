// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 repotopics contributors
#pragma once

// Label selection under three filtering policies and the tuners for the
// global and per-class thresholds.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "repotopics/models.hpp"

namespace repotopics::thresholds {

enum class PolicyKind { none, global, per_class };

struct ThresholdPolicy {
    PolicyKind kind = PolicyKind::none;
    std::size_t k = 5;
    double tau = 0.0;
    std::map<std::string, double> tau_by_class;  // must cover the taxonomy for per_class

    // Thresholds in [0,1]; per_class map covers the full taxonomy.
    void validate(const std::vector<std::string>& taxonomy) const;

    void save(const std::string& path) const;
    static ThresholdPolicy load(const std::string& path);
};

// Ranks labels by descending probability (ties lexicographic), keeps
// the top k, then filters by the policy. Order is preserved.
std::vector<std::string> select(const models::PredictionSet& pred,
                                const std::vector<std::string>& taxonomy,
                                const ThresholdPolicy& policy);

// Index form used by the evaluation kit: positions into the taxonomy.
std::vector<std::size_t> select_indices(const std::vector<double>& scores,
                                        const std::vector<std::string>& taxonomy,
                                        const ThresholdPolicy& policy);

struct TuneObjective {
    double lambda_class = 0.1;
    std::size_t k = 5;

    void validate() const;  // lambda_class >= 0
};

// Grid point in {0, step, 2*step, ..., 1} maximizing micro F1@k under
// the global policy; smallest tau on ties.
double tune_global(const std::vector<models::PredictionSet>& preds,
                   const std::vector<std::vector<std::uint8_t>>& truth,
                   const std::vector<std::string>& taxonomy, std::size_t k, double step);

struct PerClassTuneResult {
    std::map<std::string, double> tau_by_class;
    std::vector<double> objective_trajectory;  // L after each sweep, first entry = initial L
    std::size_t sweeps = 0;
};

// Coordinate descent over classes in taxonomy order, maximizing
// L = micro F1@k + lambda_class * ClassCoverage over the candidate grid
// {0, step, ..., 1}; stops when a full sweep improves L by less than
// tolerance or after max_sweeps.
PerClassTuneResult tune_per_class(const std::vector<models::PredictionSet>& preds,
                                  const std::vector<std::vector<std::uint8_t>>& truth,
                                  const std::vector<std::string>& taxonomy,
                                  const TuneObjective& objective, double init, double step,
                                  std::size_t max_sweeps, double tolerance);

// Shared grid construction: {0, step, 2*step, ...} with 1.0 always the
// final point.
std::vector<double> threshold_grid(double step);

}  // namespace repotopics::thresholds
