// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 repotopics contributors
#pragma once

// Synthetic corpus generator. Each label plants a signature file
// extension in the tree (with probability signal_strength per label)
// and a keyword in the README of repositories that have one, so a
// working pipeline can recover the labels from either segment.

#include <cstdint>
#include <vector>

#include "repotopics/config.hpp"
#include "repotopics/corpus.hpp"

namespace repotopics::synth {

struct SyntheticSpec {
    std::size_t repos = 2000;
    std::size_t labels = 8;
    double signal_strength = 0.8;       // per-label chance the tree carries the signal
    double readme_less_fraction = 0.34;  // exact count after rounding
    std::uint64_t seed = 0;
    // Share of repositories with 1..n labels; quota-allocated so the
    // realized counts are exact up to rounding.
    std::vector<double> label_count_distribution = {0.836, 0.136, 0.023, 0.004, 0.001};

    void validate() const;
};

struct SyntheticCorpus {
    std::vector<corpus::RepositoryRecord> records;
    corpus::TopicMapping mapping;  // identity mapping over the taxonomy
};

SyntheticCorpus generate(const SyntheticSpec& spec);

// Deterministic lowercase label names ("alpha", "bravo", ...).
std::vector<std::string> label_names(std::size_t count);

}  // namespace repotopics::synth
