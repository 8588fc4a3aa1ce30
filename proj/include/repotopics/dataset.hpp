// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 repotopics contributors
#pragma once

// Prepared datasets: records reduced to their two token segments plus
// labels, the stage that sits between the corpus pipeline and encoding.
// Files are JSON Lines with fields url, labels, seg_a, seg_b.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "repotopics/config.hpp"
#include "repotopics/corpus.hpp"
#include "repotopics/textprep.hpp"

namespace repotopics::dataset {

struct PreparedRecord {
    std::string url;
    std::vector<std::string> labels;  // sorted curated topics
    std::vector<std::string> seg_a;   // repository-name + file-name tokens
    std::vector<std::string> seg_b;   // cleaned README tokens; empty when README-less
};

// seg_a = repository name followed by the sampled tree names, each
// split on '.', '-', '_'; seg_b = whitespace tokens of the cleaned
// README.
PreparedRecord prepare_record(const corpus::LabeledRecord& rec,
                              const config::TextprepConfig& cfg);

void write_dataset(const std::string& path, const std::vector<PreparedRecord>& records);
std::vector<PreparedRecord> read_dataset(const std::string& path);

// Binary label vector in taxonomy order; unknown labels are a data
// error.
std::vector<std::uint8_t> label_vector(const std::vector<std::string>& labels,
                                       const std::vector<std::string>& taxonomy);

textprep::EncodedExample encode_record(const PreparedRecord& rec, const textprep::Vocabulary& vocab,
                                       const std::vector<std::string>& taxonomy,
                                       std::size_t max_length, bool blank_readme = false);

std::vector<textprep::EncodedExample> encode_dataset(const std::vector<PreparedRecord>& records,
                                                     const textprep::Vocabulary& vocab,
                                                     const std::vector<std::string>& taxonomy,
                                                     std::size_t max_length,
                                                     bool blank_readme = false);

// Ordered stage counts for the provenance manifest; the pipeline part
// of the funnel is monotone non-increasing.
using Manifest = std::vector<std::pair<std::string, std::size_t>>;

struct PrepareResult {
    std::vector<PreparedRecord> train;
    std::vector<PreparedRecord> validation;
    std::vector<PreparedRecord> test;
    textprep::Vocabulary vocab;
    Manifest manifest;
};

// remap -> sample -> dedup -> split -> clean/sample/encode-ready
// segments; the vocabulary is built from the training split only.
PrepareResult prepare(const std::vector<corpus::RepositoryRecord>& records,
                      const corpus::TopicMapping& mapping, const config::PipelineConfig& pipeline,
                      const config::TextprepConfig& textprep_cfg, std::uint64_t seed);

void write_manifest(const std::string& path, const Manifest& manifest);
Manifest read_manifest(const std::string& path);

}  // namespace repotopics::dataset
