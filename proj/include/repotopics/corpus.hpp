// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 repotopics contributors
#pragma once

// Repository interchange records and the dataset pipeline: topic
// remapping, inverse-frequency sampling, deduplication, splitting.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace repotopics::corpus {

// One repository as stored in the interchange format. `tree` holds
// root-relative paths with "/" separators; symbolic links are entries,
// never followed. `readme` is raw text; cleaning happens in textprep.
struct RepositoryRecord {
    std::string url;
    bool is_fork = false;
    std::int64_t archived_at = 0;  // UTC seconds since epoch
    std::vector<std::string> raw_topics;
    std::vector<std::string> tree;
    std::optional<std::string> readme;
};

// Throws std::invalid_argument when a record violates its invariants
// (empty url, empty path segments, leading '/', duplicate tree entries).
void validate_record(const RepositoryRecord& rec);

// Raw user topic -> set of curated taxonomy topics. Lookup is
// case-folded and trimmed; multi-target entries are legal and flagged
// by validate() for reporting, not rejected.
struct TopicMapping {
    std::map<std::string, std::set<std::string>> entries;
    std::vector<std::string> taxonomy;

    // Throws std::invalid_argument if a mapped-to topic is missing from
    // the taxonomy or taxonomy names are not distinct/nonempty/lowercase.
    void validate() const;
    std::vector<std::string> multi_target_topics() const;
    int taxonomy_index(const std::string& label) const;  // -1 when absent
};

struct LabeledRecord {
    RepositoryRecord record;
    std::set<std::string> labels;  // nonempty, subset of taxonomy
};

struct SplitSpec {
    double train_ratio = 0.81;
    double val_ratio = 0.09;
    double test_ratio = 0.10;
    std::uint64_t seed = 0;

    void validate() const;  // ratios in (0,1), sum to 1 within 1e-9
};

struct SplitResult {
    std::vector<LabeledRecord> train;
    std::vector<LabeledRecord> validation;
    std::vector<LabeledRecord> test;
};

// Union of mapping hits over raw_topics, case-folded and trimmed.
// Empty union means the record is discarded (nullopt), not an error.
std::optional<LabeledRecord> remap_topics(const RepositoryRecord& record, const TopicMapping& mapping);

// Weighted sampling without replacement; the weight of a record is the
// inverse frequency of its exact sorted label combination. Single-pass
// reservoir with exponential keys; output keeps input order.
std::vector<LabeledRecord> inverse_frequency_sample(const std::vector<LabeledRecord>& records,
                                                    std::size_t target, std::uint64_t seed);

// Drops forks, then keeps the most recently archived record per url.
// Order of survivors follows the input. Idempotent.
std::vector<LabeledRecord> deduplicate(const std::vector<LabeledRecord>& records);

// Seeded shuffle then contiguous cuts; train and validation sizes are
// floored, the remainder goes to test.
SplitResult split(const std::vector<LabeledRecord>& records, const SplitSpec& spec);

// Case-fold + trim applied to raw topics before mapping lookup.
std::string normalize_topic(const std::string& raw);

}  // namespace repotopics::corpus
