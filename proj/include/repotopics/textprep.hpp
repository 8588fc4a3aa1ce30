// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 repotopics contributors
#pragma once

// Text preparation: README detection and cleaning, deterministic
// file-name sampling, word-level vocabulary, and sentence-pair encoding
// with longest-first truncation.

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "repotopics/corpus.hpp"

namespace repotopics::textprep {

struct SamplerConfig {
    std::size_t max_names = 50;
    std::uint64_t hash_seed = 0;
};

// Root-level README candidates in priority order: bare name first, then
// .md, .txt, .rst, lexicographic within a tier. Case-insensitive match.
std::vector<std::string> readme_candidates(const corpus::RepositoryRecord& record);
std::optional<std::string> find_readme(const corpus::RepositoryRecord& record);

// Cleaning, applied in a fixed order: code snippets (fenced and inline),
// HTML/XML tags, URLs, e-mail addresses, @usernames, markdown symbols,
// digits, punctuation, non-ASCII bytes; whitespace collapsed, trimmed,
// lowercased. Idempotent; output is ASCII, lowercase, digit-free.
std::string clean_readme(const std::string& text);

// Distinct basenames from the tree, uniformly sampled down to max_names
// with a generator seeded from (url, hash_seed), sorted by code point.
std::vector<std::string> sample_tree_names(const corpus::RepositoryRecord& record,
                                           const SamplerConfig& cfg);

// Whitespace tokenizer for cleaned README text.
std::vector<std::string> whitespace_tokens(const std::string& text);
// File-name splitter: breaks on '.', '-', '_' to expose extensions.
std::vector<std::string> split_name_tokens(const std::string& name);
// Last path component of a repository url (used as the leading
// segment-A token source; split with split_name_tokens like file names).
std::string repo_name_from_url(const std::string& url);

class Vocabulary {
public:
    static constexpr int kPad = 0;
    static constexpr int kUnk = 1;
    static constexpr int kCls = 2;
    static constexpr int kSep = 3;
    static constexpr int kSpecials = 4;

    // Top (max_size - 4) tokens by frequency, ties broken
    // lexicographically. Throws std::invalid_argument on an empty corpus
    // or max_size <= 4.
    static Vocabulary build(const std::vector<std::vector<std::string>>& token_streams,
                            std::size_t max_size);

    int id_of(const std::string& token) const;  // kUnk when absent
    const std::string& token_of(int id) const;  // includes specials
    std::size_t size() const { return tokens_.size(); }
    const std::vector<std::string>& tokens() const { return tokens_; }  // index == id
    std::uint64_t fingerprint() const;

    // File format: header line naming the specials, then one token per
    // line; the id of line i (0-based, after the header) is i + 4.
    void save(const std::string& path) const;
    static Vocabulary load(const std::string& path);

private:
    std::vector<std::string> tokens_;  // [PAD, UNK, CLS, SEP, ...]
    std::unordered_map<std::string, int> ids_;
    void index();
};

struct EncodedExample {
    std::vector<int> token_ids;
    std::vector<int> segment_ids;   // 0 over CLS+A+SEP, 1 over B+SEP
    std::vector<bool> mask;         // true over all emitted positions
    std::vector<std::uint8_t> labels;  // binary vector over the taxonomy
};

// CLS + A + SEP (+ B + SEP when B nonempty). While the total exceeds
// max_length one token is dropped from the end of the currently longer
// segment (ties drop from A). Throws std::invalid_argument when
// max_length < 4. Labels are left unset.
EncodedExample encode_pair(const std::vector<std::string>& segment_a,
                           const std::vector<std::string>& segment_b, const Vocabulary& vocab,
                           std::size_t max_length);

}  // namespace repotopics::textprep
