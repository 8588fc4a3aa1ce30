// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 repotopics contributors
#pragma once

// Interchange formats for the corpus pipeline.
//
// Corpus file: UTF-8 JSON Lines, one repository per line with fields
//   url (string), is_fork (bool), archived_at (ISO-8601 string),
//   topics (string array), tree (string array), readme (string|null).
// Mapping file: raw_topic TAB curated_topic, one pair per line.
// Taxonomy file: one curated topic per line.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "repotopics/corpus.hpp"

namespace repotopics::corpus_io {

// "2024-01-02T03:04:05Z" <-> UTC seconds. Throws std::invalid_argument
// on malformed input. Offsets other than Z are not accepted.
std::int64_t parse_iso8601_utc(const std::string& text);
std::string format_iso8601_utc(std::int64_t seconds);

std::string record_to_json_line(const corpus::RepositoryRecord& rec);
corpus::RepositoryRecord record_from_json_line(const std::string& line);

struct LineDiagnostic {
    std::size_t line_number = 0;  // 1-based
    std::string message;
};

struct ReadResult {
    std::vector<corpus::RepositoryRecord> records;
    std::vector<LineDiagnostic> diagnostics;
};

// Lenient reader: collects per-line diagnostics instead of throwing.
ReadResult read_corpus_lenient(std::istream& in);
// Strict reader: throws DataError naming the first offending line.
std::vector<corpus::RepositoryRecord> read_corpus(const std::string& path);
void write_corpus(const std::string& path, const std::vector<corpus::RepositoryRecord>& records);

corpus::TopicMapping read_mapping(const std::string& mapping_path, const std::string& taxonomy_path);
void write_mapping(const std::string& mapping_path, const corpus::TopicMapping& mapping);
void write_taxonomy(const std::string& taxonomy_path, const std::vector<std::string>& taxonomy);
std::vector<std::string> read_taxonomy(const std::string& taxonomy_path);

// Walks a directory and emits one RepositoryRecord: tree entries are
// root-relative paths (files, directories and symlinks, not followed),
// url is file://<absolute path>, readme text is loaded from the best
// root-level candidate no larger than 100 MiB.
corpus::RepositoryRecord record_from_directory(const std::string& dir_path);

}  // namespace repotopics::corpus_io
