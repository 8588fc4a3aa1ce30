// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 repotopics contributors
#pragma once

#include <stdexcept>
#include <string>

namespace repotopics {

// Malformed or inconsistent input data (corpus lines, mapping files,
// missing artifacts). Maps to exit code 2 in the CLI.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// A statistic that has no defined value on the given input, e.g. a
// correlation over a constant series.
class UndefinedResultError : public std::runtime_error {
public:
    explicit UndefinedResultError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace repotopics
