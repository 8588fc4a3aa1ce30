// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 repotopics contributors
#pragma once

// Command implementations behind the CLI subcommands. Each throws
// std::invalid_argument for usage/config problems, DataError for bad or
// missing data, and returns the process exit code otherwise.

#include <string>
#include <vector>

#include "repotopics/config.hpp"
#include "repotopics/models.hpp"

namespace repotopics::cli {

int run_ingest(const config::RunConfig& cfg, const std::string& source, const std::string& out_path,
               bool quiet);
int run_prepare(const config::RunConfig& cfg, bool quiet);
int run_train(const config::RunConfig& cfg, bool quiet);
int run_tune(const config::RunConfig& cfg, bool quiet);
int run_predict(const config::RunConfig& cfg, const std::string& split, bool quiet);
int run_evaluate(const config::RunConfig& cfg, const std::string& split, bool quiet);
int run_report(const config::RunConfig& cfg, bool quiet);
int run_synth(const config::RunConfig& cfg, bool quiet);

// PredictionSet file: one repository per line, url plus the full score
// vector in taxonomy order.
void write_predictions(const std::string& path, const std::vector<models::PredictionSet>& preds);
std::vector<models::PredictionSet> read_predictions(const std::string& path);

}  // namespace repotopics::cli
