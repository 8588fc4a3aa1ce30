// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 repotopics contributors

// repotopics: classify software repositories into domain topics from
// version-control signals (file/directory names plus optional README).
//
// Subcommands: ingest, prepare, train, tune, predict, evaluate, report,
// synth. Exit codes: 0 success, 1 usage/config error, 2 data error,
// 3 internal invariant violation.

#include <filesystem>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "repotopics/commands.hpp"
#include "repotopics/config.hpp"
#include "repotopics/errors.hpp"

using repotopics::config::RunConfig;

namespace {

struct GlobalOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    bool quiet = false;
};

RunConfig effective_config(const GlobalOpts& g) {
    RunConfig cfg;
    if (!g.config_path.empty()) cfg = RunConfig::load(g.config_path);
    if (g.seed.has_value()) cfg.seed = *g.seed;  // flag wins over the config key
    if (g.threads.has_value()) cfg.threads = *g.threads;
    if (cfg.threads < 1) throw std::invalid_argument("threads must be >= 1");
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"repository topic classification toolkit"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    GlobalOpts global;
    app.add_option("--config", global.config_path, "configuration file (JSON)");
    std::uint64_t seed_flag = 0;
    auto* seed_opt = app.add_option("--seed", seed_flag, "seed override (wins over the config)");
    int threads_flag = 1;
    auto* threads_opt = app.add_option("--threads", threads_flag, "worker threads");
    app.add_flag("--quiet", global.quiet, "suppress progress output");

    // ingest
    auto* ingest = app.add_subcommand("ingest", "validate a corpus file or walk a directory");
    std::string ingest_source, ingest_out;
    ingest->add_option("source", ingest_source, "corpus file or directory")->required();
    ingest->add_option("--out", ingest_out, "output corpus path (default: paths.corpus)");

    // prepare
    auto* prepare = app.add_subcommand("prepare", "remap, sample, dedup, split, and tokenize");
    std::size_t sample_target_flag = 0;
    auto* sample_opt =
        prepare->add_option("--sample-target", sample_target_flag, "inverse-frequency sample size");

    // train / tune / predict
    std::string backend_flag;
    auto* train = app.add_subcommand("train", "fit a backend and write its checkpoint");
    auto* train_backend = train->add_option("--backend", backend_flag, "linear | encoder");
    auto* tune = app.add_subcommand("tune", "tune thresholds on the validation split");
    std::string kind_flag;
    auto* kind_opt = tune->add_option("--policy-kind", kind_flag, "none | global | per_class");
    auto* tune_backend = tune->add_option("--backend", backend_flag, "linear | encoder");
    auto* predict = app.add_subcommand("predict", "write per-repository score vectors");
    std::string split_flag = "test";
    predict->add_option("--split", split_flag, "train | validation | test");
    auto* predict_backend = predict->add_option("--backend", backend_flag, "linear | encoder");

    // evaluate / report / synth
    auto* evaluate = app.add_subcommand("evaluate", "score predictions against truth labels");
    evaluate->add_option("--split", split_flag, "train | validation | test");
    auto* report = app.add_subcommand("report", "error budget, confusion, correlations, ablation");
    auto* synth = app.add_subcommand("synth", "generate a planted-signal synthetic corpus");
    std::size_t synth_repos = 0, synth_labels = 0;
    auto* synth_repos_opt = synth->add_option("--repos", synth_repos, "repository count");
    auto* synth_labels_opt = synth->add_option("--labels", synth_labels, "label count");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (seed_opt->count() > 0) global.seed = seed_flag;
        if (threads_opt->count() > 0) global.threads = threads_flag;
        RunConfig cfg = effective_config(global);

        if (ingest->parsed()) {
            const std::string out = ingest_out.empty() ? cfg.paths.corpus : ingest_out;
            std::error_code ec;
            if (std::filesystem::equivalent(ingest_source, out, ec) && !ec)
                throw std::invalid_argument("--out must differ from the source file");
            return repotopics::cli::run_ingest(cfg, ingest_source, out, global.quiet);
        }
        if (prepare->parsed()) {
            if (sample_opt->count() > 0) cfg.pipeline.sample_target = sample_target_flag;
            return repotopics::cli::run_prepare(cfg, global.quiet);
        }
        if (train->parsed()) {
            if (train_backend->count() > 0) cfg.training.backend = backend_flag;
            return repotopics::cli::run_train(cfg, global.quiet);
        }
        if (tune->parsed()) {
            if (tune_backend->count() > 0) cfg.training.backend = backend_flag;
            if (kind_opt->count() > 0) cfg.thresholds.kind = kind_flag;
            return repotopics::cli::run_tune(cfg, global.quiet);
        }
        if (predict->parsed()) {
            if (predict_backend->count() > 0) cfg.training.backend = backend_flag;
            return repotopics::cli::run_predict(cfg, split_flag, global.quiet);
        }
        if (evaluate->parsed()) return repotopics::cli::run_evaluate(cfg, split_flag, global.quiet);
        if (report->parsed()) return repotopics::cli::run_report(cfg, global.quiet);
        if (synth->parsed()) {
            if (synth_repos_opt->count() > 0) cfg.synth.repos = synth_repos;
            if (synth_labels_opt->count() > 0) cfg.synth.labels = synth_labels;
            return repotopics::cli::run_synth(cfg, global.quiet);
        }
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const repotopics::DataError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << '\n';
        return 3;
    }
}
