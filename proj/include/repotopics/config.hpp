// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 repotopics contributors
#pragma once

// One declarative configuration file drives every command; CLI flags
// mirror config keys and win on conflict. All randomness flows from the
// seed recorded here.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace repotopics::config {

struct Paths {
    std::string corpus = "corpus.jsonl";
    std::string mapping = "mapping.tsv";
    std::string taxonomy = "taxonomy.txt";
    std::string vocabulary = "vocab.txt";
    std::string embeddings;  // optional; trigram fallback when empty
    std::string model_linear = "model_linear.ckpt";
    std::string model_encoder = "model_encoder.ckpt";
    std::string policy = "policy.json";
    std::string datasets_dir = "data";
    std::string predictions = "predictions.jsonl";
    std::string reports_dir = "reports";
};

struct PipelineConfig {
    std::size_t sample_target = 0;  // 0 keeps every labeled record
    double train_ratio = 0.81;
    double val_ratio = 0.09;
    double test_ratio = 0.10;
};

struct TextprepConfig {
    std::size_t max_names = 50;
    std::uint64_t hash_seed = 0;
    std::size_t max_length = 512;
    std::size_t vocab_size = 8192;
};

struct BackendTraining {
    double learning_rate = 0.0;  // backend-specific default applied by loader
    std::size_t epochs = 3;
    std::size_t batch_size = 8;
};

struct EncoderConfig {
    int dim = 64;
    int layers = 2;
    int heads = 2;
    int ffn = 128;
};

struct TrainingConfig {
    std::string backend = "linear";  // linear | encoder
    double alpha = 0.5;
    double gamma = 2.0;
    std::size_t selection_k = 5;
    BackendTraining linear{0.005, 3, 8};
    BackendTraining encoder_train{0.001, 3, 8};
    EncoderConfig encoder;
};

struct ThresholdConfig {
    std::string kind = "global";  // none | global | per_class
    std::size_t k = 5;
    double global_step = 0.01;
    double class_step = 0.05;
    double init = 0.5;
    std::size_t max_sweeps = 10;
    double tolerance = 1e-4;
    double lambda_class = 0.1;
};

struct EvaluationConfig {
    std::vector<std::size_t> k_list = {1, 3, 5};
    std::vector<double> similarity_thresholds = {0.5, 0.6, 0.7};
    std::size_t min_support = 10;
    std::size_t top_confusion = 30;
    std::size_t dense_top_n = 10;
};

struct SynthConfig {
    std::size_t repos = 2000;
    std::size_t labels = 8;
    double signal_strength = 0.8;
    double readme_less_fraction = 0.34;
    std::vector<double> label_count_distribution = {0.836, 0.136, 0.023, 0.004, 0.001};
};

struct RunConfig {
    std::optional<std::uint64_t> seed;  // required before any command runs
    int threads = 1;
    Paths paths;
    PipelineConfig pipeline;
    TextprepConfig textprep;
    TrainingConfig training;
    ThresholdConfig thresholds;
    EvaluationConfig evaluation;
    SynthConfig synth;

    std::uint64_t require_seed() const;  // throws std::invalid_argument when unset

    static RunConfig load(const std::string& path);
    static RunConfig from_json_text(const std::string& text, const std::string& origin);
};

}  // namespace repotopics::config
