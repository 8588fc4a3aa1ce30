// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 repotopics contributors

#include "repotopics/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "repotopics/errors.hpp"

using nlohmann::json;

namespace repotopics::config {

namespace {

template <typename T>
void get_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

void parse_paths(const json& j, Paths& p) {
    get_if(j, "corpus", p.corpus);
    get_if(j, "mapping", p.mapping);
    get_if(j, "taxonomy", p.taxonomy);
    get_if(j, "vocabulary", p.vocabulary);
    get_if(j, "embeddings", p.embeddings);
    get_if(j, "model_linear", p.model_linear);
    get_if(j, "model_encoder", p.model_encoder);
    get_if(j, "policy", p.policy);
    get_if(j, "datasets_dir", p.datasets_dir);
    get_if(j, "predictions", p.predictions);
    get_if(j, "reports_dir", p.reports_dir);
}

void parse_backend_training(const json& j, BackendTraining& t) {
    get_if(j, "learning_rate", t.learning_rate);
    get_if(j, "epochs", t.epochs);
    get_if(j, "batch_size", t.batch_size);
}

}  // namespace

std::uint64_t RunConfig::require_seed() const {
    if (!seed.has_value())
        throw std::invalid_argument("no seed configured: set \"seed\" in the config or pass --seed");
    return *seed;
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::ostringstream text;
    text << in.rdbuf();
    return from_json_text(text.str(), path);
}

RunConfig RunConfig::from_json_text(const std::string& text, const std::string& origin) {
    json j = json::parse(text, nullptr, false);
    if (j.is_discarded()) throw std::invalid_argument("config is not valid JSON: " + origin);

    RunConfig cfg;
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    get_if(j, "threads", cfg.threads);
    if (cfg.threads < 1) throw std::invalid_argument("threads must be >= 1");

    if (j.contains("paths")) parse_paths(j.at("paths"), cfg.paths);

    if (j.contains("pipeline")) {
        const json& p = j.at("pipeline");
        get_if(p, "sample_target", cfg.pipeline.sample_target);
        if (p.contains("split")) {
            const auto split = p.at("split").get<std::vector<double>>();
            if (split.size() != 3)
                throw std::invalid_argument("pipeline.split must have three ratios");
            cfg.pipeline.train_ratio = split[0];
            cfg.pipeline.val_ratio = split[1];
            cfg.pipeline.test_ratio = split[2];
        }
    }

    if (j.contains("textprep")) {
        const json& t = j.at("textprep");
        get_if(t, "max_names", cfg.textprep.max_names);
        get_if(t, "hash_seed", cfg.textprep.hash_seed);
        get_if(t, "max_length", cfg.textprep.max_length);
        get_if(t, "vocab_size", cfg.textprep.vocab_size);
    }

    if (j.contains("training")) {
        const json& t = j.at("training");
        get_if(t, "backend", cfg.training.backend);
        get_if(t, "alpha", cfg.training.alpha);
        get_if(t, "gamma", cfg.training.gamma);
        get_if(t, "selection_k", cfg.training.selection_k);
        if (t.contains("linear")) parse_backend_training(t.at("linear"), cfg.training.linear);
        if (t.contains("encoder")) {
            const json& e = t.at("encoder");
            parse_backend_training(e, cfg.training.encoder_train);
            get_if(e, "dim", cfg.training.encoder.dim);
            get_if(e, "layers", cfg.training.encoder.layers);
            get_if(e, "heads", cfg.training.encoder.heads);
            get_if(e, "ffn", cfg.training.encoder.ffn);
        }
        if (cfg.training.backend != "linear" && cfg.training.backend != "encoder")
            throw std::invalid_argument("training.backend must be 'linear' or 'encoder'");
    }

    if (j.contains("thresholds")) {
        const json& t = j.at("thresholds");
        get_if(t, "kind", cfg.thresholds.kind);
        get_if(t, "k", cfg.thresholds.k);
        get_if(t, "global_step", cfg.thresholds.global_step);
        get_if(t, "class_step", cfg.thresholds.class_step);
        get_if(t, "init", cfg.thresholds.init);
        get_if(t, "max_sweeps", cfg.thresholds.max_sweeps);
        get_if(t, "tolerance", cfg.thresholds.tolerance);
        get_if(t, "lambda_class", cfg.thresholds.lambda_class);
        if (cfg.thresholds.kind != "none" && cfg.thresholds.kind != "global" &&
            cfg.thresholds.kind != "per_class")
            throw std::invalid_argument("thresholds.kind must be none, global, or per_class");
    }

    if (j.contains("evaluation")) {
        const json& e = j.at("evaluation");
        get_if(e, "k_list", cfg.evaluation.k_list);
        get_if(e, "similarity_thresholds", cfg.evaluation.similarity_thresholds);
        get_if(e, "min_support", cfg.evaluation.min_support);
        get_if(e, "top_confusion", cfg.evaluation.top_confusion);
        get_if(e, "dense_top_n", cfg.evaluation.dense_top_n);
    }

    if (j.contains("synth")) {
        const json& s = j.at("synth");
        get_if(s, "repos", cfg.synth.repos);
        get_if(s, "labels", cfg.synth.labels);
        get_if(s, "signal_strength", cfg.synth.signal_strength);
        get_if(s, "readme_less_fraction", cfg.synth.readme_less_fraction);
        get_if(s, "label_count_distribution", cfg.synth.label_count_distribution);
    }

    return cfg;
}

}  // namespace repotopics::config
