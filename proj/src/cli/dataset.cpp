// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 repotopics contributors

#include "repotopics/dataset.hpp"

#include <algorithm>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "repotopics/errors.hpp"

using nlohmann::json;

namespace repotopics::dataset {

PreparedRecord prepare_record(const corpus::LabeledRecord& rec,
                              const config::TextprepConfig& cfg) {
    PreparedRecord out;
    out.url = rec.record.url;
    out.labels.assign(rec.labels.begin(), rec.labels.end());

    // The repository name goes through the same splitting as file names.
    for (auto& tok : textprep::split_name_tokens(textprep::repo_name_from_url(rec.record.url)))
        out.seg_a.push_back(std::move(tok));
    textprep::SamplerConfig sampler{cfg.max_names, cfg.hash_seed};
    for (const auto& name : textprep::sample_tree_names(rec.record, sampler)) {
        for (auto& tok : textprep::split_name_tokens(name)) out.seg_a.push_back(std::move(tok));
    }
    if (rec.record.readme.has_value())
        out.seg_b = textprep::whitespace_tokens(textprep::clean_readme(*rec.record.readme));
    return out;
}

void write_dataset(const std::string& path, const std::vector<PreparedRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write dataset file: " + path);
    for (const auto& rec : records) {
        json j;
        j["url"] = rec.url;
        j["labels"] = rec.labels;
        j["seg_a"] = rec.seg_a;
        j["seg_b"] = rec.seg_b;
        // File-name tokens may carry non-UTF-8 bytes from real trees.
        out << j.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
    }
}

std::vector<PreparedRecord> read_dataset(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open dataset file: " + path);
    std::vector<PreparedRecord> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw DataError(path + ":" + std::to_string(line_no) + ": invalid JSON");
        try {
            PreparedRecord rec;
            rec.url = j.at("url").get<std::string>();
            rec.labels = j.at("labels").get<std::vector<std::string>>();
            rec.seg_a = j.at("seg_a").get<std::vector<std::string>>();
            rec.seg_b = j.at("seg_b").get<std::vector<std::string>>();
            out.push_back(std::move(rec));
        } catch (const json::exception& e) {
            throw DataError(path + ":" + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

std::vector<std::uint8_t> label_vector(const std::vector<std::string>& labels,
                                       const std::vector<std::string>& taxonomy) {
    std::vector<std::uint8_t> out(taxonomy.size(), 0);
    for (const auto& label : labels) {
        const auto it = std::find(taxonomy.begin(), taxonomy.end(), label);
        if (it == taxonomy.end()) throw DataError("label not in taxonomy: " + label);
        out[static_cast<std::size_t>(it - taxonomy.begin())] = 1;
    }
    return out;
}

textprep::EncodedExample encode_record(const PreparedRecord& rec, const textprep::Vocabulary& vocab,
                                       const std::vector<std::string>& taxonomy,
                                       std::size_t max_length, bool blank_readme) {
    static const std::vector<std::string> kEmpty;
    textprep::EncodedExample ex =
        textprep::encode_pair(rec.seg_a, blank_readme ? kEmpty : rec.seg_b, vocab, max_length);
    ex.labels = label_vector(rec.labels, taxonomy);
    return ex;
}

std::vector<textprep::EncodedExample> encode_dataset(const std::vector<PreparedRecord>& records,
                                                     const textprep::Vocabulary& vocab,
                                                     const std::vector<std::string>& taxonomy,
                                                     std::size_t max_length, bool blank_readme) {
    std::vector<textprep::EncodedExample> out;
    out.reserve(records.size());
    for (const auto& rec : records)
        out.push_back(encode_record(rec, vocab, taxonomy, max_length, blank_readme));
    return out;
}

PrepareResult prepare(const std::vector<corpus::RepositoryRecord>& records,
                      const corpus::TopicMapping& mapping, const config::PipelineConfig& pipeline,
                      const config::TextprepConfig& textprep_cfg, std::uint64_t seed) {
    mapping.validate();

    PrepareResult result;
    result.manifest.emplace_back("corpus_records", records.size());

    std::vector<corpus::LabeledRecord> labeled;
    for (const auto& rec : records) {
        if (auto lr = corpus::remap_topics(rec, mapping)) labeled.push_back(std::move(*lr));
    }
    result.manifest.emplace_back("labeled", labeled.size());
    if (labeled.empty()) throw DataError("no labeled records after topic remapping");

    if (pipeline.sample_target > 0) {
        labeled = corpus::inverse_frequency_sample(labeled, pipeline.sample_target, seed);
    }
    result.manifest.emplace_back("sampled", labeled.size());

    labeled = corpus::deduplicate(labeled);
    result.manifest.emplace_back("deduplicated", labeled.size());
    if (labeled.empty()) throw DataError("no records left after deduplication");

    corpus::SplitSpec spec;
    spec.train_ratio = pipeline.train_ratio;
    spec.val_ratio = pipeline.val_ratio;
    spec.test_ratio = pipeline.test_ratio;
    spec.seed = seed;
    corpus::SplitResult split = corpus::split(labeled, spec);
    result.manifest.emplace_back("train", split.train.size());
    result.manifest.emplace_back("validation", split.validation.size());
    result.manifest.emplace_back("test", split.test.size());

    auto prep_all = [&](const std::vector<corpus::LabeledRecord>& in) {
        std::vector<PreparedRecord> out;
        out.reserve(in.size());
        for (const auto& rec : in) out.push_back(prepare_record(rec, textprep_cfg));
        return out;
    };
    result.train = prep_all(split.train);
    result.validation = prep_all(split.validation);
    result.test = prep_all(split.test);

    if (result.train.empty() || result.validation.empty() || result.test.empty())
        throw DataError("a split is empty; the corpus is too small for the configured ratios");

    std::vector<std::vector<std::string>> streams;
    streams.reserve(result.train.size());
    for (const auto& rec : result.train) {
        std::vector<std::string> stream = rec.seg_a;
        stream.insert(stream.end(), rec.seg_b.begin(), rec.seg_b.end());
        streams.push_back(std::move(stream));
    }
    result.vocab = textprep::Vocabulary::build(streams, textprep_cfg.vocab_size);
    return result;
}

void write_manifest(const std::string& path, const Manifest& manifest) {
    json stages = json::array();
    for (const auto& [stage, count] : manifest)
        stages.push_back({{"stage", stage}, {"count", count}});
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write manifest: " + path);
    out << json{{"stages", stages}}.dump(2) << '\n';
}

Manifest read_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open manifest: " + path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw DataError("corrupt manifest: " + path);
    Manifest out;
    for (const auto& stage : j.at("stages"))
        out.emplace_back(stage.at("stage").get<std::string>(), stage.at("count").get<std::size_t>());
    return out;
}

}  // namespace repotopics::dataset
