// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 repotopics contributors

#include "repotopics/commands.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "repotopics/corpus_io.hpp"
#include "repotopics/dataset.hpp"
#include "repotopics/errors.hpp"
#include "repotopics/evalkit.hpp"
#include "repotopics/semeval.hpp"
#include "repotopics/synth.hpp"
#include "repotopics/thresholds.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace repotopics::cli {

namespace {

void require_file(const std::string& path, const std::string& produced_by) {
    if (!fs::exists(path))
        throw DataError("missing artifact: " + path + " (produce it with '" + produced_by + "')");
}

void say(bool quiet, const std::string& line) {
    if (!quiet) std::cout << line << '\n';
}

std::string dataset_path(const config::RunConfig& cfg, const std::string& split) {
    if (split != "train" && split != "validation" && split != "test")
        throw std::invalid_argument("split must be train, validation, or test");
    return (fs::path(cfg.paths.datasets_dir) / (split + ".jsonl")).string();
}

struct Artifacts {
    textprep::Vocabulary vocab;
    std::vector<std::string> taxonomy;
};

Artifacts load_artifacts(const config::RunConfig& cfg) {
    require_file(cfg.paths.vocabulary, "repotopics prepare");
    require_file(cfg.paths.taxonomy, "repotopics synth or your taxonomy file");
    return Artifacts{textprep::Vocabulary::load(cfg.paths.vocabulary),
                     corpus_io::read_taxonomy(cfg.paths.taxonomy)};
}

// One loaded checkpoint of either backend.
struct AnyModel {
    models::BackendKind kind;
    std::optional<models::LinearModel> linear;
    std::optional<models::PairEncoderModel> encoder;

    const std::vector<std::string>& taxonomy() const {
        return kind == models::BackendKind::linear ? linear->taxonomy() : encoder->taxonomy();
    }
    std::uint64_t vocab_fingerprint() const {
        return kind == models::BackendKind::linear ? linear->vocab_fingerprint()
                                                   : encoder->vocab_fingerprint();
    }
    std::vector<double> score(const textprep::EncodedExample& ex) const {
        std::vector<double> z =
            kind == models::BackendKind::linear ? linear->logits(ex) : encoder->logits(ex);
        for (double& v : z) v = models::sigmoid(v);
        return z;
    }
};

AnyModel load_any(const std::string& path) {
    AnyModel out;
    out.kind = models::checkpoint_kind(path);
    if (out.kind == models::BackendKind::linear)
        out.linear = models::load_linear(path);
    else
        out.encoder = models::load_encoder(path);
    return out;
}

const std::string& model_path_for(const config::RunConfig& cfg, const std::string& backend) {
    if (backend == "linear") return cfg.paths.model_linear;
    if (backend == "encoder") return cfg.paths.model_encoder;
    throw std::invalid_argument("backend must be 'linear' or 'encoder'");
}

// Deterministic parallel scoring: results land in preallocated slots,
// so the thread count never changes any output byte.
std::vector<models::PredictionSet> predict_dataset(const AnyModel& model,
                                                   const std::vector<dataset::PreparedRecord>& recs,
                                                   const textprep::Vocabulary& vocab,
                                                   const std::vector<std::string>& taxonomy,
                                                   std::size_t max_length, bool blank_readme,
                                                   int threads) {
    if (model.vocab_fingerprint() != vocab.fingerprint())
        throw DataError("vocabulary does not match the checkpoint (re-run prepare/train)");
    if (model.taxonomy() != taxonomy)
        throw DataError("taxonomy does not match the checkpoint (re-run train)");
    std::vector<models::PredictionSet> out(recs.size());
    auto worker = [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            const auto ex =
                dataset::encode_record(recs[i], vocab, taxonomy, max_length, blank_readme);
            out[i] = models::PredictionSet{recs[i].url, model.score(ex)};
        }
    };
    const std::size_t n = recs.size();
    const std::size_t nthreads = std::max(1, threads);
    if (nthreads <= 1 || n < 2 * nthreads) {
        worker(0, n);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (n + nthreads - 1) / nthreads;
        for (std::size_t t = 0; t < nthreads; ++t) {
            const std::size_t begin = t * chunk;
            if (begin >= n) break;
            pool.emplace_back(worker, begin, std::min(n, begin + chunk));
        }
        for (auto& th : pool) th.join();
    }
    return out;
}

std::vector<std::vector<std::uint8_t>> truth_matrix(const std::vector<dataset::PreparedRecord>& recs,
                                                    const std::vector<std::string>& taxonomy) {
    std::vector<std::vector<std::uint8_t>> out;
    out.reserve(recs.size());
    for (const auto& rec : recs) out.push_back(dataset::label_vector(rec.labels, taxonomy));
    return out;
}

thresholds::ThresholdPolicy active_policy(const config::RunConfig& cfg,
                                          const std::vector<std::string>& taxonomy) {
    if (fs::exists(cfg.paths.policy)) {
        auto policy = thresholds::ThresholdPolicy::load(cfg.paths.policy);
        try {
            policy.validate(taxonomy);
        } catch (const std::invalid_argument& e) {
            throw DataError("invalid policy file " + cfg.paths.policy + ": " + e.what());
        }
        return policy;
    }
    thresholds::ThresholdPolicy p;
    p.kind = thresholds::PolicyKind::none;
    p.k = cfg.thresholds.k;
    return p;
}

models::TrainConfig train_config_for(const config::RunConfig& cfg, const std::string& backend) {
    const config::BackendTraining& bt =
        backend == "linear" ? cfg.training.linear : cfg.training.encoder_train;
    models::TrainConfig tc;
    tc.learning_rate = bt.learning_rate;
    tc.epochs = bt.epochs;
    tc.batch_size = bt.batch_size;
    tc.seed = cfg.require_seed();
    tc.loss = models::FocalLossParams{cfg.training.alpha, cfg.training.gamma};
    tc.selection_k = cfg.training.selection_k;
    return tc;
}

evalkit::EvalMatrix eval_matrix(const std::vector<models::PredictionSet>& preds,
                                const std::vector<std::vector<std::uint8_t>>& truth,
                                const std::vector<std::string>& taxonomy,
                                const thresholds::ThresholdPolicy& policy) {
    evalkit::EvalMatrix m;
    m.repos = preds.size();
    m.labels = taxonomy.size();
    m.truth.assign(m.repos * m.labels, 0);
    m.predicted.assign(m.repos * m.labels, 0);
    for (std::size_t i = 0; i < preds.size(); ++i) {
        for (std::size_t c = 0; c < m.labels; ++c) m.truth[i * m.labels + c] = truth[i][c];
        for (std::size_t c : thresholds::select_indices(preds[i].scores, taxonomy, policy))
            m.predicted[i * m.labels + c] = 1;
    }
    return m;
}

evalkit::EvalReport build_eval_report(const config::RunConfig& cfg,
                                      const std::vector<models::PredictionSet>& preds,
                                      const std::vector<std::vector<std::uint8_t>>& truth,
                                      const std::vector<std::string>& taxonomy,
                                      const thresholds::ThresholdPolicy& policy) {
    evalkit::EvalReport report;
    report.k_list = cfg.evaluation.k_list;
    for (std::size_t k : report.k_list)
        report.metrics.push_back(evalkit::micro_prf_at_k(preds, truth, taxonomy, policy, k));
    report.class_coverage = evalkit::class_coverage(eval_matrix(preds, truth, taxonomy, policy));
    report.unpredicted_fraction = 1.0 - report.class_coverage;
    report.error_budget =
        evalkit::sorted_by_missed(evalkit::error_budget(preds, truth, taxonomy, policy), 0);
    try {
        report.support_recall_pearson = evalkit::support_recall_correlation(report.error_budget);
    } catch (const std::exception&) {
        // fewer than three classes or constant recall: leave unset
    }
    try {
        std::vector<double> freqs;
        for (const auto& row : report.error_budget)
            freqs.push_back(static_cast<double>(row.support));
        report.power_law_exponent = evalkit::power_law_fit(freqs);
    } catch (const std::exception&) {
    }
    return report;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write: " + path);
    out << text;
}

}  // namespace

void write_predictions(const std::string& path, const std::vector<models::PredictionSet>& preds) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write predictions file: " + path);
    for (const auto& p : preds) {
        json j;
        j["url"] = p.repo;
        j["scores"] = p.scores;
        out << j.dump(-1, ' ', false, json::error_handler_t::replace) << '\n';
    }
}

std::vector<models::PredictionSet> read_predictions(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open predictions file: " + path);
    std::vector<models::PredictionSet> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j = json::parse(line, nullptr, false);
        if (j.is_discarded())
            throw DataError(path + ":" + std::to_string(line_no) + ": invalid JSON");
        out.push_back(models::PredictionSet{j.at("url").get<std::string>(),
                                            j.at("scores").get<std::vector<double>>()});
    }
    return out;
}

int run_ingest(const config::RunConfig& cfg, const std::string& source, const std::string& out_path,
               bool quiet) {
    (void)cfg;
    std::vector<corpus::RepositoryRecord> records;
    std::size_t failed = 0, total_lines = 0;
    if (fs::is_directory(source)) {
        records.push_back(corpus_io::record_from_directory(source));
        total_lines = 1;
    } else {
        require_file(source, "a corpus file or directory");
        std::ifstream in(source);
        if (!in) throw DataError("cannot open: " + source);
        corpus_io::ReadResult result = corpus_io::read_corpus_lenient(in);
        for (const auto& d : result.diagnostics)
            std::cerr << source << ":" << d.line_number << ": " << d.message << '\n';
        failed = result.diagnostics.size();
        total_lines = result.records.size() + failed;
        records = std::move(result.records);
    }
    if (!records.empty()) corpus_io::write_corpus(out_path, records);
    say(quiet, "ingested " + std::to_string(records.size()) + " records (" + std::to_string(failed) +
                   " rejected) -> " + out_path);
    if (records.empty() && total_lines > 0) throw DataError("all input lines failed validation");
    return 0;
}

int run_prepare(const config::RunConfig& cfg, bool quiet) {
    cfg.require_seed();
    require_file(cfg.paths.corpus, "repotopics ingest or synth");
    require_file(cfg.paths.mapping, "repotopics synth or your mapping file");
    require_file(cfg.paths.taxonomy, "repotopics synth or your taxonomy file");

    const auto records = corpus_io::read_corpus(cfg.paths.corpus);
    const auto mapping = corpus_io::read_mapping(cfg.paths.mapping, cfg.paths.taxonomy);
    const auto multi = mapping.multi_target_topics();
    if (!multi.empty()) {
        std::string listed;
        for (std::size_t i = 0; i < multi.size() && i < 8; ++i) listed += " " + multi[i];
        say(quiet, "note: " + std::to_string(multi.size()) +
                       " raw topics map to several curated topics:" + listed);
    }
    dataset::PrepareResult result =
        dataset::prepare(records, mapping, cfg.pipeline, cfg.textprep, cfg.require_seed());

    fs::create_directories(cfg.paths.datasets_dir);
    dataset::write_dataset((fs::path(cfg.paths.datasets_dir) / "train.jsonl").string(),
                           result.train);
    dataset::write_dataset((fs::path(cfg.paths.datasets_dir) / "validation.jsonl").string(),
                           result.validation);
    dataset::write_dataset((fs::path(cfg.paths.datasets_dir) / "test.jsonl").string(), result.test);
    result.vocab.save(cfg.paths.vocabulary);
    dataset::write_manifest((fs::path(cfg.paths.datasets_dir) / "manifest.json").string(),
                            result.manifest);

    std::string funnel;
    for (const auto& [stage, count] : result.manifest)
        funnel += stage + "=" + std::to_string(count) + " ";
    say(quiet, "prepared: " + funnel + "vocab=" + std::to_string(result.vocab.size()));
    return 0;
}

int run_train(const config::RunConfig& cfg, bool quiet) {
    cfg.require_seed();
    const std::string& backend = cfg.training.backend;
    const Artifacts art = load_artifacts(cfg);
    require_file(dataset_path(cfg, "train"), "repotopics prepare");
    require_file(dataset_path(cfg, "validation"), "repotopics prepare");

    const auto train_recs = dataset::read_dataset(dataset_path(cfg, "train"));
    const auto val_recs = dataset::read_dataset(dataset_path(cfg, "validation"));
    const auto train_ex = dataset::encode_dataset(train_recs, art.vocab, art.taxonomy,
                                                  cfg.textprep.max_length);
    const auto val_ex =
        dataset::encode_dataset(val_recs, art.vocab, art.taxonomy, cfg.textprep.max_length);

    const models::TrainConfig tc = train_config_for(cfg, backend);
    models::TrainTrace trace;
    const std::string& out_path = model_path_for(cfg, backend);
    if (backend == "linear") {
        models::LinearModel model = models::train_linear(train_ex, val_ex, tc, art.vocab.size(),
                                                         art.taxonomy, art.vocab.fingerprint(),
                                                         &trace);
        model.save(out_path);
    } else {
        models::EncoderDims dims;
        dims.dim = cfg.training.encoder.dim;
        dims.layers = cfg.training.encoder.layers;
        dims.heads = cfg.training.encoder.heads;
        dims.ffn = cfg.training.encoder.ffn;
        dims.max_positions = static_cast<int>(cfg.textprep.max_length);
        models::PairEncoderModel model =
            models::train_pair_encoder(train_ex, val_ex, tc, dims, art.vocab.size(), art.taxonomy,
                                       art.vocab.fingerprint(), &trace);
        model.save(out_path);
    }
    for (std::size_t e = 0; e < trace.epoch_loss.size(); ++e) {
        char line[128];
        std::snprintf(line, sizeof(line), "epoch %zu: loss %.6f val-f1@%zu %.4f", e + 1,
                      trace.epoch_loss[e], tc.selection_k, trace.epoch_val_metric[e]);
        say(quiet, line);
    }
    say(quiet, "best epoch " + std::to_string(trace.best_epoch + 1) + " -> " + out_path);
    return 0;
}

int run_tune(const config::RunConfig& cfg, bool quiet) {
    const Artifacts art = load_artifacts(cfg);
    const std::string& model_path = model_path_for(cfg, cfg.training.backend);
    require_file(model_path, "repotopics train");
    require_file(dataset_path(cfg, "validation"), "repotopics prepare");

    const AnyModel model = load_any(model_path);
    const auto val_recs = dataset::read_dataset(dataset_path(cfg, "validation"));
    const auto preds = predict_dataset(model, val_recs, art.vocab, art.taxonomy,
                                       cfg.textprep.max_length, false, cfg.threads);
    const auto truth = truth_matrix(val_recs, art.taxonomy);

    thresholds::ThresholdPolicy policy;
    policy.k = cfg.thresholds.k;
    if (cfg.thresholds.kind == "global") {
        policy.kind = thresholds::PolicyKind::global;
        policy.tau = thresholds::tune_global(preds, truth, art.taxonomy, cfg.thresholds.k,
                                             cfg.thresholds.global_step);
        say(quiet, "tuned global tau = " + std::to_string(policy.tau));
    } else if (cfg.thresholds.kind == "per_class") {
        policy.kind = thresholds::PolicyKind::per_class;
        thresholds::TuneObjective objective{cfg.thresholds.lambda_class, cfg.thresholds.k};
        const auto result = thresholds::tune_per_class(preds, truth, art.taxonomy, objective,
                                                       cfg.thresholds.init, cfg.thresholds.class_step,
                                                       cfg.thresholds.max_sweeps,
                                                       cfg.thresholds.tolerance);
        policy.tau_by_class = result.tau_by_class;
        std::string traj;
        for (double l : result.objective_trajectory) traj += std::to_string(l) + " ";
        say(quiet, "objective trajectory: " + traj);
    } else {
        policy.kind = thresholds::PolicyKind::none;
        say(quiet, "policy kind none: nothing to tune");
    }
    policy.validate(art.taxonomy);
    policy.save(cfg.paths.policy);
    say(quiet, "wrote " + cfg.paths.policy);
    return 0;
}

int run_predict(const config::RunConfig& cfg, const std::string& split, bool quiet) {
    const Artifacts art = load_artifacts(cfg);
    const std::string& model_path = model_path_for(cfg, cfg.training.backend);
    require_file(model_path, "repotopics train");
    require_file(dataset_path(cfg, split), "repotopics prepare");

    const AnyModel model = load_any(model_path);
    const auto recs = dataset::read_dataset(dataset_path(cfg, split));
    const auto preds = predict_dataset(model, recs, art.vocab, art.taxonomy,
                                       cfg.textprep.max_length, false, cfg.threads);
    write_predictions(cfg.paths.predictions, preds);
    say(quiet, "wrote " + std::to_string(preds.size()) + " prediction rows -> " +
                   cfg.paths.predictions);
    return 0;
}

int run_evaluate(const config::RunConfig& cfg, const std::string& split, bool quiet) {
    const std::vector<std::string> taxonomy = corpus_io::read_taxonomy(cfg.paths.taxonomy);
    require_file(cfg.paths.predictions, "repotopics predict");
    require_file(dataset_path(cfg, split), "repotopics prepare");

    const auto preds = read_predictions(cfg.paths.predictions);
    const auto recs = dataset::read_dataset(dataset_path(cfg, split));
    if (preds.size() != recs.size())
        throw DataError("predictions and dataset differ in size; re-run predict on this split");
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (preds[i].repo != recs[i].url)
            throw DataError("prediction row " + std::to_string(i + 1) +
                            " does not match the dataset order; re-run predict");
        if (preds[i].scores.size() != taxonomy.size())
            throw DataError("prediction row " + std::to_string(i + 1) +
                            " has the wrong score-vector width");
    }
    const auto truth = truth_matrix(recs, taxonomy);
    const thresholds::ThresholdPolicy policy = active_policy(cfg, taxonomy);

    const evalkit::EvalReport report = build_eval_report(cfg, preds, truth, taxonomy, policy);
    fs::create_directories(cfg.paths.reports_dir);
    write_text_file((fs::path(cfg.paths.reports_dir) / "eval.json").string(),
                    evalkit::report_to_json(report));
    write_text_file((fs::path(cfg.paths.reports_dir) / "eval.txt").string(),
                    evalkit::report_to_table(report));
    say(quiet, evalkit::report_to_table(report));
    return 0;
}

namespace {

json prf_json(const Prf& p) {
    return {{"precision", p.precision}, {"recall", p.recall}, {"f1", p.f1}};
}

// Everything the error analysis produces for one backend.
json backend_report(const config::RunConfig& cfg, const AnyModel& model,
                    const std::vector<dataset::PreparedRecord>& recs,
                    const textprep::Vocabulary& vocab, const std::vector<std::string>& taxonomy,
                    const thresholds::ThresholdPolicy& policy,
                    const semeval::SimilarityMatrix& sim, std::string* table_out,
                    std::vector<std::string>* csv_confusion, std::vector<std::string>* csv_budget) {
    const auto truth = truth_matrix(recs, taxonomy);
    const auto preds = predict_dataset(model, recs, vocab, taxonomy, cfg.textprep.max_length, false,
                                       cfg.threads);
    const auto preds_blank = predict_dataset(model, recs, vocab, taxonomy, cfg.textprep.max_length,
                                             true, cfg.threads);

    json out;
    evalkit::EvalReport base = build_eval_report(cfg, preds, truth, taxonomy, policy);
    json metrics = json::object();
    for (std::size_t i = 0; i < base.k_list.size(); ++i)
        metrics[std::to_string(base.k_list[i])] = prf_json(base.metrics[i]);
    out["metrics_at_k"] = metrics;
    out["class_coverage"] = base.class_coverage;
    out["unpredicted_fraction"] = base.unpredicted_fraction;

    // Error budget and the correlation of recall with (log) support.
    const auto budget = evalkit::error_budget(preds, truth, taxonomy, policy);
    const auto ranked = evalkit::sorted_by_missed(budget, 0);
    json budget_top = json::array();
    for (std::size_t i = 0; i < ranked.size() && i < 30; ++i) {
        budget_top.push_back({{"label", ranked[i].label},
                              {"support", ranked[i].support},
                              {"recall_at_5", ranked[i].recall_at_5},
                              {"missed", static_cast<long long>(std::llround(ranked[i].missed))}});
    }
    out["error_budget_top"] = budget_top;
    try {
        out["support_recall_pearson"] = evalkit::support_recall_correlation(budget);
    } catch (const std::exception&) {
        out["support_recall_pearson"] = nullptr;
    }

    // Confusion structure and its relation to label similarity.
    const std::size_t top_c = std::min<std::size_t>(cfg.evaluation.top_confusion, taxonomy.size());
    const auto confusion = evalkit::confusion_counts(preds, truth, taxonomy, policy, top_c);
    try {
        const auto corr = semeval::similarity_confusion_correlation(confusion, sim);
        out["similarity_confusion"] = {{"pearson", corr.pearson}, {"spearman", corr.spearman}};
    } catch (const std::exception&) {
        out["similarity_confusion"] = nullptr;
    }
    try {
        const std::size_t top_n = std::min<std::size_t>(cfg.evaluation.dense_top_n, ranked.size());
        const auto dense = semeval::dense_region_score(budget, sim, top_n);
        out["dense_region"] = {{"top_mean", dense.top_mean},
                               {"global_mean", dense.global_mean},
                               {"top_n", top_n}};
    } catch (const std::exception&) {
        out["dense_region"] = nullptr;
    }

    // Synonym-aware relaxed evaluation across the configured thresholds.
    json relaxed = json::array();
    const Prf strict5 = evalkit::micro_prf_at_k(preds, truth, taxonomy, policy, 5);
    for (double threshold : cfg.evaluation.similarity_thresholds) {
        semeval::SemEvalConfig sc;
        sc.similarity_threshold = threshold;
        sc.k = 5;
        const auto rm = semeval::relaxed_metrics(preds, truth, taxonomy, policy, sim, sc);
        relaxed.push_back({{"threshold", threshold},
                           {"precision", rm.prf.precision},
                           {"recall", rm.prf.recall},
                           {"f1", rm.prf.f1},
                           {"strict_f1", strict5.f1},
                           {"corrections", rm.corrections},
                           {"corrections_any_overlap", rm.corrections_any_overlap}});
    }
    out["relaxed"] = relaxed;

    // README ablation: same checkpoint, README blanked at inference,
    // plus the natural README-less / README-present subsets.
    auto subset_metrics = [&](const std::vector<models::PredictionSet>& p,
                              const std::vector<std::vector<std::uint8_t>>& t) {
        json m;
        m["f1_at_1"] = evalkit::micro_prf_at_k(p, t, taxonomy, policy, 1).f1;
        m["f1_at_5"] = evalkit::micro_prf_at_k(p, t, taxonomy, policy, 5).f1;
        m["count"] = p.size();
        return m;
    };
    json ablation;
    ablation["full"] = subset_metrics(preds, truth);
    ablation["readme_blanked"] = subset_metrics(preds_blank, truth);
    std::vector<models::PredictionSet> less_p, present_p;
    std::vector<std::vector<std::uint8_t>> less_t, present_t;
    for (std::size_t i = 0; i < recs.size(); ++i) {
        if (recs[i].seg_b.empty()) {
            less_p.push_back(preds[i]);
            less_t.push_back(truth[i]);
        } else {
            present_p.push_back(preds[i]);
            present_t.push_back(truth[i]);
        }
    }
    ablation["readme_less_subset"] =
        less_p.empty() ? json(nullptr) : subset_metrics(less_p, less_t);
    ablation["readme_present_subset"] =
        present_p.empty() ? json(nullptr) : subset_metrics(present_p, present_t);
    out["ablation"] = ablation;

    // Human-readable and CSV side outputs.
    if (table_out != nullptr) {
        evalkit::EvalReport printable = base;
        printable.error_budget = evalkit::sorted_by_missed(budget, cfg.evaluation.min_support);
        try {
            printable.support_recall_pearson = evalkit::support_recall_correlation(budget);
        } catch (const std::exception&) {
        }
        *table_out = evalkit::report_to_table(printable);
    }
    if (csv_confusion != nullptr) {
        std::string header = "label";
        for (const auto& l : confusion.labels) header += "," + l;
        csv_confusion->push_back(header);
        for (std::size_t gi = 0; gi < confusion.labels.size(); ++gi) {
            std::string row = confusion.labels[gi];
            for (std::size_t pi = 0; pi < confusion.labels.size(); ++pi) {
                char cell[32];
                std::snprintf(cell, sizeof(cell), ",%.6f", confusion.at(gi, pi));
                row += cell;
            }
            csv_confusion->push_back(row);
        }
    }
    if (csv_budget != nullptr) {
        csv_budget->push_back("label,support,recall_at_5,missed");
        for (const auto& row : ranked) {
            char line[160];
            std::snprintf(line, sizeof(line), "%s,%zu,%.3f,%lld", row.label.c_str(), row.support,
                          row.recall_at_5, static_cast<long long>(std::llround(row.missed)));
            csv_budget->push_back(line);
        }
    }
    return out;
}

}  // namespace

int run_report(const config::RunConfig& cfg, bool quiet) {
    const Artifacts art = load_artifacts(cfg);
    require_file(dataset_path(cfg, "test"), "repotopics prepare");
    const auto recs = dataset::read_dataset(dataset_path(cfg, "test"));
    const auto truth = truth_matrix(recs, art.taxonomy);
    const thresholds::ThresholdPolicy policy = active_policy(cfg, art.taxonomy);

    semeval::LabelEmbeddings emb;
    if (!cfg.paths.embeddings.empty()) {
        require_file(cfg.paths.embeddings, "your embedding file");
        emb = semeval::LabelEmbeddings::load(cfg.paths.embeddings);
    } else {
        emb = semeval::trigram_embeddings(art.taxonomy);
    }
    const auto sim = semeval::similarity_matrix(emb, art.taxonomy);

    json report;
    report["policy"] = {{"kind", fs::exists(cfg.paths.policy) ? "file" : "none"},
                        {"k", policy.k}};

    // Long-tail diagnostic over the test split's truth frequencies.
    std::vector<double> freqs;
    {
        std::vector<std::size_t> support(art.taxonomy.size(), 0);
        for (const auto& row : truth) {
            for (std::size_t c = 0; c < row.size(); ++c) support[c] += row[c] != 0 ? 1 : 0;
        }
        for (std::size_t s : support) {
            if (s > 0) freqs.push_back(static_cast<double>(s));
        }
    }
    try {
        report["power_law_exponent"] = evalkit::power_law_fit(freqs);
    } catch (const std::exception&) {
        report["power_law_exponent"] = nullptr;
    }

    fs::create_directories(cfg.paths.reports_dir);
    json backends = json::object();
    std::string tables;
    bool any_model = false;
    for (const std::string backend : {"linear", "encoder"}) {
        const std::string& path = model_path_for(cfg, backend);
        if (!fs::exists(path)) continue;
        any_model = true;
        const AnyModel model = load_any(path);
        std::string table;
        std::vector<std::string> csv_confusion, csv_budget;
        backends[backend] = backend_report(cfg, model, recs, art.vocab, art.taxonomy, policy, sim,
                                           &table, &csv_confusion, &csv_budget);
        tables += "== " + backend + " ==\n" + table + "\n";
        std::string confusion_text, budget_text;
        for (const auto& line : csv_confusion) confusion_text += line + "\n";
        for (const auto& line : csv_budget) budget_text += line + "\n";
        write_text_file(
            (fs::path(cfg.paths.reports_dir) / ("confusion_" + backend + ".csv")).string(),
            confusion_text);
        write_text_file(
            (fs::path(cfg.paths.reports_dir) / ("error_budget_" + backend + ".csv")).string(),
            budget_text);
    }
    if (!any_model)
        throw DataError("missing artifact: no model checkpoint found (produce one with "
                        "'repotopics train')");
    report["backends"] = backends;

    write_text_file((fs::path(cfg.paths.reports_dir) / "report.json").string(), report.dump(2));
    write_text_file((fs::path(cfg.paths.reports_dir) / "report.txt").string(), tables);
    say(quiet, tables);
    say(quiet, "wrote " + (fs::path(cfg.paths.reports_dir) / "report.json").string());
    return 0;
}

int run_synth(const config::RunConfig& cfg, bool quiet) {
    synth::SyntheticSpec spec;
    spec.repos = cfg.synth.repos;
    spec.labels = cfg.synth.labels;
    spec.signal_strength = cfg.synth.signal_strength;
    spec.readme_less_fraction = cfg.synth.readme_less_fraction;
    spec.label_count_distribution = cfg.synth.label_count_distribution;
    spec.seed = cfg.require_seed();

    const synth::SyntheticCorpus corpus = synth::generate(spec);
    corpus_io::write_corpus(cfg.paths.corpus, corpus.records);
    corpus_io::write_mapping(cfg.paths.mapping, corpus.mapping);
    corpus_io::write_taxonomy(cfg.paths.taxonomy, corpus.mapping.taxonomy);
    say(quiet, "wrote " + std::to_string(corpus.records.size()) + " synthetic records -> " +
                   cfg.paths.corpus);
    return 0;
}

}  // namespace repotopics::cli
