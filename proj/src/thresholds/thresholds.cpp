// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 repotopics contributors

#include "repotopics/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "repotopics/errors.hpp"
#include "repotopics/prf.hpp"
#include "repotopics/ranking.hpp"

using nlohmann::json;

namespace repotopics::thresholds {

void ThresholdPolicy::validate(const std::vector<std::string>& taxonomy) const {
    if (!(tau >= 0.0 && tau <= 1.0)) throw std::invalid_argument("tau must be in [0,1]");
    if (kind == PolicyKind::per_class) {
        for (const auto& label : taxonomy) {
            auto it = tau_by_class.find(label);
            if (it == tau_by_class.end())
                throw std::invalid_argument("per-class policy misses label: " + label);
            if (!(it->second >= 0.0 && it->second <= 1.0))
                throw std::invalid_argument("tau_c out of [0,1] for label: " + label);
        }
    }
}

namespace {

const char* kind_name(PolicyKind k) {
    switch (k) {
        case PolicyKind::none:
            return "none";
        case PolicyKind::global:
            return "global";
        case PolicyKind::per_class:
            return "per_class";
    }
    return "?";
}

PolicyKind kind_from_name(const std::string& name) {
    if (name == "none") return PolicyKind::none;
    if (name == "global") return PolicyKind::global;
    if (name == "per_class") return PolicyKind::per_class;
    throw DataError("unknown policy kind: " + name);
}

}  // namespace

void ThresholdPolicy::save(const std::string& path) const {
    json j;
    j["kind"] = kind_name(kind);
    j["k"] = k;
    j["tau"] = tau;
    j["tau_by_class"] = tau_by_class;
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write policy file: " + path);
    out << j.dump(2) << '\n';
}

ThresholdPolicy ThresholdPolicy::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open policy file: " + path);
    json j = json::parse(in, nullptr, false);
    if (j.is_discarded()) throw DataError("corrupt policy file: " + path);
    ThresholdPolicy p;
    p.kind = kind_from_name(j.at("kind").get<std::string>());
    p.k = j.at("k").get<std::size_t>();
    p.tau = j.value("tau", 0.0);
    if (j.contains("tau_by_class"))
        p.tau_by_class = j.at("tau_by_class").get<std::map<std::string, double>>();
    return p;
}

std::vector<std::size_t> select_indices(const std::vector<double>& scores,
                                        const std::vector<std::string>& taxonomy,
                                        const ThresholdPolicy& policy) {
    auto top = ranking::top_k_indices(scores, taxonomy, policy.k);
    if (policy.kind == PolicyKind::none) return top;
    std::vector<std::size_t> kept;
    kept.reserve(top.size());
    for (std::size_t c : top) {
        const double threshold =
            policy.kind == PolicyKind::global ? policy.tau : policy.tau_by_class.at(taxonomy[c]);
        if (scores[c] >= threshold) kept.push_back(c);
    }
    return kept;
}

std::vector<std::string> select(const models::PredictionSet& pred,
                                const std::vector<std::string>& taxonomy,
                                const ThresholdPolicy& policy) {
    if (pred.scores.size() != taxonomy.size())
        throw std::invalid_argument("prediction scores do not cover the taxonomy");
    std::vector<std::string> out;
    for (std::size_t c : select_indices(pred.scores, taxonomy, policy)) out.push_back(taxonomy[c]);
    return out;
}

std::vector<double> threshold_grid(double step) {
    if (!(step > 0.0 && step <= 1.0)) throw std::invalid_argument("grid step must be in (0,1]");
    std::vector<double> grid;
    for (int i = 0;; ++i) {
        // Snap to 9 decimals so i*step lands on the decimal grid point
        // (0.6, not 0.6000000000000001); the >= comparison in select is
        // inclusive at grid values.
        const double t = std::nearbyint(i * step * 1e9) / 1e9;
        if (t >= 1.0 - 1e-12) break;
        grid.push_back(t);
    }
    grid.push_back(1.0);
    return grid;
}

void TuneObjective::validate() const {
    if (!(lambda_class >= 0.0)) throw std::invalid_argument("lambda_class must be >= 0");
}

namespace {

// Per-repository top-k entry, the unit both tuners filter on.
struct Entry {
    double score;
    bool is_truth;
};

struct TopKView {
    std::vector<std::vector<Entry>> per_class;  // class -> entries appearing in a top-k
    std::size_t actual = 0;                     // total truth labels
    std::vector<char> truth_present;            // class had >= 1 truth instance
    std::size_t truth_present_count = 0;
};

TopKView build_topk_view(const std::vector<models::PredictionSet>& preds,
                         const std::vector<std::vector<std::uint8_t>>& truth,
                         const std::vector<std::string>& taxonomy, std::size_t k) {
    TopKView v;
    const std::size_t C = taxonomy.size();
    v.per_class.resize(C);
    v.truth_present.assign(C, 0);
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (preds[i].scores.size() != C || truth[i].size() != C)
            throw std::invalid_argument("prediction/truth width mismatch");
        for (std::size_t c = 0; c < C; ++c) {
            if (truth[i][c] != 0) {
                ++v.actual;
                v.truth_present[c] = 1;
            }
        }
        for (std::size_t c : ranking::top_k_indices(preds[i].scores, taxonomy, k))
            v.per_class[c].push_back({preds[i].scores[c], truth[i][c] != 0});
    }
    for (char t : v.truth_present) v.truth_present_count += t != 0 ? 1 : 0;
    return v;
}

}  // namespace

double tune_global(const std::vector<models::PredictionSet>& preds,
                   const std::vector<std::vector<std::uint8_t>>& truth,
                   const std::vector<std::string>& taxonomy, std::size_t k, double step) {
    if (preds.empty()) throw std::invalid_argument("empty validation set");
    if (preds.size() != truth.size()) throw std::invalid_argument("prediction/truth size mismatch");
    const TopKView view = build_topk_view(preds, truth, taxonomy, k);

    double best_tau = 0.0, best_f1 = -1.0;
    for (double tau : threshold_grid(step)) {
        std::size_t tp = 0, predicted = 0;
        for (const auto& entries : view.per_class) {
            for (const Entry& e : entries) {
                if (e.score >= tau) {
                    ++predicted;
                    tp += e.is_truth ? 1 : 0;
                }
            }
        }
        const double f1 = prf_from_counts(tp, predicted, view.actual).f1;
        if (f1 > best_f1) {
            best_f1 = f1;
            best_tau = tau;
        }
    }
    return best_tau;
}

PerClassTuneResult tune_per_class(const std::vector<models::PredictionSet>& preds,
                                  const std::vector<std::vector<std::uint8_t>>& truth,
                                  const std::vector<std::string>& taxonomy,
                                  const TuneObjective& objective, double init, double step,
                                  std::size_t max_sweeps, double tolerance) {
    objective.validate();
    if (!(init >= 0.0 && init <= 1.0)) throw std::invalid_argument("init must be in [0,1]");
    if (max_sweeps == 0) throw std::invalid_argument("max_sweeps must be positive");
    if (preds.empty()) throw std::invalid_argument("empty validation set");
    if (preds.size() != truth.size()) throw std::invalid_argument("prediction/truth size mismatch");

    const std::size_t C = taxonomy.size();
    const TopKView view = build_topk_view(preds, truth, taxonomy, objective.k);

    std::vector<double> tau(C, init);

    // Per-class kept counts under a candidate threshold.
    auto class_counts = [&](std::size_t c, double t, std::size_t& pred_c, std::size_t& tp_c) {
        pred_c = 0;
        tp_c = 0;
        for (const Entry& e : view.per_class[c]) {
            if (e.score >= t) {
                ++pred_c;
                tp_c += e.is_truth ? 1 : 0;
            }
        }
    };

    std::vector<std::size_t> pred_c(C, 0), tp_c(C, 0);
    std::size_t tp = 0, predicted = 0, covered = 0;
    for (std::size_t c = 0; c < C; ++c) {
        class_counts(c, tau[c], pred_c[c], tp_c[c]);
        tp += tp_c[c];
        predicted += pred_c[c];
        if (view.truth_present[c] != 0 && pred_c[c] > 0) ++covered;
    }

    auto objective_value = [&](std::size_t tp_all, std::size_t pred_all, std::size_t cov) {
        const double f1 = prf_from_counts(tp_all, pred_all, view.actual).f1;
        const double coverage = view.truth_present_count > 0
                                    ? static_cast<double>(cov) /
                                          static_cast<double>(view.truth_present_count)
                                    : 0.0;
        return f1 + objective.lambda_class * coverage;
    };

    PerClassTuneResult result;
    double current = objective_value(tp, predicted, covered);
    result.objective_trajectory.push_back(current);

    const std::vector<double> grid = threshold_grid(step);
    for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
        const double before = current;
        for (std::size_t c = 0; c < C; ++c) {
            // Candidates: the grid plus the incumbent, so an accepted
            // update can never lower the objective.
            double best_t = tau[c];
            double best_l = current;
            std::size_t best_pred = pred_c[c], best_tp = tp_c[c];
            auto consider = [&](double t) {
                std::size_t pc = 0, tc = 0;
                class_counts(c, t, pc, tc);
                std::size_t cov = covered;
                if (view.truth_present[c] != 0) {
                    if (pred_c[c] > 0 && pc == 0) --cov;
                    if (pred_c[c] == 0 && pc > 0) ++cov;
                }
                const double l = objective_value(tp - tp_c[c] + tc, predicted - pred_c[c] + pc, cov);
                if (l > best_l || (l == best_l && t < best_t)) {
                    best_l = l;
                    best_t = t;
                    best_pred = pc;
                    best_tp = tc;
                }
            };
            for (double t : grid) consider(t);
            if (best_t != tau[c]) {
                if (view.truth_present[c] != 0) {
                    if (pred_c[c] > 0 && best_pred == 0) --covered;
                    if (pred_c[c] == 0 && best_pred > 0) ++covered;
                }
                tp = tp - tp_c[c] + best_tp;
                predicted = predicted - pred_c[c] + best_pred;
                tp_c[c] = best_tp;
                pred_c[c] = best_pred;
                tau[c] = best_t;
            }
            current = best_l;
        }
        result.objective_trajectory.push_back(current);
        ++result.sweeps;
        if (current - before < tolerance) break;
    }

    for (std::size_t c = 0; c < C; ++c) result.tau_by_class[taxonomy[c]] = tau[c];
    return result;
}

}  // namespace repotopics::thresholds
