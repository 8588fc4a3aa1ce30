// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 repotopics contributors

#include "repotopics/semeval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <stdexcept>

#include "repotopics/errors.hpp"
#include "repotopics/kernels.hpp"

namespace repotopics::semeval {

void LabelEmbeddings::validate(const std::vector<std::string>& taxonomy) const {
    std::size_t dim = 0;
    for (const auto& label : taxonomy) {
        auto it = vectors.find(label);
        if (it == vectors.end())
            throw std::invalid_argument("embedding missing for label: " + label);
        if (dim == 0) dim = it->second.size();
        if (it->second.size() != dim)
            throw std::invalid_argument("embedding dimension mismatch for label: " + label);
        const double sq = kernels::dot(it->second.data(), it->second.data(), it->second.size());
        if (!(sq > 0.0)) throw std::invalid_argument("zero embedding vector for label: " + label);
    }
}

LabelEmbeddings LabelEmbeddings::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open embedding file: " + path);
    LabelEmbeddings emb;
    std::string line;
    std::size_t line_no = 0, dim = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos || tab == 0)
            throw DataError(path + ":" + std::to_string(line_no) + ": expected label<TAB>floats");
        std::istringstream values(line.substr(tab + 1));
        std::vector<double> v;
        double x;
        while (values >> x) v.push_back(x);
        if (v.empty())
            throw DataError(path + ":" + std::to_string(line_no) + ": no embedding values");
        if (dim == 0) dim = v.size();
        if (v.size() != dim)
            throw DataError(path + ":" + std::to_string(line_no) + ": dimension mismatch");
        emb.vectors[line.substr(0, tab)] = std::move(v);
    }
    return emb;
}

void LabelEmbeddings::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write embedding file: " + path);
    out.precision(17);
    for (const auto& [label, v] : vectors) {
        out << label << '\t';
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i > 0) out << ' ';
            out << v[i];
        }
        out << '\n';
    }
}

LabelEmbeddings trigram_embeddings(const std::vector<std::string>& taxonomy) {
    auto grams = [](const std::string& s) {
        std::vector<std::string> out;
        if (s.size() < 3) {
            out.push_back(s);
        } else {
            for (std::size_t i = 0; i + 3 <= s.size(); ++i) out.push_back(s.substr(i, 3));
        }
        return out;
    };
    std::set<std::string> space;
    for (const auto& label : taxonomy) {
        for (auto& g : grams(label)) space.insert(g);
    }
    std::map<std::string, std::size_t> index;
    std::size_t at = 0;
    for (const auto& g : space) index[g] = at++;

    LabelEmbeddings emb;
    for (const auto& label : taxonomy) {
        std::vector<double> v(space.size(), 0.0);
        for (auto& g : grams(label)) v[index[g]] += 1.0;
        const double norm = std::sqrt(kernels::dot(v.data(), v.data(), v.size()));
        kernels::scale(v.data(), 1.0 / norm, v.size());
        emb.vectors[label] = std::move(v);
    }
    return emb;
}

SimilarityMatrix similarity_matrix(const LabelEmbeddings& emb,
                                   const std::vector<std::string>& taxonomy) {
    emb.validate(taxonomy);
    SimilarityMatrix sim;
    sim.labels = taxonomy;
    const std::size_t C = taxonomy.size();
    sim.cells.assign(C * C, 0.0);

    std::vector<const std::vector<double>*> vecs(C);
    std::vector<double> norms(C);
    for (std::size_t a = 0; a < C; ++a) {
        vecs[a] = &emb.vectors.at(taxonomy[a]);
        norms[a] = std::sqrt(kernels::dot(vecs[a]->data(), vecs[a]->data(), vecs[a]->size()));
    }
    for (std::size_t a = 0; a < C; ++a) {
        sim.cells[a * C + a] = 1.0;
        for (std::size_t b = a + 1; b < C; ++b) {
            const double cs = kernels::dot(vecs[a]->data(), vecs[b]->data(), vecs[a]->size()) /
                              (norms[a] * norms[b]);
            sim.cells[a * C + b] = cs;
            sim.cells[b * C + a] = cs;
        }
    }
    return sim;
}

void SemEvalConfig::validate() const {
    if (k == 0) throw std::invalid_argument("k must be >= 1");
}

namespace {

struct Pair {
    double similarity;
    std::size_t sel;    // index into the unmatched-selected list
    std::size_t tru;    // index into the unmatched-truth list
    std::size_t sel_c;  // taxonomy indices, for deterministic tie-breaks
    std::size_t tru_c;
};

std::size_t greedy_matching(const std::vector<Pair>& pairs, std::size_t n_sel, std::size_t n_tru) {
    std::vector<char> sel_used(n_sel, 0), tru_used(n_tru, 0);
    std::size_t accepted = 0;
    for (const Pair& p : pairs) {
        if (sel_used[p.sel] || tru_used[p.tru]) continue;
        sel_used[p.sel] = 1;
        tru_used[p.tru] = 1;
        ++accepted;
    }
    return accepted;
}

std::size_t exhaustive_matching(const std::vector<Pair>& pairs, std::size_t n_sel,
                                std::size_t n_tru) {
    if (n_sel > 10 || n_tru > 10)
        throw std::invalid_argument("exhaustive matching is limited to 10 labels per side");
    // Max-cardinality bipartite matching by augmenting paths.
    std::vector<std::vector<std::size_t>> adj(n_sel);
    for (const Pair& p : pairs) adj[p.sel].push_back(p.tru);
    std::vector<int> match_of_truth(n_tru, -1);
    std::size_t matched = 0;
    for (std::size_t s = 0; s < n_sel; ++s) {
        std::vector<char> visited(n_tru, 0);
        std::function<bool(std::size_t)> try_match = [&](std::size_t u) -> bool {
            for (std::size_t t : adj[u]) {
                if (visited[t]) continue;
                visited[t] = 1;
                if (match_of_truth[t] < 0 ||
                    try_match(static_cast<std::size_t>(match_of_truth[t]))) {
                    match_of_truth[t] = static_cast<int>(u);
                    return true;
                }
            }
            return false;
        };
        if (try_match(s)) ++matched;
    }
    return matched;
}

}  // namespace

RelaxedMetrics relaxed_metrics(const std::vector<models::PredictionSet>& preds,
                               const std::vector<std::vector<std::uint8_t>>& truth,
                               const std::vector<std::string>& taxonomy,
                               const thresholds::ThresholdPolicy& policy,
                               const SimilarityMatrix& sim, const SemEvalConfig& cfg) {
    cfg.validate();
    if (preds.size() != truth.size()) throw std::invalid_argument("prediction/truth size mismatch");
    const std::size_t C = taxonomy.size();

    thresholds::ThresholdPolicy at_k = policy;
    at_k.k = cfg.k;

    RelaxedMetrics out;
    std::size_t tp = 0, predicted = 0, actual = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const auto selected = thresholds::select_indices(preds[i].scores, taxonomy, at_k);
        predicted += selected.size();
        for (std::uint8_t t : truth[i]) actual += t != 0 ? 1 : 0;

        // Exact matches first.
        std::vector<std::size_t> unmatched_sel;
        std::vector<char> truth_left(C, 0);
        for (std::size_t c = 0; c < C; ++c) truth_left[c] = truth[i][c];
        for (std::size_t c : selected) {
            if (truth[i][c] != 0) {
                ++tp;
                truth_left[c] = 0;
            } else {
                unmatched_sel.push_back(c);
            }
        }
        std::vector<std::size_t> unmatched_tru;
        for (std::size_t c = 0; c < C; ++c) {
            if (truth_left[c] != 0) unmatched_tru.push_back(c);
        }
        if (unmatched_sel.empty() || unmatched_tru.empty()) continue;

        std::vector<Pair> pairs;
        std::vector<char> sel_has_partner(unmatched_sel.size(), 0);
        for (std::size_t s = 0; s < unmatched_sel.size(); ++s) {
            for (std::size_t t = 0; t < unmatched_tru.size(); ++t) {
                const double cs = sim.at(unmatched_sel[s], unmatched_tru[t]);
                if (cs >= cfg.similarity_threshold) {
                    pairs.push_back({cs, s, t, unmatched_sel[s], unmatched_tru[t]});
                    sel_has_partner[s] = 1;
                }
            }
        }
        for (char h : sel_has_partner) out.corrections_any_overlap += h != 0 ? 1 : 0;
        if (pairs.empty()) continue;
        std::sort(pairs.begin(), pairs.end(), [&](const Pair& a, const Pair& b) {
            if (a.similarity != b.similarity) return a.similarity > b.similarity;
            if (taxonomy[a.sel_c] != taxonomy[b.sel_c]) return taxonomy[a.sel_c] < taxonomy[b.sel_c];
            return taxonomy[a.tru_c] < taxonomy[b.tru_c];
        });
        const std::size_t accepted =
            cfg.exhaustive_matching
                ? exhaustive_matching(pairs, unmatched_sel.size(), unmatched_tru.size())
                : greedy_matching(pairs, unmatched_sel.size(), unmatched_tru.size());
        out.corrections += accepted;
        tp += accepted;
    }
    out.prf = prf_from_counts(tp, predicted, actual);
    return out;
}

evalkit::Correlations similarity_confusion_correlation(const evalkit::ConfusionMatrix& confusions,
                                                       const SimilarityMatrix& sim) {
    // Map confusion labels onto the similarity matrix.
    std::vector<std::size_t> sim_index(confusions.labels.size());
    for (std::size_t i = 0; i < confusions.labels.size(); ++i) {
        auto it = std::find(sim.labels.begin(), sim.labels.end(), confusions.labels[i]);
        if (it == sim.labels.end())
            throw std::invalid_argument("confusion label missing from similarity matrix: " +
                                        confusions.labels[i]);
        sim_index[i] = static_cast<std::size_t>(it - sim.labels.begin());
    }
    std::vector<double> confusion_values, similarity_values;
    const std::size_t n = confusions.labels.size();
    for (std::size_t g = 0; g < n; ++g) {
        for (std::size_t p = 0; p < n; ++p) {
            if (g == p) continue;
            confusion_values.push_back(confusions.at(g, p));
            similarity_values.push_back(sim.at(sim_index[g], sim_index[p]));
        }
    }
    return evalkit::correlations(confusion_values, similarity_values);
}

DenseRegionScore dense_region_score(const std::vector<evalkit::ClassErrorRow>& error_table,
                                    const SimilarityMatrix& sim, std::size_t top_n) {
    if (top_n < 2) throw std::invalid_argument("top_n must be at least 2");
    const auto ranked = evalkit::sorted_by_missed(error_table, 0);
    if (ranked.size() < top_n) throw std::invalid_argument("top_n exceeds the error table size");

    std::vector<std::size_t> top;
    for (std::size_t i = 0; i < top_n; ++i) {
        auto it = std::find(sim.labels.begin(), sim.labels.end(), ranked[i].label);
        if (it == sim.labels.end())
            throw std::invalid_argument("error-table label missing from similarity matrix: " +
                                        ranked[i].label);
        top.push_back(static_cast<std::size_t>(it - sim.labels.begin()));
    }

    auto mean_pairwise = [&](const std::vector<std::size_t>& idx) {
        double total = 0.0;
        std::size_t count = 0;
        for (std::size_t a = 0; a < idx.size(); ++a) {
            for (std::size_t b = a + 1; b < idx.size(); ++b) {
                total += sim.at(idx[a], idx[b]);
                ++count;
            }
        }
        return count > 0 ? total / static_cast<double>(count) : 0.0;
    };

    std::vector<std::size_t> all(sim.labels.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;

    DenseRegionScore out;
    out.top_mean = mean_pairwise(top);
    out.global_mean = mean_pairwise(all);
    return out;
}

}  // namespace repotopics::semeval
