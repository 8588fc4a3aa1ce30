// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 repotopics contributors

#include "repotopics/evalkit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "repotopics/errors.hpp"

using nlohmann::json;

namespace repotopics::evalkit {

namespace {

void check_shapes(const std::vector<models::PredictionSet>& preds,
                  const std::vector<std::vector<std::uint8_t>>& truth,
                  const std::vector<std::string>& taxonomy) {
    if (preds.size() != truth.size()) throw std::invalid_argument("prediction/truth size mismatch");
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (preds[i].scores.size() != taxonomy.size() || truth[i].size() != taxonomy.size())
            throw std::invalid_argument("prediction/truth width mismatch");
    }
}

}  // namespace

Prf micro_prf_at_k(const std::vector<models::PredictionSet>& preds,
                   const std::vector<std::vector<std::uint8_t>>& truth,
                   const std::vector<std::string>& taxonomy,
                   const thresholds::ThresholdPolicy& policy, std::size_t k) {
    if (k == 0) throw std::invalid_argument("k must be >= 1");
    if (preds.empty()) throw std::invalid_argument("empty evaluation set");
    check_shapes(preds, truth, taxonomy);

    thresholds::ThresholdPolicy at_k = policy;
    at_k.k = k;
    std::size_t tp = 0, predicted = 0, actual = 0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const auto selected = thresholds::select_indices(preds[i].scores, taxonomy, at_k);
        predicted += selected.size();
        for (std::size_t c : selected) tp += truth[i][c] != 0 ? 1 : 0;
        for (std::uint8_t t : truth[i]) actual += t != 0 ? 1 : 0;
    }
    return prf_from_counts(tp, predicted, actual);
}

double class_coverage(const EvalMatrix& matrix) {
    std::size_t present = 0, covered = 0;
    for (std::size_t c = 0; c < matrix.labels; ++c) {
        bool has_truth = false, has_pred = false;
        for (std::size_t i = 0; i < matrix.repos; ++i) {
            has_truth = has_truth || matrix.y(i, c) != 0;
            has_pred = has_pred || matrix.yhat(i, c) != 0;
        }
        if (has_truth) {
            ++present;
            if (has_pred) ++covered;
        }
    }
    if (present == 0) throw std::invalid_argument("no class has a positive truth entry");
    return static_cast<double>(covered) / static_cast<double>(present);
}

std::vector<ClassErrorRow> error_budget(const std::vector<models::PredictionSet>& preds,
                                        const std::vector<std::vector<std::uint8_t>>& truth,
                                        const std::vector<std::string>& taxonomy,
                                        const thresholds::ThresholdPolicy& policy) {
    check_shapes(preds, truth, taxonomy);
    const std::size_t C = taxonomy.size();
    std::vector<std::size_t> support(C, 0), tp5(C, 0);

    thresholds::ThresholdPolicy at5 = policy;
    at5.k = 5;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        for (std::size_t c = 0; c < C; ++c) support[c] += truth[i][c] != 0 ? 1 : 0;
        for (std::size_t c : thresholds::select_indices(preds[i].scores, taxonomy, at5))
            tp5[c] += truth[i][c] != 0 ? 1 : 0;
    }

    std::vector<ClassErrorRow> table;
    for (std::size_t c = 0; c < C; ++c) {
        if (support[c] == 0) continue;
        ClassErrorRow row;
        row.label = taxonomy[c];
        row.support = support[c];
        row.recall_at_5 = static_cast<double>(tp5[c]) / static_cast<double>(support[c]);
        row.missed = missed_count(row.support, row.recall_at_5);
        table.push_back(std::move(row));
    }
    return table;
}

std::vector<ClassErrorRow> sorted_by_missed(std::vector<ClassErrorRow> table,
                                            std::size_t min_support) {
    table.erase(std::remove_if(table.begin(), table.end(),
                               [&](const ClassErrorRow& r) { return r.support < min_support; }),
                table.end());
    std::sort(table.begin(), table.end(), [](const ClassErrorRow& a, const ClassErrorRow& b) {
        if (a.missed != b.missed) return a.missed > b.missed;
        return a.label < b.label;
    });
    return table;
}

ConfusionMatrix confusion_counts(const std::vector<models::PredictionSet>& preds,
                                 const std::vector<std::vector<std::uint8_t>>& truth,
                                 const std::vector<std::string>& taxonomy,
                                 const thresholds::ThresholdPolicy& policy, std::size_t top_c) {
    check_shapes(preds, truth, taxonomy);
    const std::size_t C = taxonomy.size();
    if (top_c > C) throw std::invalid_argument("top_c exceeds the taxonomy size");

    std::vector<std::size_t> support(C, 0);
    for (const auto& row : truth) {
        for (std::size_t c = 0; c < C; ++c) support[c] += row[c] != 0 ? 1 : 0;
    }
    std::vector<std::size_t> order(C);
    for (std::size_t c = 0; c < C; ++c) order[c] = c;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (support[a] != support[b]) return support[a] > support[b];
        return taxonomy[a] < taxonomy[b];
    });
    order.resize(top_c);

    ConfusionMatrix out;
    std::vector<int> cell_index(C, -1);
    for (std::size_t r = 0; r < order.size(); ++r) {
        out.labels.push_back(taxonomy[order[r]]);
        cell_index[order[r]] = static_cast<int>(r);
    }
    std::vector<std::size_t> counts(top_c * top_c, 0);

    for (std::size_t i = 0; i < preds.size(); ++i) {
        const auto selected = thresholds::select_indices(preds[i].scores, taxonomy, policy);
        std::vector<char> is_selected(C, 0);
        for (std::size_t c : selected) is_selected[c] = 1;
        // The substitute is the top-ranked selected label that is not a
        // truth label; each missed truth label is attributed to it.
        int substitute = -1;
        for (std::size_t c : selected) {
            if (truth[i][c] == 0) {
                substitute = static_cast<int>(c);
                break;
            }
        }
        if (substitute < 0 || cell_index[static_cast<std::size_t>(substitute)] < 0) continue;
        const std::size_t p = static_cast<std::size_t>(cell_index[static_cast<std::size_t>(substitute)]);
        for (std::size_t c = 0; c < C; ++c) {
            if (truth[i][c] != 0 && !is_selected[c] && cell_index[c] >= 0)
                ++counts[static_cast<std::size_t>(cell_index[c]) * top_c + p];
        }
    }

    out.cells.assign(top_c * top_c, 0.0);
    for (std::size_t g = 0; g < top_c; ++g) {
        const std::size_t s = support[order[g]];
        if (s == 0) continue;
        for (std::size_t p = 0; p < top_c; ++p) {
            if (g == p) continue;  // diagonal removed after normalization
            out.cells[g * top_c + p] =
                static_cast<double>(counts[g * top_c + p]) / static_cast<double>(s);
        }
    }
    return out;
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> ranks(n, 0.0);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
        const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
        for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = avg;
        i = j + 1;
    }
    return ranks;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx <= 0.0 || syy <= 0.0) throw UndefinedResultError("degenerate variance in correlation");
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace

Correlations correlations(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("correlation inputs differ in length");
    if (x.size() < 3) throw std::invalid_argument("correlation needs at least 3 points");
    Correlations out;
    out.pearson = pearson(x, y);
    out.spearman = pearson(average_ranks(x), average_ranks(y));
    return out;
}

double support_recall_correlation(const std::vector<ClassErrorRow>& table) {
    std::vector<double> log_support, recall;
    for (const auto& row : table) {
        log_support.push_back(std::log(static_cast<double>(row.support)));
        recall.push_back(row.recall_at_5);
    }
    if (log_support.size() < 3) throw std::invalid_argument("correlation needs at least 3 points");
    return pearson(log_support, recall);
}

double power_law_fit(const std::vector<double>& topic_frequencies) {
    if (topic_frequencies.size() < 2)
        throw std::invalid_argument("power-law fit needs at least 2 ranks");
    std::vector<double> freq = topic_frequencies;
    for (double f : freq) {
        if (!(f > 0.0)) throw std::invalid_argument("power-law fit needs positive frequencies");
    }
    std::sort(freq.begin(), freq.end(), std::greater<>());

    const std::size_t n = freq.size();
    double mx = 0.0, my = 0.0;
    std::vector<double> xs(n), ys(n);
    for (std::size_t i = 0; i < n; ++i) {
        xs[i] = std::log(static_cast<double>(i + 1));
        ys[i] = std::log(freq[i]);
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    if (sxx <= 0.0) throw std::invalid_argument("power-law fit needs at least 2 distinct ranks");
    return sxy / sxx;
}

std::string report_to_json(const EvalReport& report) {
    json j;
    json metrics = json::object();
    for (std::size_t i = 0; i < report.k_list.size(); ++i) {
        metrics[std::to_string(report.k_list[i])] = {{"precision", report.metrics[i].precision},
                                                     {"recall", report.metrics[i].recall},
                                                     {"f1", report.metrics[i].f1}};
    }
    j["metrics_at_k"] = metrics;
    j["class_coverage"] = report.class_coverage;
    j["unpredicted_fraction"] = report.unpredicted_fraction;
    json budget = json::array();
    for (const auto& row : report.error_budget) {
        budget.push_back({{"label", row.label},
                          {"support", row.support},
                          {"recall_at_5", row.recall_at_5},
                          {"missed", row.missed},
                          {"missed_rounded", static_cast<long long>(std::llround(row.missed))}});
    }
    j["error_budget"] = budget;
    if (report.support_recall_pearson.has_value())
        j["support_recall_pearson"] = *report.support_recall_pearson;
    if (report.power_law_exponent.has_value())
        j["power_law_exponent"] = *report.power_law_exponent;
    return j.dump(2);
}

std::string report_to_table(const EvalReport& report) {
    std::ostringstream out;
    out << "k   precision recall    f1\n";
    char line[128];
    for (std::size_t i = 0; i < report.k_list.size(); ++i) {
        std::snprintf(line, sizeof(line), "%-3zu %9.3f %9.3f %9.3f\n", report.k_list[i],
                      report.metrics[i].precision, report.metrics[i].recall, report.metrics[i].f1);
        out << line;
    }
    std::snprintf(line, sizeof(line), "class coverage       %9.3f\n", report.class_coverage);
    out << line;
    std::snprintf(line, sizeof(line), "unpredicted fraction %9.3f\n", report.unpredicted_fraction);
    out << line;
    if (report.support_recall_pearson.has_value()) {
        std::snprintf(line, sizeof(line), "log-support/recall@5 pearson %6.3f\n",
                      *report.support_recall_pearson);
        out << line;
    }
    if (report.power_law_exponent.has_value()) {
        std::snprintf(line, sizeof(line), "power-law exponent   %9.3f\n", *report.power_law_exponent);
        out << line;
    }
    if (!report.error_budget.empty()) {
        out << "\nlabel                            support recall@5 missed\n";
        for (const auto& row : report.error_budget) {
            std::snprintf(line, sizeof(line), "%-32s %7zu %8.3f %6lld\n", row.label.c_str(),
                          row.support, row.recall_at_5,
                          static_cast<long long>(std::llround(row.missed)));
            out << line;
        }
    }
    return out.str();
}

}  // namespace repotopics::evalkit
