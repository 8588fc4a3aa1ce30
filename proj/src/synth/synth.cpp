// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 repotopics contributors

#include "repotopics/synth.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "repotopics/corpus_io.hpp"
#include "repotopics/detrand.hpp"

namespace repotopics::synth {

void SyntheticSpec::validate() const {
    if (repos == 0 || labels == 0) throw std::invalid_argument("repos and labels must be positive");
    if (!(signal_strength >= 0.0 && signal_strength <= 1.0))
        throw std::invalid_argument("signal_strength must be in [0,1]");
    if (!(readme_less_fraction >= 0.0 && readme_less_fraction <= 1.0))
        throw std::invalid_argument("readme_less_fraction must be in [0,1]");
    if (label_count_distribution.empty())
        throw std::invalid_argument("label_count_distribution must be nonempty");
    double total = 0.0;
    for (double p : label_count_distribution) {
        if (p < 0.0) throw std::invalid_argument("label_count_distribution entries must be >= 0");
        total += p;
    }
    if (std::abs(total - 1.0) > 1e-6)
        throw std::invalid_argument("label_count_distribution must sum to 1");
}

std::vector<std::string> label_names(std::size_t count) {
    static const char* kWords[] = {"alpha",   "bravo",  "charlie", "delta",  "echo",    "foxtrot",
                                   "golf",    "hotel",  "india",   "juliett", "kilo",    "lima",
                                   "mike",    "november", "oscar", "papa",   "quebec",  "romeo",
                                   "sierra",  "tango",  "uniform", "victor", "whiskey", "xray",
                                   "yankee",  "zulu"};
    constexpr std::size_t kWordCount = sizeof(kWords) / sizeof(kWords[0]);
    std::vector<std::string> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        if (i < kWordCount) {
            out.emplace_back(kWords[i]);
        } else {
            out.push_back(std::string(kWords[i % kWordCount]) + "-" +
                          kWords[(i / kWordCount - 1) % kWordCount]);
        }
    }
    return out;
}

namespace {

// Largest-remainder quotas: exact counts for a share vector.
std::vector<std::size_t> quota_counts(std::size_t n, const std::vector<double>& shares) {
    std::vector<std::size_t> counts(shares.size(), 0);
    std::vector<std::pair<double, std::size_t>> remainders;
    std::size_t assigned = 0;
    for (std::size_t i = 0; i < shares.size(); ++i) {
        const double exact = static_cast<double>(n) * shares[i];
        counts[i] = static_cast<std::size_t>(exact);
        assigned += counts[i];
        remainders.emplace_back(exact - static_cast<double>(counts[i]), i);
    }
    std::sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (std::size_t i = 0; assigned < n; ++i, ++assigned) ++counts[remainders[i % remainders.size()].second];
    return counts;
}

const char* kFillerWords[] = {"this",  "project", "provides", "tools",  "for",     "working",
                              "with",  "data",    "and",      "offers", "a",       "simple",
                              "interface", "plus", "examples", "see",   "the",     "guide",
                              "below", "to",      "get",      "started"};

}  // namespace

SyntheticCorpus generate(const SyntheticSpec& spec) {
    spec.validate();
    const std::vector<std::string> names = label_names(spec.labels);

    SyntheticCorpus out;
    out.mapping.taxonomy = names;
    for (const auto& name : names) out.mapping.entries[name] = {name};

    std::mt19937_64 rng(spec.seed);

    // Labels per repository: exact quotas, shuffled across repositories.
    std::vector<std::size_t> per_count =
        quota_counts(spec.repos, spec.label_count_distribution);
    std::vector<std::size_t> labels_of(spec.repos);
    std::size_t at = 0;
    for (std::size_t c = 0; c < per_count.size(); ++c) {
        const std::size_t want = std::min(c + 1, spec.labels);
        for (std::size_t i = 0; i < per_count[c]; ++i) labels_of[at++] = want;
    }
    detrand::shuffle(labels_of, rng);

    // README-less repositories: exact count after rounding.
    const std::size_t readme_less =
        static_cast<std::size_t>(static_cast<double>(spec.repos) * spec.readme_less_fraction + 0.5);
    std::vector<char> lacks_readme(spec.repos, 0);
    for (std::size_t i = 0; i < readme_less && i < spec.repos; ++i) lacks_readme[i] = 1;
    detrand::shuffle(lacks_readme, rng);

    out.records.reserve(spec.repos);
    for (std::size_t i = 0; i < spec.repos; ++i) {
        corpus::RepositoryRecord rec;
        rec.url = "https://example.com/synth/r" + std::to_string(i);
        rec.is_fork = detrand::unit(rng) < 0.01;
        rec.archived_at = 1704067200 + static_cast<std::int64_t>(i) * 3600;  // hourly cadence

        const auto chosen = detrand::sample_indices(spec.labels, labels_of[i], rng);
        std::vector<std::string> labels;
        for (std::size_t c : chosen) labels.push_back(names[c]);
        std::sort(labels.begin(), labels.end());
        rec.raw_topics = labels;
        if (detrand::unit(rng) < 0.05) rec.raw_topics.push_back("javascript");  // unmapped noise

        rec.tree = {"src", "Makefile", "LICENSE", "docs", "docs/index.txt"};
        std::size_t file_no = 0;
        for (const auto& label : labels) {
            if (detrand::unit(rng) < spec.signal_strength) {
                const std::size_t count = 1 + detrand::below(rng, 2);
                for (std::size_t f = 0; f < count; ++f)
                    rec.tree.push_back("src/mod" + std::to_string(file_no++) + "." + label);
            }
        }
        if (detrand::unit(rng) < 0.05) {
            // Decoy extension from an unrelated label.
            const std::string& other = names[detrand::below(rng, spec.labels)];
            rec.tree.push_back("src/extra" + std::to_string(file_no++) + "." + other);
        }

        if (lacks_readme[i] == 0) {
            std::string readme;
            for (const auto& label : labels)
                readme += "# " + label + "\n\nThis package implements " + label +
                          " features and ships a small " + label + " demo.\n";
            readme += "\n";
            const std::size_t filler = 4 + detrand::below(rng, 8);
            for (std::size_t w = 0; w < filler; ++w) {
                readme += kFillerWords[detrand::below(rng, sizeof(kFillerWords) /
                                                               sizeof(kFillerWords[0]))];
                readme += ' ';
            }
            readme += "\n";
            rec.readme = readme;
        }
        out.records.push_back(std::move(rec));
    }
    return out;
}

}  // namespace repotopics::synth
