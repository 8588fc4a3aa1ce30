// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 repotopics contributors

#include "repotopics/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <random>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

#include "repotopics/detrand.hpp"

namespace repotopics::corpus {

void validate_record(const RepositoryRecord& rec) {
    if (rec.url.empty()) throw std::invalid_argument("record url is empty");
    std::unordered_set<std::string> seen;
    for (const auto& path : rec.tree) {
        if (path.empty()) throw std::invalid_argument("empty tree path in " + rec.url);
        if (path.front() == '/') throw std::invalid_argument("leading '/' in tree path: " + path);
        std::size_t start = 0;
        while (true) {
            std::size_t slash = path.find('/', start);
            std::size_t len = (slash == std::string::npos ? path.size() : slash) - start;
            if (len == 0) throw std::invalid_argument("empty path segment in: " + path);
            if (slash == std::string::npos) break;
            start = slash + 1;
            if (start == path.size()) throw std::invalid_argument("trailing '/' in tree path: " + path);
        }
        if (!seen.insert(path).second) throw std::invalid_argument("duplicate tree entry: " + path);
    }
}

std::string normalize_topic(const std::string& raw) {
    std::size_t b = 0, e = raw.size();
    while (b < e && std::isspace(static_cast<unsigned char>(raw[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(raw[e - 1]))) --e;
    std::string out = raw.substr(b, e - b);
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

void TopicMapping::validate() const {
    std::unordered_set<std::string> tax;
    for (const auto& name : taxonomy) {
        if (name.empty()) throw std::invalid_argument("empty taxonomy name");
        for (char c : name) {
            if (std::isupper(static_cast<unsigned char>(c)))
                throw std::invalid_argument("taxonomy name not lowercase: " + name);
        }
        if (!tax.insert(name).second) throw std::invalid_argument("duplicate taxonomy name: " + name);
    }
    for (const auto& [raw, targets] : entries) {
        for (const auto& t : targets) {
            if (tax.find(t) == tax.end())
                throw std::invalid_argument("mapping target '" + t + "' (from '" + raw +
                                            "') is not in the taxonomy");
        }
    }
}

std::vector<std::string> TopicMapping::multi_target_topics() const {
    std::vector<std::string> out;
    for (const auto& [raw, targets] : entries) {
        if (targets.size() > 1) out.push_back(raw);
    }
    return out;
}

int TopicMapping::taxonomy_index(const std::string& label) const {
    for (std::size_t i = 0; i < taxonomy.size(); ++i) {
        if (taxonomy[i] == label) return static_cast<int>(i);
    }
    return -1;
}

std::optional<LabeledRecord> remap_topics(const RepositoryRecord& record, const TopicMapping& mapping) {
    std::set<std::string> labels;
    for (const auto& raw : record.raw_topics) {
        auto it = mapping.entries.find(normalize_topic(raw));
        if (it != mapping.entries.end()) labels.insert(it->second.begin(), it->second.end());
    }
    if (labels.empty()) return std::nullopt;
    return LabeledRecord{record, std::move(labels)};
}

namespace {

std::string combination_key(const std::set<std::string>& labels) {
    std::string key;
    for (const auto& l : labels) {  // std::set iterates sorted
        key += l;
        key += '\x1f';
    }
    return key;
}

}  // namespace

std::vector<LabeledRecord> inverse_frequency_sample(const std::vector<LabeledRecord>& records,
                                                    std::size_t target, std::uint64_t seed) {
    if (target > records.size())
        throw std::invalid_argument("sample target exceeds corpus size");
    if (target == records.size()) return records;

    std::unordered_map<std::string, std::size_t> freq;
    for (const auto& r : records) ++freq[combination_key(r.labels)];

    // A-ES reservoir: key_i = -ln(u_i) / w_i, keep the `target` smallest.
    std::mt19937_64 rng(seed);
    std::vector<std::pair<double, std::size_t>> keyed(records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        const double w = 1.0 / static_cast<double>(freq[combination_key(records[i].labels)]);
        double u = detrand::unit(rng);
        if (u <= 0.0) u = 0x1.0p-53;
        keyed[i] = {-std::log(u) / w, i};
    }
    std::nth_element(keyed.begin(), keyed.begin() + static_cast<std::ptrdiff_t>(target), keyed.end());

    std::vector<char> chosen(records.size(), 0);
    for (std::size_t i = 0; i < target; ++i) chosen[keyed[i].second] = 1;
    std::vector<LabeledRecord> out;
    out.reserve(target);
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (chosen[i]) out.push_back(records[i]);
    }
    return out;
}

std::vector<LabeledRecord> deduplicate(const std::vector<LabeledRecord>& records) {
    // Winner per url: greatest archived_at, earliest occurrence on ties.
    std::unordered_map<std::string, std::size_t> winner;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (records[i].record.is_fork) continue;
        auto [it, inserted] = winner.emplace(records[i].record.url, i);
        if (!inserted && records[i].record.archived_at > records[it->second].record.archived_at)
            it->second = i;
    }
    std::vector<LabeledRecord> out;
    out.reserve(winner.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (records[i].record.is_fork) continue;
        if (winner[records[i].record.url] == i) out.push_back(records[i]);
    }
    return out;
}

void SplitSpec::validate() const {
    for (double r : {train_ratio, val_ratio, test_ratio}) {
        if (!(r > 0.0 && r < 1.0)) throw std::invalid_argument("split ratio out of (0,1)");
    }
    if (std::fabs(train_ratio + val_ratio + test_ratio - 1.0) > 1e-9)
        throw std::invalid_argument("split ratios do not sum to 1");
}

SplitResult split(const std::vector<LabeledRecord>& records, const SplitSpec& spec) {
    spec.validate();
    std::vector<std::size_t> order(records.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::mt19937_64 rng(spec.seed);
    detrand::shuffle(order, rng);

    const std::size_t n = records.size();
    const std::size_t n_train = static_cast<std::size_t>(static_cast<double>(n) * spec.train_ratio);
    const std::size_t n_val = static_cast<std::size_t>(static_cast<double>(n) * spec.val_ratio);

    SplitResult out;
    for (std::size_t i = 0; i < n; ++i) {
        const LabeledRecord& r = records[order[i]];
        if (i < n_train)
            out.train.push_back(r);
        else if (i < n_train + n_val)
            out.validation.push_back(r);
        else
            out.test.push_back(r);
    }
    return out;
}

}  // namespace repotopics::corpus
