// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 repotopics contributors

#include "repotopics/textprep.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <random>
#include <regex>
#include <stdexcept>
#include <unordered_set>

#include "repotopics/detrand.hpp"
#include "repotopics/errors.hpp"

namespace repotopics::textprep {

namespace {

std::string base_name(const std::string& path) {
    const std::size_t slash = path.rfind('/');
    return slash == std::string::npos ? path : path.substr(slash + 1);
}

std::string lower_ascii(const std::string& s) {
    std::string out = s;
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

// Tier for README name priority; -1 when not a README name at all.
int readme_tier(const std::string& basename) {
    const std::string low = lower_ascii(basename);
    if (low == "readme") return 0;
    if (low == "readme.md") return 1;
    if (low == "readme.txt") return 2;
    if (low == "readme.rst") return 3;
    return -1;
}

// Removes open..close spans inclusively. A span left unclosed is
// dropped to the end of the text when drop_unclosed is set, otherwise
// the lone delimiter is kept for later passes.
std::string strip_delimited(const std::string& s, const std::string& open, const std::string& close,
                            bool drop_unclosed) {
    std::string out;
    std::size_t pos = 0;
    while (pos < s.size()) {
        const std::size_t start = s.find(open, pos);
        if (start == std::string::npos) {
            out.append(s, pos, std::string::npos);
            break;
        }
        out.append(s, pos, start - pos);
        const std::size_t stop = s.find(close, start + open.size());
        if (stop == std::string::npos) {
            if (!drop_unclosed) out.append(s, start, std::string::npos);
            break;
        }
        pos = stop + close.size();
    }
    return out;
}

}  // namespace

std::vector<std::string> readme_candidates(const corpus::RepositoryRecord& record) {
    std::vector<std::pair<int, std::string>> found;
    for (const auto& path : record.tree) {
        if (path.find('/') != std::string::npos) continue;  // root level only
        const int tier = readme_tier(base_name(path));
        if (tier >= 0) found.emplace_back(tier, path);
    }
    std::sort(found.begin(), found.end());
    std::vector<std::string> out;
    out.reserve(found.size());
    for (auto& [tier, path] : found) out.push_back(std::move(path));
    return out;
}

std::optional<std::string> find_readme(const corpus::RepositoryRecord& record) {
    auto candidates = readme_candidates(record);
    if (candidates.empty()) return std::nullopt;
    return candidates.front();
}

std::string clean_readme(const std::string& text) {
    // Code snippets: fenced blocks, then inline spans.
    std::string s = strip_delimited(text, "```", "```", /*drop_unclosed=*/true);
    s = strip_delimited(s, "`", "`", /*drop_unclosed=*/false);
    // HTML/XML tags.
    s = strip_delimited(s, "<", ">", /*drop_unclosed=*/false);
    // URLs, e-mail addresses, @usernames.
    static const std::regex url_re(R"((https?|ftp)://\S+|www\.\S+)", std::regex::icase);
    s = std::regex_replace(s, url_re, " ");
    static const std::regex mail_re(R"([^\s@]+@[^\s@]+\.[^\s@]+)");
    s = std::regex_replace(s, mail_re, " ");
    static const std::regex user_re(R"(@[A-Za-z0-9_][A-Za-z0-9_-]*)");
    s = std::regex_replace(s, user_re, " ");
    // Markdown: link syntax keeps its text, structural symbols go.
    static const std::regex link_re(R"(\[([^\[\]]*)\]\s*\(([^()]*)\))");
    s = std::regex_replace(s, link_re, "$1");

    std::string kept;
    kept.reserve(s.size());
    for (unsigned char c : s) {
        if (c == '#' || c == '*' || c == '_' || c == '>' || c == '`' || c == '|') continue;
        if (std::isdigit(c)) continue;
        if (c < 0x80 && std::ispunct(c)) continue;
        if (c >= 0x80) continue;
        kept.push_back(static_cast<char>(c));
    }

    std::string out;
    out.reserve(kept.size());
    bool in_space = true;  // leading whitespace trimmed
    for (unsigned char c : kept) {
        if (std::isspace(c)) {
            in_space = true;
            continue;
        }
        if (in_space && !out.empty()) out.push_back(' ');
        in_space = false;
        out.push_back(static_cast<char>(std::tolower(c)));
    }
    return out;
}

std::vector<std::string> sample_tree_names(const corpus::RepositoryRecord& record,
                                           const SamplerConfig& cfg) {
    if (cfg.max_names < 1) throw std::invalid_argument("max_names must be at least 1");
    std::vector<std::string> names;
    std::unordered_set<std::string> seen;
    for (const auto& path : record.tree) {
        std::string name = base_name(path);
        std::size_t b = 0, e = name.size();
        while (b < e && std::isspace(static_cast<unsigned char>(name[b]))) ++b;
        while (e > b && std::isspace(static_cast<unsigned char>(name[e - 1]))) --e;
        name = name.substr(b, e - b);
        if (name.empty()) continue;
        if (seen.insert(name).second) names.push_back(std::move(name));
    }
    if (names.size() > cfg.max_names) {
        std::mt19937_64 rng(detrand::seed_for(record.url, cfg.hash_seed));
        const auto idx = detrand::sample_indices(names.size(), cfg.max_names, rng);
        std::vector<std::string> picked;
        picked.reserve(cfg.max_names);
        for (std::size_t i : idx) picked.push_back(std::move(names[i]));
        names = std::move(picked);
    }
    std::sort(names.begin(), names.end());
    return names;
}

std::vector<std::string> whitespace_tokens(const std::string& text) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t j = i;
        while (j < text.size() && !std::isspace(static_cast<unsigned char>(text[j]))) ++j;
        if (j > i) out.push_back(text.substr(i, j - i));
        i = j;
    }
    return out;
}

std::vector<std::string> split_name_tokens(const std::string& name) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : name) {
        if (c == '.' || c == '-' || c == '_') {
            if (!cur.empty()) out.push_back(std::move(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    if (!cur.empty()) out.push_back(std::move(cur));
    return out;
}

std::string repo_name_from_url(const std::string& url) {
    std::string u = url;
    while (!u.empty() && u.back() == '/') u.pop_back();
    const std::size_t slash = u.rfind('/');
    std::string name = slash == std::string::npos ? u : u.substr(slash + 1);
    return name.empty() ? url : name;
}

void Vocabulary::index() {
    ids_.clear();
    ids_.reserve(tokens_.size());
    for (std::size_t i = 0; i < tokens_.size(); ++i) ids_.emplace(tokens_[i], static_cast<int>(i));
}

Vocabulary Vocabulary::build(const std::vector<std::vector<std::string>>& token_streams,
                             std::size_t max_size) {
    if (max_size <= kSpecials) throw std::invalid_argument("vocabulary max_size must exceed 4");
    if (token_streams.empty()) throw std::invalid_argument("empty corpus");

    std::map<std::string, std::size_t> freq;  // ordered: lexicographic tie-break for free
    for (const auto& stream : token_streams) {
        for (const auto& tok : stream) {
            if (!tok.empty()) ++freq[tok];
        }
    }
    std::vector<std::pair<std::string, std::size_t>> ranked(freq.begin(), freq.end());
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });

    Vocabulary v;
    v.tokens_ = {"[PAD]", "[UNK]", "[CLS]", "[SEP]"};
    const std::size_t budget = max_size - kSpecials;
    for (std::size_t i = 0; i < ranked.size() && i < budget; ++i) v.tokens_.push_back(ranked[i].first);
    v.index();
    return v;
}

int Vocabulary::id_of(const std::string& token) const {
    auto it = ids_.find(token);
    return it == ids_.end() ? kUnk : it->second;
}

const std::string& Vocabulary::token_of(int id) const {
    if (id < 0 || static_cast<std::size_t>(id) >= tokens_.size())
        throw std::invalid_argument("token id out of range");
    return tokens_[static_cast<std::size_t>(id)];
}

std::uint64_t Vocabulary::fingerprint() const {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const auto& t : tokens_) {
        h = detrand::fnv1a(t, h);
        h = detrand::fnv1a("\n", h);
    }
    return h;
}

void Vocabulary::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write vocabulary file: " + path);
    out << "#specials [PAD] [UNK] [CLS] [SEP]\n";
    for (std::size_t i = kSpecials; i < tokens_.size(); ++i) out << tokens_[i] << '\n';
}

Vocabulary Vocabulary::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open vocabulary file: " + path);
    std::string header;
    if (!std::getline(in, header) || header.rfind("#specials", 0) != 0)
        throw DataError("vocabulary file missing #specials header: " + path);
    Vocabulary v;
    v.tokens_ = {"[PAD]", "[UNK]", "[CLS]", "[SEP]"};
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) v.tokens_.push_back(line);
    }
    v.index();
    return v;
}

EncodedExample encode_pair(const std::vector<std::string>& segment_a,
                           const std::vector<std::string>& segment_b, const Vocabulary& vocab,
                           std::size_t max_length) {
    if (max_length < 4) throw std::invalid_argument("max_length must be at least 4");

    std::size_t a = segment_a.size();
    std::size_t b = segment_b.size();
    auto total = [&] { return 1 + a + 1 + (b > 0 ? b + 1 : 0); };
    // Longest-first: drop from the end of the longer segment, A on ties.
    while (total() > max_length) {
        if (a >= b)
            --a;
        else
            --b;
    }

    EncodedExample ex;
    const std::size_t n = total();
    ex.token_ids.reserve(n);
    ex.segment_ids.reserve(n);
    ex.token_ids.push_back(Vocabulary::kCls);
    for (std::size_t i = 0; i < a; ++i) ex.token_ids.push_back(vocab.id_of(segment_a[i]));
    ex.token_ids.push_back(Vocabulary::kSep);
    ex.segment_ids.assign(ex.token_ids.size(), 0);
    if (b > 0) {
        for (std::size_t i = 0; i < b; ++i) {
            ex.token_ids.push_back(vocab.id_of(segment_b[i]));
            ex.segment_ids.push_back(1);
        }
        ex.token_ids.push_back(Vocabulary::kSep);
        ex.segment_ids.push_back(1);
    }
    ex.mask.assign(ex.token_ids.size(), true);
    return ex;
}

}  // namespace repotopics::textprep
