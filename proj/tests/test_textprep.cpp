// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 repotopics contributors

#include <doctest.h>

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <random>
#include <set>

#include "oracles.hpp"
#include "repotopics/detrand.hpp"
#include "repotopics/textprep.hpp"

using namespace repotopics;
using textprep::EncodedExample;
using textprep::Vocabulary;

namespace {

corpus::RepositoryRecord with_tree(std::vector<std::string> tree, std::string url = "u") {
    corpus::RepositoryRecord rec;
    rec.url = std::move(url);
    rec.tree = std::move(tree);
    return rec;
}

Vocabulary tiny_vocab(std::vector<std::string> tokens) {
    std::vector<std::vector<std::string>> streams{std::move(tokens)};
    return Vocabulary::build(streams, 4 + streams[0].size() + 8);
}

}  // namespace

TEST_CASE("find_readme: root-level variants") {
    CHECK(*textprep::find_readme(with_tree({"README.md", "src/main.c"})) == "README.md");
    CHECK_FALSE(textprep::find_readme(with_tree({"docs/README.md"})).has_value());
    // Priority: bare name, then .md, .txt, .rst.
    CHECK(*textprep::find_readme(with_tree({"ReadMe.RST", "readme.txt"})) == "readme.txt");
    CHECK(*textprep::find_readme(with_tree({"readme.md", "README"})) == "README");
    CHECK_FALSE(textprep::find_readme(with_tree({"README.adoc", "readme.markdown"})).has_value());
}

TEST_CASE("clean_readme: urls and punctuation") {
    CHECK(textprep::clean_readme("Visit https://x.io NOW!!") == "visit now");
}

TEST_CASE("clean_readme: empty input") { CHECK(textprep::clean_readme("").empty()); }

TEST_CASE("clean_readme: tags, digits, non-ascii") {
    CHECK(textprep::clean_readme("héllo 123 <b>world</b>") == "hllo world");
}

TEST_CASE("clean_readme: code, emails, usernames, links") {
    CHECK(textprep::clean_readme("```c\nint x;\n```keep `rm -rf` going") == "keep going");
    CHECK(textprep::clean_readme("mail me@example.org or ping @someone") == "mail or ping");
    CHECK(textprep::clean_readme("[our docs](https://docs.example.org) rock") == "our docs rock");
    CHECK(textprep::clean_readme("# Title\n> quoted *bold* _it_ |cell|") == "title quoted bold it cell");
}

TEST_CASE("clean_readme: idempotent, ascii-only, lowercase, digit-free") {
    std::mt19937_64 rng(23);
    const std::string alphabet =
        "aA zZ#*_>`|[]()1234567890!?.,:;<b></b>\xc3\xa9 https://x.io a@b.cd @user ``` ` \n\t";
    for (int trial = 0; trial < 50; ++trial) {
        std::string text;
        const std::size_t len = rng() % 200;
        for (std::size_t i = 0; i < len; ++i) text += alphabet[rng() % alphabet.size()];
        const std::string once = textprep::clean_readme(text);
        CHECK(textprep::clean_readme(once) == once);
        for (unsigned char c : once) {
            CHECK(c < 0x80);
            CHECK_FALSE(std::isdigit(c));
            CHECK_FALSE(std::isupper(c));
        }
        CHECK(once.find("  ") == std::string::npos);
    }
}

TEST_CASE("sample_tree_names: under budget keeps all, sorted") {
    const auto names =
        textprep::sample_tree_names(with_tree({"src/zeta.c", "alpha.c", "src"}), {50, 0});
    CHECK(names == std::vector<std::string>{"alpha.c", "src", "zeta.c"});
}

TEST_CASE("sample_tree_names: deterministic per repository") {
    std::vector<std::string> tree;
    for (int i = 0; i < 200; ++i) tree.push_back("f" + std::to_string(i) + ".c");
    const auto rec = with_tree(tree, "https://example.com/r");
    const auto a = textprep::sample_tree_names(rec, {50, 7});
    const auto b = textprep::sample_tree_names(rec, {50, 7});
    CHECK(a == b);
    REQUIRE(a.size() == 50);
    CHECK(std::is_sorted(a.begin(), a.end()));
    std::set<std::string> distinct(a.begin(), a.end());
    CHECK(distinct.size() == 50);
    // A different url or hash seed moves the sample.
    const auto c = textprep::sample_tree_names(with_tree(tree, "other"), {50, 7});
    const auto d = textprep::sample_tree_names(rec, {50, 8});
    CHECK(a != c);
    CHECK(a != d);

    // Frozen fingerprint: the sample must stay stable across platforms
    // and releases (the generator and hash are both pinned).
    std::string joined;
    for (const auto& n : a) {
        joined += n;
        joined += '\n';
    }
    CHECK(repotopics::detrand::fnv1a(joined) == 0x3d398460e7273b97ull);
}

TEST_CASE("sample_tree_names: basenames, trim, dedupe preserving case") {
    const auto names = textprep::sample_tree_names(
        with_tree({"a/Main.c", "b/Main.c", "b/main.c", "c/  ", "d"}), {50, 0});
    CHECK(names == std::vector<std::string>{"Main.c", "d", "main.c"});
}

TEST_CASE("build_vocabulary: frequency order with lexicographic ties") {
    Vocabulary v = Vocabulary::build({{"a", "a", "b"}}, 6);
    CHECK(v.size() == 6);
    CHECK(v.id_of("a") == 4);
    CHECK(v.id_of("b") == 5);

    Vocabulary small = Vocabulary::build({{"a", "a", "b"}}, 5);
    CHECK(small.size() == 5);
    CHECK(small.id_of("a") == 4);
    CHECK(small.id_of("b") == Vocabulary::kUnk);

    Vocabulary ties = Vocabulary::build({{"b", "a"}}, 5);
    CHECK(ties.id_of("a") == 4);  // equal frequency: lexicographic wins

    CHECK_THROWS_AS(Vocabulary::build({}, 10), std::invalid_argument);
    CHECK_THROWS_AS(Vocabulary::build({{"a"}}, 4), std::invalid_argument);
}

TEST_CASE("vocabulary file round trip") {
    Vocabulary v = Vocabulary::build({{"beta", "alpha", "beta"}}, 16);
    const auto path = std::filesystem::temp_directory_path() / "repotopics_vocab_test.txt";
    v.save(path.string());
    Vocabulary back = Vocabulary::load(path.string());
    CHECK(back.size() == v.size());
    CHECK(back.tokens() == v.tokens());
    CHECK(back.fingerprint() == v.fingerprint());
    std::filesystem::remove(path);
}

TEST_CASE("encode_pair: single segment") {
    Vocabulary v = tiny_vocab({"x", "y", "z"});
    const auto ex = textprep::encode_pair({"x", "y", "z"}, {}, v, 512);
    REQUIRE(ex.token_ids.size() == 5);
    CHECK(ex.token_ids.front() == Vocabulary::kCls);
    CHECK(ex.token_ids.back() == Vocabulary::kSep);
    CHECK(ex.segment_ids == std::vector<int>{0, 0, 0, 0, 0});
    CHECK(ex.mask == std::vector<bool>(5, true));
}

TEST_CASE("encode_pair: longest-first balances equal segments") {
    std::vector<std::string> a(300, "x"), b(300, "y");
    Vocabulary v = tiny_vocab({"x", "y"});
    const auto ex = textprep::encode_pair(a, b, v, 512);
    CHECK(ex.token_ids.size() == 512);
    std::size_t len_a = 0, len_b = 0;
    for (std::size_t i = 0; i < ex.token_ids.size(); ++i) {
        if (ex.token_ids[i] < Vocabulary::kSpecials) continue;
        (ex.segment_ids[i] == 0 ? len_a : len_b) += 1;
    }
    CHECK(len_a + len_b == 509);
    CHECK((len_a > len_b ? len_a - len_b : len_b - len_a) <= 1);
}

TEST_CASE("encode_pair: the shorter segment survives intact") {
    std::vector<std::string> a(10, "x"), b(600, "y");
    Vocabulary v = tiny_vocab({"x", "y"});
    const auto ex = textprep::encode_pair(a, b, v, 512);
    CHECK(ex.token_ids.size() == 512);
    std::size_t len_a = 0, len_b = 0;
    for (std::size_t i = 0; i < ex.token_ids.size(); ++i) {
        if (ex.token_ids[i] < Vocabulary::kSpecials) continue;
        (ex.segment_ids[i] == 0 ? len_a : len_b) += 1;
    }
    CHECK(len_a == 10);
    CHECK(len_b == 499);
}

TEST_CASE("encode_pair: properties over random lengths") {
    Vocabulary v = tiny_vocab({"x", "y"});
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t na = rng() % 80, nb = rng() % 80;
        const std::size_t max_length = 4 + rng() % 96;
        std::vector<std::string> a(na, "x"), b(nb, "y");
        const auto ex = textprep::encode_pair(a, b, v, max_length);
        CHECK(ex.token_ids.size() <= max_length);
        CHECK(ex.token_ids.size() == ex.segment_ids.size());
        CHECK(ex.token_ids.size() == ex.mask.size());
        CHECK(std::is_sorted(ex.segment_ids.begin(), ex.segment_ids.end()));
        CHECK(ex.token_ids.front() == Vocabulary::kCls);

        std::size_t len_a = 0, len_b = 0;
        for (std::size_t i = 0; i < ex.token_ids.size(); ++i) {
            if (ex.token_ids[i] < Vocabulary::kSpecials) continue;
            (ex.segment_ids[i] == 0 ? len_a : len_b) += 1;
        }
        const std::size_t budget = 1 + na + 1 + (nb > 0 ? nb + 1 : 0);
        if (budget <= max_length) {  // inputs fit: nothing lost
            CHECK(len_a == na);
            CHECK(len_b == nb);
        } else {
            // Longest-first cuts the shorter side below its original
            // length only after both sides have converged.
            const auto diff = len_a > len_b ? len_a - len_b : len_b - len_a;
            if (na < nb && len_a < na) CHECK(diff <= 1);
            if (nb < na && len_b < nb) CHECK(diff <= 1);
            CHECK(len_a <= na);
            CHECK(len_b <= nb);
        }
    }
    CHECK_THROWS_AS(textprep::encode_pair({"x"}, {}, v, 3), std::invalid_argument);
}

TEST_CASE("encode_pair: empty B is bit-identical to a single segment") {
    Vocabulary v = tiny_vocab({"x", "y"});
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::string> a(rng() % 30, "x");
        const auto pair = textprep::encode_pair(a, {}, v, 64);
        // Single-segment reference layout: CLS + A + SEP, all segment 0.
        std::vector<int> want{Vocabulary::kCls};
        for (std::size_t i = 0; i + 2 < 64 && i < a.size(); ++i) want.push_back(v.id_of("x"));
        want.push_back(Vocabulary::kSep);
        CHECK(pair.token_ids == want);
        CHECK(pair.segment_ids == std::vector<int>(want.size(), 0));
    }
}

TEST_CASE("tokenizer helpers") {
    CHECK(textprep::split_name_tokens("main.c") == std::vector<std::string>{"main", "c"});
    CHECK(textprep::split_name_tokens("my-lib_v2.tar.gz") ==
          std::vector<std::string>{"my", "lib", "v2", "tar", "gz"});
    CHECK(textprep::split_name_tokens("...") == std::vector<std::string>{});
    CHECK(textprep::whitespace_tokens("  a\tbb \n c ") ==
          std::vector<std::string>{"a", "bb", "c"});
    CHECK(textprep::repo_name_from_url("https://example.com/user/repo") == "repo");
    CHECK(textprep::repo_name_from_url("https://example.com/user/repo/") == "repo");
    CHECK(textprep::repo_name_from_url("plain") == "plain");
}
