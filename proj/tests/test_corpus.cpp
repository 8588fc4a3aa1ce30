// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 repotopics contributors

#include <doctest.h>

#include <random>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "repotopics/corpus.hpp"
#include "repotopics/corpus_io.hpp"
#include "repotopics/errors.hpp"

using namespace repotopics;
using corpus::LabeledRecord;
using corpus::RepositoryRecord;
using corpus::TopicMapping;

namespace {

RepositoryRecord make_record(std::string url, std::vector<std::string> topics,
                             std::int64_t archived_at = 0, bool fork = false) {
    RepositoryRecord rec;
    rec.url = std::move(url);
    rec.raw_topics = std::move(topics);
    rec.archived_at = archived_at;
    rec.is_fork = fork;
    return rec;
}

TopicMapping demo_mapping() {
    TopicMapping m;
    m.taxonomy = {"database", "front end"};
    m.entries["react"] = {"front end"};
    m.entries["db-stuff"] = {"database"};
    return m;
}

LabeledRecord labeled(std::string url, std::set<std::string> labels, std::int64_t at = 0,
                      bool fork = false) {
    return LabeledRecord{make_record(std::move(url), {}, at, fork), std::move(labels)};
}

}  // namespace

TEST_CASE("remap_topics: language-only topics are discarded") {
    const auto out = corpus::remap_topics(make_record("u", {"javascript"}), demo_mapping());
    CHECK_FALSE(out.has_value());
}

TEST_CASE("remap_topics: empty raw topics are discarded") {
    CHECK_FALSE(corpus::remap_topics(make_record("u", {}), demo_mapping()).has_value());
}

TEST_CASE("remap_topics: union over mapping hits") {
    const auto out = corpus::remap_topics(make_record("u", {"react", "db-stuff"}), demo_mapping());
    REQUIRE(out.has_value());
    CHECK(out->labels == std::set<std::string>{"front end", "database"});
}

TEST_CASE("remap_topics: lookup is case-folded and trimmed") {
    const auto out = corpus::remap_topics(make_record("u", {"  ReAcT "}), demo_mapping());
    REQUIRE(out.has_value());
    CHECK(out->labels == std::set<std::string>{"front end"});
}

TEST_CASE("mapping validation") {
    TopicMapping bad = demo_mapping();
    bad.entries["x"] = {"unknown-topic"};
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);

    TopicMapping upper = demo_mapping();
    upper.taxonomy.push_back("Database");
    CHECK_THROWS_AS(upper.validate(), std::invalid_argument);

    TopicMapping multi = demo_mapping();
    multi.entries["fullstack"] = {"database", "front end"};
    multi.validate();
    CHECK(multi.multi_target_topics() == std::vector<std::string>{"fullstack"});
}

TEST_CASE("record validation rejects malformed trees") {
    RepositoryRecord rec = make_record("u", {});
    rec.tree = {"ok/path"};
    corpus::validate_record(rec);
    rec.tree = {"/lead"};
    CHECK_THROWS_AS(corpus::validate_record(rec), std::invalid_argument);
    rec.tree = {"a//b"};
    CHECK_THROWS_AS(corpus::validate_record(rec), std::invalid_argument);
    rec.tree = {"a", "a"};
    CHECK_THROWS_AS(corpus::validate_record(rec), std::invalid_argument);
    rec.tree = {};
    rec.url.clear();
    CHECK_THROWS_AS(corpus::validate_record(rec), std::invalid_argument);
}

TEST_CASE("inverse_frequency_sample: identity and uniform cases") {
    std::vector<LabeledRecord> records;
    for (int i = 0; i < 10; ++i) records.push_back(labeled("u" + std::to_string(i), {"database"}));

    const auto all = corpus::inverse_frequency_sample(records, 10, 3);
    REQUIRE(all.size() == 10);
    for (std::size_t i = 0; i < all.size(); ++i) CHECK(all[i].record.url == records[i].record.url);

    const auto five = corpus::inverse_frequency_sample(records, 5, 3);
    CHECK(five.size() == 5);
    // Output order equals input order restricted to the selection.
    std::size_t cursor = 0;
    for (const auto& rec : five) {
        while (cursor < records.size() && records[cursor].record.url != rec.record.url) ++cursor;
        CHECK(cursor < records.size());
    }
    CHECK_THROWS_AS(corpus::inverse_frequency_sample(records, 11, 3), std::invalid_argument);
}

TEST_CASE("inverse_frequency_sample: rare combinations are oversampled") {
    // 90 records of one combination, 10 of another; the rare records
    // carry nine-fold weight, so across seeds they must be selected far
    // above the 50% base rate.
    std::vector<LabeledRecord> records;
    for (int i = 0; i < 90; ++i) records.push_back(labeled("c" + std::to_string(i), {"database"}));
    for (int i = 0; i < 10; ++i) records.push_back(labeled("r" + std::to_string(i), {"front end"}));

    double rare_rate = 0.0, common_rate = 0.0;
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
        const auto picked = corpus::inverse_frequency_sample(records, 50, seed);
        std::size_t rare = 0;
        for (const auto& rec : picked) rare += rec.labels.count("front end");
        rare_rate += double(rare) / 10.0;
        common_rate += double(picked.size() - rare) / 90.0;
    }
    rare_rate /= 1000.0;
    common_rate /= 1000.0;
    CHECK(rare_rate > 0.6);        // well above the 10/100-based 0.5 rate
    CHECK(rare_rate > common_rate);
}

TEST_CASE("deduplicate: keeps the most recently archived record per url") {
    std::vector<LabeledRecord> records = {labeled("a", {"database"}, 100),
                                          labeled("a", {"front end"}, 200)};
    const auto out = corpus::deduplicate(records);
    REQUIRE(out.size() == 1);
    CHECK(out[0].record.archived_at == 200);
}

TEST_CASE("deduplicate: single non-fork record is unchanged") {
    const auto out = corpus::deduplicate({labeled("a", {"database"})});
    REQUIRE(out.size() == 1);
    CHECK(out[0].record.url == "a");
}

TEST_CASE("deduplicate: forks dropped, distinct urls kept") {
    std::vector<LabeledRecord> records = {labeled("f", {"database"}, 0, true),
                                          labeled("a", {"database"}, 1),
                                          labeled("b", {"front end"}, 2)};
    const auto out = corpus::deduplicate(records);
    REQUIRE(out.size() == 2);
    CHECK(out[0].record.url == "a");
    CHECK(out[1].record.url == "b");
}

TEST_CASE("deduplicate is idempotent") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 30; ++trial) {
        std::vector<LabeledRecord> records;
        const std::size_t n = 1 + rng() % 20;
        for (std::size_t i = 0; i < n; ++i) {
            const std::string url = "u" + std::to_string(rng() % 6);
            const auto archived = std::int64_t(rng() % 50);
            const bool fork = (rng() % 5) == 0;
            records.push_back(labeled(url, {"database"}, archived, fork));
        }
        const auto once = corpus::deduplicate(records);
        const auto twice = corpus::deduplicate(once);
        REQUIRE(once.size() == twice.size());
        for (std::size_t i = 0; i < once.size(); ++i) {
            CHECK(once[i].record.url == twice[i].record.url);
            CHECK(once[i].record.archived_at == twice[i].record.archived_at);
        }
    }
}

TEST_CASE("split: ratios 81/9/10 on 100 records") {
    std::vector<LabeledRecord> records;
    for (int i = 0; i < 100; ++i) records.push_back(labeled("u" + std::to_string(i), {"database"}));
    const auto parts = corpus::split(records, {0.81, 0.09, 0.10, 42});
    CHECK(parts.train.size() == 81);
    CHECK(parts.validation.size() == 9);
    CHECK(parts.test.size() == 10);
}

TEST_CASE("split: tiny corpus still covered") {
    std::vector<LabeledRecord> records = {labeled("a", {"database"}), labeled("b", {"database"}),
                                          labeled("c", {"database"})};
    const double eps = 1e-4;
    const auto parts = corpus::split(records, {1.0 - 2 * eps, eps, eps, 1});
    CHECK(parts.train.size() + parts.validation.size() + parts.test.size() == 3);
    CHECK(parts.test.size() >= 1);  // remainder lands in test
}

TEST_CASE("split: seed-deterministic, disjoint, covering") {
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<LabeledRecord> records;
        const std::size_t n = 3 + rng() % 40;
        for (std::size_t i = 0; i < n; ++i)
            records.push_back(labeled("u" + std::to_string(i), {"database"}));
        const corpus::SplitSpec spec{0.6, 0.2, 0.2, rng()};
        const auto a = corpus::split(records, spec);
        const auto b = corpus::split(records, spec);

        std::set<std::string> seen;
        for (const auto* part : {&a.train, &a.validation, &a.test}) {
            for (const auto& rec : *part) CHECK(seen.insert(rec.record.url).second);
        }
        CHECK(seen.size() == n);
        REQUIRE(a.train.size() == b.train.size());
        for (std::size_t i = 0; i < a.train.size(); ++i)
            CHECK(a.train[i].record.url == b.train[i].record.url);
    }
}

TEST_CASE("split spec validation") {
    CHECK_THROWS_AS(corpus::SplitSpec({0.5, 0.5, 0.1, 0}).validate(), std::invalid_argument);
    CHECK_THROWS_AS(corpus::SplitSpec({1.0, 0.0, 0.0, 0}).validate(), std::invalid_argument);
}

TEST_CASE("iso8601 parse and format") {
    CHECK(corpus_io::parse_iso8601_utc("1970-01-01T00:00:00Z") == 0);
    CHECK(corpus_io::parse_iso8601_utc("2024-01-01T00:00:00Z") == 1704067200);
    CHECK(corpus_io::format_iso8601_utc(1704067200) == "2024-01-01T00:00:00Z");
    CHECK_THROWS_AS(corpus_io::parse_iso8601_utc("2024-01-01 00:00:00Z"), std::invalid_argument);
    CHECK_THROWS_AS(corpus_io::parse_iso8601_utc("2024-13-01T00:00:00Z"), std::invalid_argument);

    std::mt19937_64 rng(13);
    for (int trial = 0; trial < 50; ++trial) {
        const std::int64_t t = std::int64_t(rng() % 4102444800ull);  // within 1970..2100
        CHECK(corpus_io::parse_iso8601_utc(corpus_io::format_iso8601_utc(t)) == t);
    }
}

TEST_CASE("corpus jsonl round trip") {
    RepositoryRecord rec = make_record("https://example.com/x", {"react"}, 1704067200);
    rec.tree = {"README.md", "src", "src/main.c"};
    rec.readme = "# Hello\n";
    const auto line = corpus_io::record_to_json_line(rec);
    const auto back = corpus_io::record_from_json_line(line);
    CHECK(back.url == rec.url);
    CHECK(back.archived_at == rec.archived_at);
    CHECK(back.tree == rec.tree);
    REQUIRE(back.readme.has_value());
    CHECK(*back.readme == *rec.readme);

    rec.readme.reset();
    const auto back2 = corpus_io::record_from_json_line(corpus_io::record_to_json_line(rec));
    CHECK_FALSE(back2.readme.has_value());

    // Non-UTF-8 bytes in a README must not break serialization; bad
    // sequences are replaced, not fatal.
    rec.readme = std::string("latin1: caf\xe9 bytes\x80\xff");
    const auto line2 = corpus_io::record_to_json_line(rec);
    const auto back3 = corpus_io::record_from_json_line(line2);
    REQUIRE(back3.readme.has_value());
    CHECK(back3.readme->find("latin1: caf") != std::string::npos);
}

TEST_CASE("corpus reader reports line-numbered diagnostics") {
    std::istringstream in(
        R"({"url":"a","is_fork":false,"archived_at":"2024-01-01T00:00:00Z","topics":[],"tree":[],"readme":null})"
        "\n"
        R"({"is_fork":false,"archived_at":"2024-01-01T00:00:00Z","topics":[],"tree":[],"readme":null})"
        "\n"
        "not json\n");
    const auto result = corpus_io::read_corpus_lenient(in);
    CHECK(result.records.size() == 1);
    REQUIRE(result.diagnostics.size() == 2);
    CHECK(result.diagnostics[0].line_number == 2);
    CHECK(result.diagnostics[0].message.find("url") != std::string::npos);
    CHECK(result.diagnostics[1].line_number == 3);
}
