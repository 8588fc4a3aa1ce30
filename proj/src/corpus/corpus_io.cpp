// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 repotopics contributors

#include "repotopics/corpus_io.hpp"

#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "repotopics/errors.hpp"
#include "repotopics/textprep.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace repotopics::corpus_io {

namespace {

// Howard Hinnant's civil-date algorithms; no timezone machinery involved.
std::int64_t days_from_civil(std::int64_t y, unsigned m, unsigned d) {
    y -= m <= 2;
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153 * (m + (m > 2 ? -3u : 9u)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

void civil_from_days(std::int64_t z, std::int64_t& y, unsigned& m, unsigned& d) {
    z += 719468;
    const std::int64_t era = (z >= 0 ? z : z - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(z - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    d = doy - (153 * mp + 2) / 5 + 1;
    m = mp + (mp < 10 ? 3 : -9);
    y += m <= 2;
}

int parse_digits(const std::string& s, std::size_t pos, std::size_t count) {
    int v = 0;
    for (std::size_t i = 0; i < count; ++i) {
        char c = s[pos + i];
        if (c < '0' || c > '9') throw std::invalid_argument("bad timestamp: " + s);
        v = v * 10 + (c - '0');
    }
    return v;
}

}  // namespace

std::int64_t parse_iso8601_utc(const std::string& text) {
    // YYYY-MM-DDTHH:MM:SSZ
    if (text.size() != 20 || text[4] != '-' || text[7] != '-' || text[10] != 'T' ||
        text[13] != ':' || text[16] != ':' || text[19] != 'Z')
        throw std::invalid_argument("bad timestamp: " + text);
    const int year = parse_digits(text, 0, 4);
    const int month = parse_digits(text, 5, 2);
    const int day = parse_digits(text, 8, 2);
    const int hour = parse_digits(text, 11, 2);
    const int minute = parse_digits(text, 14, 2);
    const int second = parse_digits(text, 17, 2);
    if (month < 1 || month > 12 || day < 1 || day > 31 || hour > 23 || minute > 59 || second > 60)
        throw std::invalid_argument("bad timestamp: " + text);
    return days_from_civil(year, static_cast<unsigned>(month), static_cast<unsigned>(day)) * 86400 +
           hour * 3600 + minute * 60 + second;
}

std::string format_iso8601_utc(std::int64_t seconds) {
    std::int64_t days = seconds / 86400;
    std::int64_t rem = seconds % 86400;
    if (rem < 0) {
        rem += 86400;
        --days;
    }
    std::int64_t y;
    unsigned m, d;
    civil_from_days(days, y, m, d);
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lldZ",
                  static_cast<long long>(y), m, d, static_cast<long long>(rem / 3600),
                  static_cast<long long>((rem / 60) % 60), static_cast<long long>(rem % 60));
    return buf;
}

std::string record_to_json_line(const corpus::RepositoryRecord& rec) {
    json j;
    j["url"] = rec.url;
    j["is_fork"] = rec.is_fork;
    j["archived_at"] = format_iso8601_utc(rec.archived_at);
    j["topics"] = rec.raw_topics;
    j["tree"] = rec.tree;
    if (rec.readme.has_value())
        j["readme"] = *rec.readme;
    else
        j["readme"] = nullptr;
    // READMEs and file names in the wild are not always valid UTF-8;
    // replace bad sequences instead of refusing the record.
    return j.dump(-1, ' ', false, json::error_handler_t::replace);
}

corpus::RepositoryRecord record_from_json_line(const std::string& line) {
    json j = json::parse(line);  // throws json::parse_error on bad syntax
    if (!j.is_object()) throw std::invalid_argument("record is not an object");
    corpus::RepositoryRecord rec;
    for (const char* field : {"url", "is_fork", "archived_at", "topics", "tree", "readme"}) {
        if (!j.contains(field)) throw std::invalid_argument(std::string("missing field: ") + field);
    }
    if (!j["url"].is_string()) throw std::invalid_argument("field url must be a string");
    rec.url = j["url"].get<std::string>();
    if (!j["is_fork"].is_boolean()) throw std::invalid_argument("field is_fork must be a boolean");
    rec.is_fork = j["is_fork"].get<bool>();
    if (!j["archived_at"].is_string())
        throw std::invalid_argument("field archived_at must be an ISO-8601 string");
    rec.archived_at = parse_iso8601_utc(j["archived_at"].get<std::string>());
    for (const char* field : {"topics", "tree"}) {
        if (!j[field].is_array()) throw std::invalid_argument(std::string("field ") + field + " must be an array");
        for (const auto& e : j[field]) {
            if (!e.is_string())
                throw std::invalid_argument(std::string("field ") + field + " must contain strings");
        }
    }
    rec.raw_topics = j["topics"].get<std::vector<std::string>>();
    rec.tree = j["tree"].get<std::vector<std::string>>();
    if (j["readme"].is_string())
        rec.readme = j["readme"].get<std::string>();
    else if (!j["readme"].is_null())
        throw std::invalid_argument("field readme must be a string or null");
    corpus::validate_record(rec);
    return rec;
}

ReadResult read_corpus_lenient(std::istream& in) {
    ReadResult out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            out.records.push_back(record_from_json_line(line));
        } catch (const std::exception& e) {
            out.diagnostics.push_back({line_no, e.what()});
        }
    }
    return out;
}

std::vector<corpus::RepositoryRecord> read_corpus(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open corpus file: " + path);
    ReadResult r = read_corpus_lenient(in);
    if (!r.diagnostics.empty()) {
        const auto& d = r.diagnostics.front();
        throw DataError(path + ":" + std::to_string(d.line_number) + ": " + d.message);
    }
    return std::move(r.records);
}

void write_corpus(const std::string& path, const std::vector<corpus::RepositoryRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write corpus file: " + path);
    for (const auto& rec : records) out << record_to_json_line(rec) << '\n';
}

corpus::TopicMapping read_mapping(const std::string& mapping_path, const std::string& taxonomy_path) {
    corpus::TopicMapping mapping;
    mapping.taxonomy = read_taxonomy(taxonomy_path);

    std::ifstream in(mapping_path);
    if (!in) throw DataError("cannot open mapping file: " + mapping_path);
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        const std::size_t tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 >= line.size())
            throw DataError(mapping_path + ":" + std::to_string(line_no) +
                            ": expected raw_topic<TAB>curated_topic");
        mapping.entries[corpus::normalize_topic(line.substr(0, tab))].insert(line.substr(tab + 1));
    }
    try {
        mapping.validate();
    } catch (const std::invalid_argument& e) {
        throw DataError(std::string("invalid mapping: ") + e.what());
    }
    return mapping;
}

void write_mapping(const std::string& mapping_path, const corpus::TopicMapping& mapping) {
    std::ofstream out(mapping_path, std::ios::binary);
    if (!out) throw DataError("cannot write mapping file: " + mapping_path);
    for (const auto& [raw, targets] : mapping.entries) {
        for (const auto& t : targets) out << raw << '\t' << t << '\n';
    }
}

void write_taxonomy(const std::string& taxonomy_path, const std::vector<std::string>& taxonomy) {
    std::ofstream out(taxonomy_path, std::ios::binary);
    if (!out) throw DataError("cannot write taxonomy file: " + taxonomy_path);
    for (const auto& t : taxonomy) out << t << '\n';
}

std::vector<std::string> read_taxonomy(const std::string& taxonomy_path) {
    std::ifstream in(taxonomy_path);
    if (!in) throw DataError("cannot open taxonomy file: " + taxonomy_path);
    std::vector<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty()) out.push_back(line);
    }
    return out;
}

corpus::RepositoryRecord record_from_directory(const std::string& dir_path) {
    const fs::path root(dir_path);
    if (!fs::is_directory(root)) throw DataError("not a directory: " + dir_path);

    corpus::RepositoryRecord rec;
    rec.url = "file://" + fs::absolute(root).lexically_normal().generic_string();
    if (rec.url.back() == '/') rec.url.pop_back();

    // Symlinks are recorded as entries and never followed.
    for (fs::recursive_directory_iterator it(root, fs::directory_options::skip_permission_denied), end;
         it != end; ++it) {
        rec.tree.push_back(it->path().lexically_relative(root).generic_string());
    }
    std::sort(rec.tree.begin(), rec.tree.end());

    // Best README candidate under the 100 MiB cap.
    constexpr std::uintmax_t kMaxReadmeBytes = 100ull * 1024 * 1024;
    for (const auto& name : textprep::readme_candidates(rec)) {
        const fs::path p = root / name;
        std::error_code ec;
        if (!fs::is_regular_file(p, ec)) continue;
        const std::uintmax_t size = fs::file_size(p, ec);
        if (ec || size > kMaxReadmeBytes) continue;
        std::ifstream in(p, std::ios::binary);
        std::ostringstream text;
        text << in.rdbuf();
        rec.readme = text.str();
        break;
    }
    return rec;
}

}  // namespace repotopics::corpus_io
