// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 repotopics contributors

// Checkpoint container: magic, a JSON header describing the backend,
// dimensions, taxonomy and vocabulary reference, then all parameters as
// raw little-endian 64-bit floats. Round-trips are bit-exact.

#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "repotopics/errors.hpp"
#include "repotopics/models.hpp"

using nlohmann::json;

namespace repotopics::models {

namespace {

constexpr char kMagic[8] = {'R', 'T', 'P', 'C', '0', '0', '0', '1'};

std::string fingerprint_hex(std::uint64_t fp) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(fp));
    return buf;
}

std::uint64_t fingerprint_from_hex(const std::string& hex) {
    return std::strtoull(hex.c_str(), nullptr, 16);
}

void write_file(const std::string& path, const json& header,
                const std::vector<const std::vector<double>*>& blocks) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot write checkpoint: " + path);
    out.write(kMagic, sizeof(kMagic));
    const std::string h = header.dump();
    const std::uint64_t hlen = h.size();
    out.write(reinterpret_cast<const char*>(&hlen), sizeof(hlen));
    out.write(h.data(), static_cast<std::streamsize>(h.size()));
    for (const auto* block : blocks)
        out.write(reinterpret_cast<const char*>(block->data()),
                  static_cast<std::streamsize>(block->size() * sizeof(double)));
    if (!out) throw DataError("short write on checkpoint: " + path);
}

json read_header(std::ifstream& in, const std::string& path) {
    char magic[8];
    in.read(magic, sizeof(magic));
    if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw DataError("not a checkpoint file: " + path);
    std::uint64_t hlen = 0;
    in.read(reinterpret_cast<char*>(&hlen), sizeof(hlen));
    std::string h(hlen, '\0');
    in.read(h.data(), static_cast<std::streamsize>(hlen));
    if (!in) throw DataError("truncated checkpoint header: " + path);
    json j = json::parse(h, nullptr, false);
    if (j.is_discarded()) throw DataError("corrupt checkpoint header: " + path);
    if (j.value("format_version", 0) != 1)
        throw DataError("unsupported checkpoint format version in " + path);
    return j;
}

void read_block(std::ifstream& in, const std::string& path, std::vector<double>& block,
                std::size_t count) {
    block.resize(count);
    in.read(reinterpret_cast<char*>(block.data()),
            static_cast<std::streamsize>(count * sizeof(double)));
    if (!in) throw DataError("truncated checkpoint parameters: " + path);
}

}  // namespace

void LinearModel::save(const std::string& path) const {
    json header;
    header["format_version"] = 1;
    header["backend"] = "linear";
    header["vocab_size"] = vocab_size_;
    header["vocab_fingerprint"] = fingerprint_hex(vocab_fingerprint_);
    header["taxonomy"] = taxonomy_;
    header["idf_count"] = idf_.size();
    header["param_count"] = params_.size();
    write_file(path, header, {&idf_, &params_});
}

void PairEncoderModel::save(const std::string& path) const {
    json header;
    header["format_version"] = 1;
    header["backend"] = "encoder";
    header["vocab_size"] = vocab_size_;
    header["vocab_fingerprint"] = fingerprint_hex(vocab_fingerprint_);
    header["taxonomy"] = taxonomy_;
    header["dims"] = {{"dim", dims_.dim},
                      {"layers", dims_.layers},
                      {"heads", dims_.heads},
                      {"ffn", dims_.ffn},
                      {"max_positions", dims_.max_positions}};
    header["param_count"] = params_.size();
    write_file(path, header, {&params_});
}

BackendKind checkpoint_kind(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open checkpoint: " + path);
    const json header = read_header(in, path);
    const std::string backend = header.value("backend", "");
    if (backend == "linear") return BackendKind::linear;
    if (backend == "encoder") return BackendKind::encoder;
    throw DataError("unknown checkpoint backend '" + backend + "' in " + path);
}

LinearModel load_linear(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open checkpoint: " + path);
    const json header = read_header(in, path);
    if (header.value("backend", "") != "linear")
        throw DataError("checkpoint is not a linear model: " + path);
    LinearModel m;
    m.vocab_size_ = header.at("vocab_size").get<std::size_t>();
    m.vocab_fingerprint_ = fingerprint_from_hex(header.at("vocab_fingerprint").get<std::string>());
    m.taxonomy_ = header.at("taxonomy").get<std::vector<std::string>>();
    read_block(in, path, m.idf_, header.at("idf_count").get<std::size_t>());
    read_block(in, path, m.params_, header.at("param_count").get<std::size_t>());
    const std::size_t expected = m.taxonomy_.size() * m.vocab_size_ + m.taxonomy_.size();
    if (m.params_.size() != expected || m.idf_.size() != m.vocab_size_)
        throw DataError("checkpoint dimensions are inconsistent: " + path);
    return m;
}

PairEncoderModel load_encoder(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open checkpoint: " + path);
    const json header = read_header(in, path);
    if (header.value("backend", "") != "encoder")
        throw DataError("checkpoint is not an encoder model: " + path);
    PairEncoderModel m;
    m.vocab_size_ = header.at("vocab_size").get<std::size_t>();
    m.vocab_fingerprint_ = fingerprint_from_hex(header.at("vocab_fingerprint").get<std::string>());
    m.taxonomy_ = header.at("taxonomy").get<std::vector<std::string>>();
    const json& d = header.at("dims");
    m.dims_ = EncoderDims{d.at("dim").get<int>(), d.at("layers").get<int>(), d.at("heads").get<int>(),
                          d.at("ffn").get<int>(), d.at("max_positions").get<int>()};
    m.dims_.validate();
    read_block(in, path, m.params_, header.at("param_count").get<std::size_t>());
    return m;
}

}  // namespace repotopics::models
