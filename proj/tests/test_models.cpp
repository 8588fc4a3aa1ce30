// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 repotopics contributors

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>

#include "oracles.hpp"
#include "repotopics/errors.hpp"
#include "repotopics/models.hpp"

using namespace repotopics;
using models::FocalLossParams;
using models::LinearModel;
using models::PairEncoderModel;
using textprep::EncodedExample;

namespace {

EncodedExample make_example(std::vector<int> ids, std::vector<int> segs,
                            std::vector<std::uint8_t> labels) {
    EncodedExample ex;
    ex.token_ids = std::move(ids);
    ex.segment_ids = std::move(segs);
    ex.mask.assign(ex.token_ids.size(), true);
    ex.labels = std::move(labels);
    return ex;
}

EncodedExample random_example(std::mt19937_64& rng, int vocab, std::size_t labels,
                              std::size_t min_len = 4, std::size_t max_len = 10) {
    const std::size_t n = min_len + rng() % (max_len - min_len + 1);
    std::vector<int> ids, segs;
    ids.push_back(textprep::Vocabulary::kCls);
    segs.push_back(0);
    const std::size_t cut = 1 + rng() % (n - 2);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        ids.push_back(4 + int(rng() % std::uint64_t(vocab - 4)));
        segs.push_back(i < cut ? 0 : 1);
    }
    ids.push_back(textprep::Vocabulary::kSep);
    segs.push_back(segs.back());
    std::vector<std::uint8_t> y(labels, 0);
    for (auto& v : y) v = rng() % 2;
    return make_example(std::move(ids), std::move(segs), std::move(y));
}

const std::vector<std::string> kTax3{"apple", "berry", "cherry"};

double bce_reference(double p, int y) {
    const double eps = 1e-7;
    const double pc = std::min(1.0 - eps, std::max(eps, p));
    const double pt = y != 0 ? pc : 1.0 - pc;
    return -std::log(pt);
}

}  // namespace

TEST_CASE("focal loss: gamma=0 collapses to alpha-weighted BCE") {
    std::mt19937_64 rng(41);
    const FocalLossParams params{0.5, 0.0};
    for (int i = 0; i < 1000; ++i) {
        const double p = oracles::unit(rng);
        const int y = int(rng() % 2);
        CHECK(std::fabs(models::focal_loss(p, y, params) - 0.5 * bce_reference(p, y)) <= 1e-12);
    }
}

TEST_CASE("focal loss: hand-evaluated point") {
    // p=0.5, y=1, alpha=0.5, gamma=2: 0.5 * 0.25 * ln 2
    const double expect = 0.5 * 0.25 * 0.6931471805599453;
    CHECK(models::focal_loss(0.5, 1, {0.5, 2.0}) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("focal loss: confident correct prediction approaches zero") {
    CHECK(models::focal_loss(1.0, 1, {0.5, 2.0}) < 1e-12);
    CHECK(models::focal_loss(0.0, 0, {0.5, 2.0}) < 1e-12);
}

TEST_CASE("focal loss: nonnegative and monotone in p_t") {
    std::mt19937_64 rng(43);
    for (int i = 0; i < 200; ++i) {
        const FocalLossParams params{oracles::unit(rng), 3.0 * oracles::unit(rng)};
        const double p1 = 0.05 + 0.9 * oracles::unit(rng);
        const double p2 = p1 + (1.0 - p1 - 0.01) * oracles::unit(rng);
        CHECK(models::focal_loss(p1, 1, params) >= 0.0);
        // Larger p_t (for y=1, larger p) never increases the loss.
        CHECK(models::focal_loss(p2, 1, params) <= models::focal_loss(p1, 1, params) + 1e-15);
    }
}

TEST_CASE("focal loss gradient matches finite differences of the scalar loss") {
    std::mt19937_64 rng(47);
    for (int i = 0; i < 100; ++i) {
        const FocalLossParams params{0.25 + 0.5 * oracles::unit(rng), 2.5 * oracles::unit(rng)};
        const double z = 6.0 * (oracles::unit(rng) - 0.5);
        const int y = int(rng() % 2);
        const double h = 1e-6;
        const double hi = models::focal_loss(models::sigmoid(z + h), y, params);
        const double lo = models::focal_loss(models::sigmoid(z - h), y, params);
        const double fd = (hi - lo) / (2.0 * h);
        const double analytic = models::focal_loss_dlogit(models::sigmoid(z), y, params);
        CHECK(std::fabs(analytic - fd) <= 1e-6 * std::max(1.0, std::fabs(fd)));
    }
}

TEST_CASE("linear: analytic gradient matches finite differences") {
    std::mt19937_64 rng(53);
    const std::size_t V = 12;
    LinearModel model(V, kTax3, 0);
    for (auto& w : model.parameters()) w = 0.4 * (oracles::unit(rng) - 0.5);
    for (std::size_t v = 4; v < V; ++v) model.idf()[v] = 0.5 + oracles::unit(rng);

    std::vector<EncodedExample> batch;
    for (int i = 0; i < 4; ++i) batch.push_back(random_example(rng, int(V), kTax3.size()));

    const FocalLossParams params{0.5, 2.0};
    const auto analytic = model.batch_gradient(batch, params);
    const auto fd = oracles::fd_gradient(model.parameters(), 1e-6,
                                         [&] { return model.batch_loss(batch, params); });
    CHECK(oracles::max_rel_err(analytic, fd) <= 1e-4);
}

TEST_CASE("linear: gamma=0 gradients equal half of BCE gradients") {
    std::mt19937_64 rng(59);
    const std::size_t V = 10;
    LinearModel model(V, kTax3, 0);
    for (auto& w : model.parameters()) w = 0.4 * (oracles::unit(rng) - 0.5);
    for (std::size_t v = 4; v < V; ++v) model.idf()[v] = 1.0;

    std::vector<EncodedExample> batch;
    for (int i = 0; i < 3; ++i) batch.push_back(random_example(rng, int(V), kTax3.size()));

    const auto analytic = model.batch_gradient(batch, {0.5, 0.0});

    // Independent oracle: finite differences of plain mean BCE, halved.
    auto bce_batch = [&] {
        double total = 0.0;
        for (const auto& ex : batch) {
            const auto logits = model.logits(ex);
            for (std::size_t c = 0; c < logits.size(); ++c)
                total += bce_reference(models::sigmoid(logits[c]), ex.labels[c]) /
                         double(logits.size());
        }
        return total / double(batch.size());
    };
    auto fd = oracles::fd_gradient(model.parameters(), 1e-6, bce_batch);
    for (double& g : fd) g *= 0.5;
    CHECK(oracles::max_rel_err(analytic, fd) <= 1e-5);
}

TEST_CASE("train_linear: separable corpus is learned exactly") {
    // Token 4 marks class apple, token 5 marks class berry.
    std::vector<EncodedExample> data;
    for (int i = 0; i < 20; ++i) {
        data.push_back(make_example({2, 4, 3}, {0, 0, 0}, {1, 0}));
        data.push_back(make_example({2, 5, 3}, {0, 0, 0}, {0, 1}));
    }
    models::TrainConfig cfg;
    cfg.learning_rate = 2.0;
    cfg.epochs = 12;
    cfg.batch_size = 8;
    cfg.seed = 1;
    cfg.selection_k = 1;
    models::TrainTrace trace;
    const std::vector<std::string> tax{"apple", "berry"};
    LinearModel model = models::train_linear(data, data, cfg, 8, tax, 0, &trace);

    REQUIRE(trace.epoch_loss.size() == cfg.epochs);
    for (std::size_t e = 1; e < trace.epoch_loss.size(); ++e)
        CHECK(trace.epoch_loss[e] < trace.epoch_loss[e - 1]);

    std::vector<std::vector<double>> scores;
    std::vector<std::vector<std::uint8_t>> truth;
    for (const auto& ex : data) {
        scores.push_back(models::predict(model, ex).scores);
        truth.push_back(ex.labels);
    }
    CHECK(models::micro_f1_at_k(scores, truth, tax, 1) == 1.0);

    // The returned checkpoint attains the best validation metric seen.
    const double best =
        *std::max_element(trace.epoch_val_metric.begin(), trace.epoch_val_metric.end());
    CHECK(models::micro_f1_at_k(scores, truth, tax, cfg.selection_k) == best);
    CHECK(trace.epoch_val_metric[trace.best_epoch] == best);
}

TEST_CASE("train_linear: deterministic given the seed") {
    std::mt19937_64 rng(61);
    std::vector<EncodedExample> data;
    for (int i = 0; i < 12; ++i) data.push_back(random_example(rng, 10, kTax3.size()));
    models::TrainConfig cfg;
    cfg.learning_rate = 0.3;
    cfg.epochs = 3;
    cfg.batch_size = 4;
    cfg.seed = 99;
    LinearModel a = models::train_linear(data, data, cfg, 10, kTax3, 0);
    LinearModel b = models::train_linear(data, data, cfg, 10, kTax3, 0);
    REQUIRE(a.parameters().size() == b.parameters().size());
    CHECK(std::memcmp(a.parameters().data(), b.parameters().data(),
                      a.parameters().size() * sizeof(double)) == 0);

    CHECK_THROWS_AS(models::train_linear({}, data, cfg, 10, kTax3, 0), std::invalid_argument);
}

TEST_CASE("encoder: analytic gradient matches central finite differences") {
    std::mt19937_64 rng(67);
    models::EncoderDims dims{8, 2, 2, 16, 16};
    PairEncoderModel model(dims, 20, kTax3, 0, 5);

    std::vector<EncodedExample> batch;
    for (int i = 0; i < 5; ++i) batch.push_back(random_example(rng, 20, kTax3.size(), 4, 12));

    const FocalLossParams params{0.5, 2.0};
    const auto analytic = model.batch_gradient(batch, params);
    const auto fd = oracles::fd_gradient(model.parameters(), 1e-5,
                                         [&] { return model.batch_loss(batch, params); });
    CHECK(oracles::max_rel_err(analytic, fd) <= 1e-4);
}

TEST_CASE("encoder: position embeddings make segment-B order matter") {
    models::EncoderDims dims{8, 1, 2, 16, 16};
    PairEncoderModel model(dims, 16, kTax3, 0, 7);
    const auto a = model.logits(make_example({2, 4, 3, 6, 7, 3}, {0, 0, 0, 1, 1, 1}, {}));
    const auto b = model.logits(make_example({2, 4, 3, 7, 6, 3}, {0, 0, 0, 1, 1, 1}, {}));
    double diff = 0.0;
    for (std::size_t c = 0; c < a.size(); ++c) diff = std::max(diff, std::fabs(a[c] - b[c]));
    CHECK(diff > 1e-9);
}

TEST_CASE("encoder: empty segment B equals the single-segment encoding") {
    models::EncoderDims dims{8, 2, 2, 16, 32};
    PairEncoderModel model(dims, 16, kTax3, 0, 11);
    textprep::Vocabulary vocab =
        textprep::Vocabulary::build({{"t4", "t5", "t6", "t7", "t8", "t9"}}, 16);
    const auto pair_form = textprep::encode_pair({"t4", "t5"}, {}, vocab, 32);
    // Hand-built single-segment layout: CLS + A + SEP, all segment 0.
    const auto single_form = make_example(
        {textprep::Vocabulary::kCls, vocab.id_of("t4"), vocab.id_of("t5"),
         textprep::Vocabulary::kSep},
        {0, 0, 0, 0}, {});
    REQUIRE(pair_form.token_ids == single_form.token_ids);
    const auto pa = models::predict(model, pair_form).scores;
    const auto pb = models::predict(model, single_form).scores;
    CHECK(pa == pb);
}

TEST_CASE("encoder: deterministic given the seed") {
    std::mt19937_64 rng(71);
    std::vector<EncodedExample> data;
    for (int i = 0; i < 8; ++i) data.push_back(random_example(rng, 12, kTax3.size()));
    models::TrainConfig cfg;
    cfg.learning_rate = 0.01;
    cfg.epochs = 2;
    cfg.batch_size = 4;
    cfg.seed = 5;
    models::EncoderDims dims{8, 1, 2, 16, 16};
    PairEncoderModel a = models::train_pair_encoder(data, data, cfg, dims, 12, kTax3, 0);
    PairEncoderModel b = models::train_pair_encoder(data, data, cfg, dims, 12, kTax3, 0);
    CHECK(std::memcmp(a.parameters().data(), b.parameters().data(),
                      a.parameters().size() * sizeof(double)) == 0);
}

TEST_CASE("encoder: input validation") {
    models::EncoderDims dims{8, 1, 2, 16, 8};
    PairEncoderModel model(dims, 12, kTax3, 0, 3);
    CHECK_THROWS_AS(model.logits(make_example({2, 99, 3}, {0, 0, 0}, {})), std::invalid_argument);
    CHECK_THROWS_AS(model.logits(make_example(std::vector<int>(9, 4), std::vector<int>(9, 0), {})),
                    std::invalid_argument);
    CHECK_THROWS_AS(models::EncoderDims({7, 1, 2, 16, 8}).validate(), std::invalid_argument);
}

TEST_CASE("predict: all-zero linear weights yield sigmoid(bias)") {
    LinearModel model(8, kTax3, 0);
    model.parameters()[kTax3.size() * 8 + 1] = 0.3;  // bias of class berry
    const auto p = models::predict(model, make_example({2, 4, 3}, {0, 0, 0}, {}), "repo");
    CHECK(p.repo == "repo");
    CHECK(p.scores[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p.scores[1] == doctest::Approx(models::sigmoid(0.3)).epsilon(1e-12));
    CHECK(p.scores[2] == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("predict: pure function of model and example") {
    std::mt19937_64 rng(73);
    LinearModel model(10, kTax3, 0);
    for (auto& w : model.parameters()) w = oracles::unit(rng) - 0.5;
    for (std::size_t v = 4; v < 10; ++v) model.idf()[v] = 1.0;
    const auto ex = random_example(rng, 10, kTax3.size());
    CHECK(models::predict(model, ex).scores == models::predict(model, ex).scores);
}

TEST_CASE("predict: hand-computed one-feature linear model") {
    LinearModel model(5, {"t"}, 0);
    model.idf()[4] = 2.0;
    model.parameters()[4] = 0.7;   // weight of token 4 for the only class
    model.parameters()[5] = -0.2;  // bias
    // tf=1, tfidf=2, L2-normalized to 1: score = sigmoid(0.7 - 0.2).
    const auto p = models::predict(model, make_example({2, 4, 3}, {0, 0, 0}, {}));
    CHECK(p.scores[0] == doctest::Approx(models::sigmoid(0.5)).epsilon(1e-12));

    CHECK_THROWS_AS(models::predict(model, make_example({2, 9, 3}, {0, 0, 0}, {})),
                    std::invalid_argument);
}

TEST_CASE("checkpoints round-trip bit-exactly") {
    namespace fs = std::filesystem;
    std::mt19937_64 rng(79);
    const auto dir = fs::temp_directory_path();

    LinearModel lin(10, kTax3, 0xabcdef12345678ull);
    for (auto& w : lin.parameters()) w = oracles::unit(rng) - 0.5;
    for (auto& v : lin.idf()) v = oracles::unit(rng);
    const auto lin_path = (dir / "repotopics_lin.ckpt").string();
    lin.save(lin_path);
    CHECK(models::checkpoint_kind(lin_path) == models::BackendKind::linear);
    LinearModel lin2 = models::load_linear(lin_path);
    CHECK(lin2.taxonomy() == lin.taxonomy());
    CHECK(lin2.vocab_fingerprint() == lin.vocab_fingerprint());
    REQUIRE(lin2.parameters().size() == lin.parameters().size());
    CHECK(std::memcmp(lin2.parameters().data(), lin.parameters().data(),
                      lin.parameters().size() * sizeof(double)) == 0);
    CHECK(std::memcmp(lin2.idf().data(), lin.idf().data(), lin.idf().size() * sizeof(double)) == 0);

    models::EncoderDims dims{8, 1, 2, 16, 16};
    PairEncoderModel enc(dims, 12, kTax3, 7, 13);
    const auto enc_path = (dir / "repotopics_enc.ckpt").string();
    enc.save(enc_path);
    CHECK(models::checkpoint_kind(enc_path) == models::BackendKind::encoder);
    PairEncoderModel enc2 = models::load_encoder(enc_path);
    CHECK(std::memcmp(enc2.parameters().data(), enc.parameters().data(),
                      enc.parameters().size() * sizeof(double)) == 0);

    // Saving the loaded model reproduces the file byte for byte.
    const auto enc_path2 = (dir / "repotopics_enc2.ckpt").string();
    enc2.save(enc_path2);
    std::ifstream f1(enc_path, std::ios::binary), f2(enc_path2, std::ios::binary);
    std::string b1((std::istreambuf_iterator<char>(f1)), std::istreambuf_iterator<char>());
    std::string b2((std::istreambuf_iterator<char>(f2)), std::istreambuf_iterator<char>());
    CHECK(b1 == b2);

    CHECK_THROWS_AS(models::load_encoder(lin_path), DataError);
    CHECK_THROWS_AS(models::checkpoint_kind((dir / "missing.ckpt").string()), DataError);
    for (const auto& p : {lin_path, enc_path, enc_path2}) fs::remove(p);
}
