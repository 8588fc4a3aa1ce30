// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 repotopics contributors

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "repotopics/kernels.hpp"
#include "repotopics/models.hpp"
#include "repotopics/textprep.hpp"
#include "train_util.hpp"

namespace repotopics::models {

LinearModel::LinearModel(std::size_t vocab_size, std::vector<std::string> taxonomy,
                         std::uint64_t vocab_fingerprint)
    : vocab_size_(vocab_size),
      taxonomy_(std::move(taxonomy)),
      vocab_fingerprint_(vocab_fingerprint),
      idf_(vocab_size, 0.0),
      params_(taxonomy_.size() * vocab_size + taxonomy_.size(), 0.0) {}

std::vector<std::pair<int, double>> LinearModel::features(const textprep::EncodedExample& ex) const {
    std::map<int, double> tf;
    for (int id : ex.token_ids) {
        if (id < 0 || static_cast<std::size_t>(id) >= vocab_size_)
            throw std::invalid_argument("token id outside model vocabulary");
        if (id >= textprep::Vocabulary::kSpecials) tf[id] += 1.0;
    }
    std::vector<std::pair<int, double>> feats;
    feats.reserve(tf.size());
    double sq = 0.0;
    for (const auto& [id, count] : tf) {
        const double v = count * idf_[static_cast<std::size_t>(id)];
        feats.emplace_back(id, v);
        sq += v * v;
    }
    if (sq > 0.0) {
        const double inv = 1.0 / std::sqrt(sq);
        for (auto& [id, v] : feats) v *= inv;
    }
    return feats;
}

std::vector<double> LinearModel::logits(const textprep::EncodedExample& ex) const {
    const std::size_t C = taxonomy_.size();
    const auto feats = features(ex);
    std::vector<double> out(C);
    const double* w = params_.data();
    const double* bias = params_.data() + C * vocab_size_;
    for (std::size_t c = 0; c < C; ++c) {
        double z = bias[c];
        const double* row = w + c * vocab_size_;
        for (const auto& [id, v] : feats) z += row[id] * v;
        out[c] = z;
    }
    return out;
}

namespace {

double linear_loss_and_grad(const LinearModel& model,
                            const std::vector<textprep::EncodedExample>& batch,
                            const FocalLossParams& params, std::vector<double>* grad) {
    const std::size_t C = model.taxonomy().size();
    const std::size_t V = model.vocab_size();
    if (grad != nullptr) grad->assign(model.parameters().size(), 0.0);
    double total = 0.0;
    for (const auto& ex : batch) {
        if (ex.labels.size() != C) throw std::invalid_argument("label vector size mismatch");
        const auto feats = model.features(ex);
        const double* w = model.parameters().data();
        const double* bias = w + C * V;
        for (std::size_t c = 0; c < C; ++c) {
            double z = bias[c];
            const double* row = w + c * V;
            for (const auto& [id, v] : feats) z += row[id] * v;
            const double p = sigmoid(z);
            total += focal_loss(p, ex.labels[c], params) / static_cast<double>(C);
            if (grad != nullptr) {
                const double g = focal_loss_dlogit(p, ex.labels[c], params) / static_cast<double>(C);
                double* grow = grad->data() + c * V;
                for (const auto& [id, v] : feats) grow[id] += g * v;
                (*grad)[C * V + c] += g;
            }
        }
    }
    const double inv_b = 1.0 / static_cast<double>(batch.size());
    if (grad != nullptr) kernels::scale(grad->data(), inv_b, grad->size());
    return total * inv_b;
}

}  // namespace

double LinearModel::batch_loss(const std::vector<textprep::EncodedExample>& batch,
                               const FocalLossParams& params) const {
    return linear_loss_and_grad(*this, batch, params, nullptr);
}

std::vector<double> LinearModel::batch_gradient(const std::vector<textprep::EncodedExample>& batch,
                                                const FocalLossParams& params) const {
    std::vector<double> grad;
    linear_loss_and_grad(*this, batch, params, &grad);
    return grad;
}

// train_util expects this member-like hook; keep the public API surface
// of LinearModel value-oriented by adapting through a thin wrapper.
namespace {

struct LinearTrainAdapter {
    LinearModel& m;
    std::vector<double>& parameters() { return m.parameters(); }
    std::vector<double> logits(const textprep::EncodedExample& ex) const { return m.logits(ex); }
    double batch_loss_and_gradient(const std::vector<textprep::EncodedExample>& batch,
                                   const FocalLossParams& params, std::vector<double>& grad) const {
        double loss = linear_loss_and_grad(m, batch, params, &grad);
        return loss;
    }
};

}  // namespace

LinearModel train_linear(const std::vector<textprep::EncodedExample>& train,
                         const std::vector<textprep::EncodedExample>& val, const TrainConfig& cfg,
                         std::size_t vocab_size, const std::vector<std::string>& taxonomy,
                         std::uint64_t vocab_fingerprint, TrainTrace* trace) {
    if (train.empty() || val.empty()) throw std::invalid_argument("training requires nonempty splits");
    LinearModel model(vocab_size, taxonomy, vocab_fingerprint);

    // Smooth IDF over the training split: log((N+1)/(df+1)) + 1.
    std::vector<std::size_t> df(vocab_size, 0);
    for (const auto& ex : train) {
        std::vector<char> seen(vocab_size, 0);
        for (int id : ex.token_ids) {
            if (id >= textprep::Vocabulary::kSpecials && !seen[static_cast<std::size_t>(id)]) {
                seen[static_cast<std::size_t>(id)] = 1;
                ++df[static_cast<std::size_t>(id)];
            }
        }
    }
    const double n1 = static_cast<double>(train.size()) + 1.0;
    for (std::size_t v = textprep::Vocabulary::kSpecials; v < vocab_size; ++v)
        model.idf()[v] = std::log(n1 / (static_cast<double>(df[v]) + 1.0)) + 1.0;

    LinearTrainAdapter adapter{model};
    detail::run_minibatch_training(adapter, train, val, cfg, taxonomy, trace);
    return model;
}

PredictionSet predict(const LinearModel& model, const textprep::EncodedExample& ex, std::string url) {
    std::vector<double> z = model.logits(ex);
    for (double& v : z) v = sigmoid(v);
    return PredictionSet{std::move(url), std::move(z)};
}

}  // namespace repotopics::models
