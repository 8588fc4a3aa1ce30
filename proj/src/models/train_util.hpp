// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 repotopics contributors
#pragma once

// Shared minibatch training loop. A Model provides parameters(),
// logits(ex) and batch_loss_and_gradient(); the loop owns shuffling,
// updates, and best-checkpoint selection by validation micro F1@k.

#include <random>
#include <stdexcept>
#include <vector>

#include "repotopics/detrand.hpp"
#include "repotopics/kernels.hpp"
#include "repotopics/models.hpp"

namespace repotopics::models::detail {

template <class Model>
double validation_metric(const Model& model, const std::vector<textprep::EncodedExample>& val,
                         const std::vector<std::string>& taxonomy, std::size_t k) {
    std::vector<std::vector<double>> scores;
    std::vector<std::vector<std::uint8_t>> truth;
    scores.reserve(val.size());
    truth.reserve(val.size());
    for (const auto& ex : val) {
        std::vector<double> z = model.logits(ex);
        for (double& v : z) v = sigmoid(v);
        scores.push_back(std::move(z));
        truth.push_back(ex.labels);
    }
    return micro_f1_at_k(scores, truth, taxonomy, k);
}

template <class Model>
void run_minibatch_training(Model& model, const std::vector<textprep::EncodedExample>& train,
                            const std::vector<textprep::EncodedExample>& val, const TrainConfig& cfg,
                            const std::vector<std::string>& taxonomy, TrainTrace* trace) {
    cfg.validate();
    if (train.empty() || val.empty()) throw std::invalid_argument("training requires nonempty splits");

    std::mt19937_64 order_rng(cfg.seed ^ 0x9e3779b97f4a7c15ull);
    std::vector<std::size_t> order(train.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    std::vector<double>& params = model.parameters();
    std::vector<double> best_params = params;
    double best_metric = -1.0;
    std::size_t best_epoch = 0;
    std::vector<double> grad;

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        detrand::shuffle(order, order_rng);
        double loss_sum = 0.0;
        std::size_t batches = 0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
            std::vector<textprep::EncodedExample> batch;
            batch.reserve(stop - start);
            for (std::size_t i = start; i < stop; ++i) batch.push_back(train[order[i]]);
            loss_sum += model.batch_loss_and_gradient(batch, cfg.loss, grad);
            ++batches;
            kernels::axpy(-cfg.learning_rate, grad.data(), params.data(), params.size());
        }
        const double metric = validation_metric(model, val, taxonomy, cfg.selection_k);
        if (trace != nullptr) {
            trace->epoch_loss.push_back(loss_sum / static_cast<double>(batches));
            trace->epoch_val_metric.push_back(metric);
        }
        if (metric > best_metric) {
            best_metric = metric;
            best_params = params;
            best_epoch = epoch;
        }
    }
    params = best_params;
    if (trace != nullptr) trace->best_epoch = best_epoch;
}

}  // namespace repotopics::models::detail
