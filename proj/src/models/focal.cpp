// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 repotopics contributors

#include <cmath>
#include <stdexcept>

#include "repotopics/models.hpp"
#include "repotopics/ranking.hpp"

namespace repotopics::models {

void FocalLossParams::validate() const {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("focal alpha must be in [0,1]");
    if (!(gamma >= 0.0)) throw std::invalid_argument("focal gamma must be >= 0");
}

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0)) throw std::invalid_argument("learning_rate must be positive");
    if (epochs == 0) throw std::invalid_argument("epochs must be positive");
    if (batch_size == 0) throw std::invalid_argument("batch_size must be positive");
    if (selection_k == 0) throw std::invalid_argument("selection_k must be positive");
    loss.validate();
}

namespace {

inline double clamp_prob(double p) {
    if (p < kProbEps) return kProbEps;
    if (p > 1.0 - kProbEps) return 1.0 - kProbEps;
    return p;
}

}  // namespace

double focal_loss(double p, int y, const FocalLossParams& params) {
    const double pc = clamp_prob(p);
    const double pt = y != 0 ? pc : 1.0 - pc;
    const double at = y != 0 ? params.alpha : 1.0 - params.alpha;
    const double focal = params.gamma == 0.0 ? 1.0 : std::pow(1.0 - pt, params.gamma);
    return -at * focal * std::log(pt);
}

double focal_loss_dlogit(double p, int y, const FocalLossParams& params) {
    if (p <= kProbEps || p >= 1.0 - kProbEps) {
        // Clamp active: the loss is locally constant in the logit.
        return 0.0;
    }
    const double pt = y != 0 ? p : 1.0 - p;
    const double at = y != 0 ? params.alpha : 1.0 - params.alpha;
    const double one_m = 1.0 - pt;
    const double focal_deriv_term =
        params.gamma == 0.0 ? 0.0 : params.gamma * std::pow(one_m, params.gamma - 1.0) * std::log(pt);
    const double pow_term = params.gamma == 0.0 ? 1.0 : std::pow(one_m, params.gamma);
    const double dloss_dpt = -at * (-focal_deriv_term + pow_term / pt);
    const double dpt_dp = y != 0 ? 1.0 : -1.0;
    const double dp_dz = p * (1.0 - p);  // true sigmoid slope
    return dloss_dpt * dpt_dp * dp_dz;
}

double micro_f1_at_k(const std::vector<std::vector<double>>& scores,
                     const std::vector<std::vector<std::uint8_t>>& truth,
                     const std::vector<std::string>& taxonomy, std::size_t k) {
    std::size_t tp = 0, predicted = 0, actual = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        const auto top = ranking::top_k_indices(scores[i], taxonomy, k);
        predicted += top.size();
        for (std::size_t c : top) tp += truth[i][c] != 0 ? 1 : 0;
        for (std::uint8_t t : truth[i]) actual += t != 0 ? 1 : 0;
    }
    if (tp == 0) return 0.0;
    const double precision = static_cast<double>(tp) / static_cast<double>(predicted);
    const double recall = static_cast<double>(tp) / static_cast<double>(actual);
    return 2.0 * precision * recall / (precision + recall);
}

}  // namespace repotopics::models
