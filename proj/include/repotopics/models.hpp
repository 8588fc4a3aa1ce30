// SPDX-License-Identifier: Apache-2.0
// Copyright 2026 repotopics contributors
#pragma once

// Classifier backends behind one interface: a TF-IDF linear model and a
// small sentence-pair transformer encoder, both trained with focal loss
// and emitting independent per-label sigmoid probabilities.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "repotopics/textprep.hpp"

namespace repotopics::models {

inline constexpr double kProbEps = 1e-7;  // probability clamp before log

struct FocalLossParams {
    double alpha = 0.5;  // weight for the positive class
    double gamma = 2.0;  // down-weighting exponent

    void validate() const;  // alpha in [0,1], gamma >= 0
};

// Loss for one (probability, label) pair: -a_t (1-p_t)^g log(p_t) with
// p clamped to [kProbEps, 1-kProbEps]. Non-negative, zero in the limit
// of a confidently correct prediction.
double focal_loss(double p, int y, const FocalLossParams& params);
// Derivative of the same quantity with respect to the pre-sigmoid
// logit. Zero in the clamp region, consistent with finite differences
// of the implemented loss.
double focal_loss_dlogit(double p, int y, const FocalLossParams& params);

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Per-repository scores, one probability per taxonomy label (taxonomy
// order). Independent sigmoids: no sum-to-one constraint.
struct PredictionSet {
    std::string repo;
    std::vector<double> scores;
};

struct TrainConfig {
    double learning_rate = 1e-3;
    std::size_t epochs = 3;
    std::size_t batch_size = 8;
    std::uint64_t seed = 0;
    FocalLossParams loss{};
    std::size_t selection_k = 5;  // checkpoint selection: micro F1@k on validation

    void validate() const;
};

// Per-epoch diagnostics from a training run.
struct TrainTrace {
    std::vector<double> epoch_loss;        // mean focal loss seen during the epoch
    std::vector<double> epoch_val_metric;  // micro F1@selection_k on validation
    std::size_t best_epoch = 0;
};

// --------------------------------------------------------------------
// TF-IDF + per-label logistic backend.

class LinearModel {
public:
    LinearModel() = default;
    LinearModel(std::size_t vocab_size, std::vector<std::string> taxonomy,
                std::uint64_t vocab_fingerprint);

    std::size_t vocab_size() const { return vocab_size_; }
    const std::vector<std::string>& taxonomy() const { return taxonomy_; }
    std::uint64_t vocab_fingerprint() const { return vocab_fingerprint_; }

    std::vector<double>& parameters() { return params_; }          // weights then biases
    const std::vector<double>& parameters() const { return params_; }
    std::vector<double>& idf() { return idf_; }
    const std::vector<double>& idf() const { return idf_; }

    // L2-normalized TF-IDF features over the example's non-special
    // token ids.
    std::vector<std::pair<int, double>> features(const textprep::EncodedExample& ex) const;

    std::vector<double> logits(const textprep::EncodedExample& ex) const;
    double batch_loss(const std::vector<textprep::EncodedExample>& batch,
                      const FocalLossParams& params) const;
    std::vector<double> batch_gradient(const std::vector<textprep::EncodedExample>& batch,
                                       const FocalLossParams& params) const;

    void save(const std::string& path) const;

private:
    std::size_t vocab_size_ = 0;
    std::vector<std::string> taxonomy_;
    std::uint64_t vocab_fingerprint_ = 0;
    std::vector<double> idf_;     // vocab_size
    std::vector<double> params_;  // C*V weights, then C biases

    friend LinearModel load_linear(const std::string& path);
};

LinearModel train_linear(const std::vector<textprep::EncodedExample>& train,
                         const std::vector<textprep::EncodedExample>& val, const TrainConfig& cfg,
                         std::size_t vocab_size, const std::vector<std::string>& taxonomy,
                         std::uint64_t vocab_fingerprint, TrainTrace* trace = nullptr);

// --------------------------------------------------------------------
// Sentence-pair transformer encoder backend.

struct EncoderDims {
    int dim = 64;
    int layers = 2;
    int heads = 2;
    int ffn = 128;
    int max_positions = 512;

    void validate() const;  // positive, dim divisible by heads
};

class PairEncoderModel {
public:
    PairEncoderModel() = default;
    // Parameters initialized from N(0, 0.02) with a deterministic
    // Box-Muller draw; biases zero, layer-norm gains one.
    PairEncoderModel(EncoderDims dims, std::size_t vocab_size, std::vector<std::string> taxonomy,
                     std::uint64_t vocab_fingerprint, std::uint64_t init_seed);

    const EncoderDims& dims() const { return dims_; }
    std::size_t vocab_size() const { return vocab_size_; }
    const std::vector<std::string>& taxonomy() const { return taxonomy_; }
    std::uint64_t vocab_fingerprint() const { return vocab_fingerprint_; }

    std::vector<double>& parameters() { return params_; }
    const std::vector<double>& parameters() const { return params_; }

    // CLS-pooled logits over the taxonomy. Throws std::invalid_argument
    // on token ids outside the vocabulary or sequences longer than the
    // position table.
    std::vector<double> logits(const textprep::EncodedExample& ex) const;
    double batch_loss(const std::vector<textprep::EncodedExample>& batch,
                      const FocalLossParams& params) const;
    std::vector<double> batch_gradient(const std::vector<textprep::EncodedExample>& batch,
                                       const FocalLossParams& params) const;

    void save(const std::string& path) const;

private:
    EncoderDims dims_;
    std::size_t vocab_size_ = 0;
    std::vector<std::string> taxonomy_;
    std::uint64_t vocab_fingerprint_ = 0;
    std::vector<double> params_;

    friend PairEncoderModel load_encoder(const std::string& path);
};

PairEncoderModel train_pair_encoder(const std::vector<textprep::EncodedExample>& train,
                                    const std::vector<textprep::EncodedExample>& val,
                                    const TrainConfig& cfg, const EncoderDims& dims,
                                    std::size_t vocab_size, const std::vector<std::string>& taxonomy,
                                    std::uint64_t vocab_fingerprint, TrainTrace* trace = nullptr);

// --------------------------------------------------------------------

PredictionSet predict(const LinearModel& model, const textprep::EncodedExample& ex,
                      std::string url = {});
PredictionSet predict(const PairEncoderModel& model, const textprep::EncodedExample& ex,
                      std::string url = {});

// Checkpoint files are self-describing and round-trip bit-exactly:
// magic, format version, backend kind, dimensions, taxonomy, vocabulary
// reference (size + fingerprint), parameters as raw 64-bit floats.
enum class BackendKind { linear, encoder };
BackendKind checkpoint_kind(const std::string& path);
LinearModel load_linear(const std::string& path);
PairEncoderModel load_encoder(const std::string& path);

// Shared by training and tuning: micro F1 of unfiltered top-k
// selections against binary truth rows.
double micro_f1_at_k(const std::vector<std::vector<double>>& scores,
                     const std::vector<std::vector<std::uint8_t>>& truth,
                     const std::vector<std::string>& taxonomy, std::size_t k);

}  // namespace repotopics::models
