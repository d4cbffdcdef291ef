#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "rxfeat/matcher.hpp"

namespace rxfeat {

inline const std::vector<std::size_t> kDefaultHiddenDims = {256, 128, 64, 32};

/// Five dense layers: four rectifier hidden layers and a softmax output.
/// weights[l] has shape (layer_dims[l+1] x layer_dims[l]).
struct MLPModel {
  std::vector<std::size_t> layer_dims;
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
  std::vector<std::string> labels;
  std::vector<std::string> input_pattern_ids;
  std::string corpus_fingerprint;
  std::uint64_t seed = 0;

  std::size_t input_dim() const { return layer_dims.front(); }
  std::size_t class_count() const { return layer_dims.back(); }
};

/// He-normal weights (variance 2 / fan_in), zero biases. Input ids default
/// to "f0".."f{d-1}" until bind_inputs is called.
MLPModel init_model(std::size_t input_dim, const std::vector<std::string>& labels,
                    std::uint64_t seed,
                    const std::vector<std::size_t>& hidden_dims = kDefaultHiddenDims);

/// Ties the model's input layout to a feature matrix layout.
void bind_inputs(MLPModel& model, const std::vector<std::string>& pattern_ids,
                 const std::string& corpus_fingerprint);

/// Rows of `features` are samples; returns one probability row per sample.
Eigen::MatrixXd forward(const MLPModel& model, const Eigen::MatrixXd& features);

std::vector<std::size_t> predict(const MLPModel& model, const Eigen::MatrixXd& features);

struct Gradients {
  std::vector<Eigen::MatrixXd> weights;
  std::vector<Eigen::VectorXd> biases;
};

struct LossAndGradients {
  double loss = 0.0;
  Gradients grads;
};

/// Mean cross-entropy + l2_penalty * sum of squared weights (biases excluded).
LossAndGradients loss_and_gradients(const MLPModel& model, const Eigen::MatrixXd& features,
                                    std::span<const std::size_t> labels, double l2_penalty);

struct TrainConfig {
  std::size_t epochs = 60;
  std::size_t batch_size = 32;
  double learning_rate = 1e-3;
  double l2_penalty = 1e-4;
  std::uint64_t seed = 0;

  void validate() const;
};

struct TrainResult {
  MLPModel model;
  std::vector<double> loss_history;  // full training-set loss after each epoch
};

/// Adam (beta1 0.9, beta2 0.999, eps 1e-8) over seeded mini-batches.
TrainResult train(MLPModel model, const Eigen::MatrixXd& features,
                  std::span<const std::size_t> labels, const TrainConfig& config);

/// Checks the matrix layout against the model before training.
TrainResult train(MLPModel model, const FeatureMatrix& matrix,
                  std::span<const std::size_t> labels, const TrainConfig& config);

Eigen::MatrixXd to_eigen(const FeatureMatrix& matrix);

/// Throws Error(FingerprintMismatch) when layouts differ.
void check_layout(const MLPModel& model, const FeatureMatrix& matrix);

nlohmann::json model_to_json(const MLPModel& model);
MLPModel model_from_json(const nlohmann::json& j);

}  // namespace rxfeat
