#include "rxfeat/model.hpp"

#include <cmath>
#include <numeric>

#include "rxfeat/error.hpp"
#include "rxfeat/rng.hpp"

namespace rxfeat {

using nlohmann::json;

namespace {

constexpr double kBeta1 = 0.9;
constexpr double kBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;

struct Activations {
  std::vector<Eigen::MatrixXd> inputs;  // A_l, features x batch
  std::vector<Eigen::MatrixXd> pre;     // Z_l
  Eigen::MatrixXd log_probs;            // classes x batch
};

Activations run_forward(const MLPModel& m, const Eigen::MatrixXd& features) {
  if (static_cast<std::size_t>(features.cols()) != m.input_dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "feature dimension mismatch: expected " + std::to_string(m.input_dim()) +
                    ", got " + std::to_string(features.cols()));
  }
  Activations act;
  const std::size_t layers = m.weights.size();
  act.inputs.reserve(layers);
  act.pre.reserve(layers);
  act.inputs.push_back(features.transpose());
  for (std::size_t l = 0; l < layers; ++l) {
    Eigen::MatrixXd z = m.weights[l] * act.inputs.back();
    z.colwise() += m.biases[l];
    act.pre.push_back(z);
    if (l + 1 < layers) act.inputs.push_back(z.cwiseMax(0.0));
  }
  // Column-wise log-softmax with max subtraction.
  const Eigen::MatrixXd& logits = act.pre.back();
  act.log_probs.resize(logits.rows(), logits.cols());
  for (Eigen::Index c = 0; c < logits.cols(); ++c) {
    const double mx = logits.col(c).maxCoeff();
    const double lse = mx + std::log((logits.col(c).array() - mx).exp().sum());
    act.log_probs.col(c) = logits.col(c).array() - lse;
  }
  return act;
}

void check_labels(const MLPModel& m, std::span<const std::size_t> labels, Eigen::Index rows) {
  if (labels.empty()) throw Error(ErrorCode::InvalidArgument, "empty batch");
  if (static_cast<Eigen::Index>(labels.size()) != rows) {
    throw Error(ErrorCode::LengthMismatch, "labels and feature rows differ in count");
  }
  for (std::size_t y : labels) {
    if (y >= m.class_count()) {
      throw Error(ErrorCode::LabelOutOfRange, "label " + std::to_string(y) + " out of range for " +
                                                  std::to_string(m.class_count()) + " classes");
    }
  }
}

}  // namespace

MLPModel init_model(std::size_t input_dim, const std::vector<std::string>& labels,
                    std::uint64_t seed, const std::vector<std::size_t>& hidden_dims) {
  if (input_dim == 0) throw Error(ErrorCode::InvalidArgument, "input_dim must be >= 1");
  if (labels.size() < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 labels");
  if (hidden_dims.size() != 4 ||
      std::any_of(hidden_dims.begin(), hidden_dims.end(), [](std::size_t h) { return h == 0; })) {
    throw Error(ErrorCode::InvalidArgument, "need exactly 4 positive hidden layer sizes");
  }
  MLPModel m;
  m.layer_dims.push_back(input_dim);
  m.layer_dims.insert(m.layer_dims.end(), hidden_dims.begin(), hidden_dims.end());
  m.layer_dims.push_back(labels.size());
  m.labels = labels;
  m.seed = seed;
  for (std::size_t i = 0; i < input_dim; ++i) m.input_pattern_ids.push_back("f" + std::to_string(i));

  Rng rng(seed);
  for (std::size_t l = 0; l + 1 < m.layer_dims.size(); ++l) {
    const auto fan_in = static_cast<Eigen::Index>(m.layer_dims[l]);
    const auto fan_out = static_cast<Eigen::Index>(m.layer_dims[l + 1]);
    const double scale = std::sqrt(2.0 / static_cast<double>(fan_in));
    Eigen::MatrixXd w(fan_out, fan_in);
    for (Eigen::Index r = 0; r < fan_out; ++r)
      for (Eigen::Index c = 0; c < fan_in; ++c) w(r, c) = scale * rng.normal();
    m.weights.push_back(std::move(w));
    m.biases.push_back(Eigen::VectorXd::Zero(fan_out));
  }
  return m;
}

void bind_inputs(MLPModel& model, const std::vector<std::string>& pattern_ids,
                 const std::string& corpus_fingerprint) {
  if (pattern_ids.size() != model.input_dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "model expects " + std::to_string(model.input_dim()) + " inputs, layout has " +
                    std::to_string(pattern_ids.size()));
  }
  model.input_pattern_ids = pattern_ids;
  model.corpus_fingerprint = corpus_fingerprint;
}

Eigen::MatrixXd forward(const MLPModel& model, const Eigen::MatrixXd& features) {
  return run_forward(model, features).log_probs.array().exp().matrix().transpose();
}

std::vector<std::size_t> predict(const MLPModel& model, const Eigen::MatrixXd& features) {
  const Eigen::MatrixXd lp = run_forward(model, features).log_probs;
  std::vector<std::size_t> out(static_cast<std::size_t>(lp.cols()));
  for (Eigen::Index c = 0; c < lp.cols(); ++c) {
    Eigen::Index best = 0;
    lp.col(c).maxCoeff(&best);
    out[static_cast<std::size_t>(c)] = static_cast<std::size_t>(best);
  }
  return out;
}

LossAndGradients loss_and_gradients(const MLPModel& model, const Eigen::MatrixXd& features,
                                    std::span<const std::size_t> labels, double l2_penalty) {
  check_labels(model, labels, features.rows());
  const Activations act = run_forward(model, features);
  const auto n = static_cast<double>(labels.size());
  const std::size_t layers = model.weights.size();

  LossAndGradients out;
  double ce = 0.0;
  Eigen::MatrixXd delta = act.log_probs.array().exp().matrix();  // P
  for (std::size_t i = 0; i < labels.size(); ++i) {
    const auto col = static_cast<Eigen::Index>(i);
    const auto y = static_cast<Eigen::Index>(labels[i]);
    ce -= act.log_probs(y, col);
    delta(y, col) -= 1.0;
  }
  delta /= n;
  double penalty = 0.0;
  for (const auto& w : model.weights) penalty += w.squaredNorm();
  out.loss = ce / n + l2_penalty * penalty;

  out.grads.weights.resize(layers);
  out.grads.biases.resize(layers);
  for (std::size_t l = layers; l-- > 0;) {
    out.grads.weights[l] = delta * act.inputs[l].transpose() + 2.0 * l2_penalty * model.weights[l];
    out.grads.biases[l] = delta.rowwise().sum();
    if (l > 0) {
      Eigen::MatrixXd back = model.weights[l].transpose() * delta;
      delta = back.cwiseProduct((act.pre[l - 1].array() > 0.0).cast<double>().matrix());
    }
  }
  return out;
}

void TrainConfig::validate() const {
  if (epochs == 0 || batch_size == 0 || !(learning_rate > 0.0) || !(l2_penalty >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument,
                "train config needs positive epochs, batch_size, learning_rate and l2_penalty >= 0");
  }
}

TrainResult train(MLPModel model, const Eigen::MatrixXd& features,
                  std::span<const std::size_t> labels, const TrainConfig& config) {
  config.validate();
  check_labels(model, labels, features.rows());
  if (static_cast<std::size_t>(features.cols()) != model.input_dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "feature dimension mismatch: expected " + std::to_string(model.input_dim()) +
                    ", got " + std::to_string(features.cols()));
  }
  const std::size_t layers = model.weights.size();
  Gradients m1, m2;
  for (std::size_t l = 0; l < layers; ++l) {
    m1.weights.push_back(Eigen::MatrixXd::Zero(model.weights[l].rows(), model.weights[l].cols()));
    m2.weights.push_back(m1.weights.back());
    m1.biases.push_back(Eigen::VectorXd::Zero(model.biases[l].size()));
    m2.biases.push_back(m1.biases.back());
  }

  const std::size_t n = labels.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng rng(config.seed);
  TrainResult out;
  std::uint64_t step = 0;
  Eigen::MatrixXd batch;
  std::vector<std::size_t> batch_labels;

  auto adam = [&](auto& param, auto& g, auto& m, auto& v, double c1, double c2) {
    m = kBeta1 * m + (1.0 - kBeta1) * g;
    v = kBeta2 * v + (1.0 - kBeta2) * g.cwiseAbs2();
    param.array() -= config.learning_rate * (m.array() / c1) / ((v.array() / c2).sqrt() + kAdamEps);
  };

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    rng.shuffle(std::span<std::size_t>(order));
    for (std::size_t start = 0; start < n; start += config.batch_size) {
      const std::size_t end = std::min(n, start + config.batch_size);
      batch.resize(static_cast<Eigen::Index>(end - start), features.cols());
      batch_labels.clear();
      for (std::size_t k = start; k < end; ++k) {
        batch.row(static_cast<Eigen::Index>(k - start)) = features.row(static_cast<Eigen::Index>(order[k]));
        batch_labels.push_back(labels[order[k]]);
      }
      auto lg = loss_and_gradients(model, batch, batch_labels, config.l2_penalty);
      ++step;
      const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(step));
      for (std::size_t l = 0; l < layers; ++l) {
        adam(model.weights[l], lg.grads.weights[l], m1.weights[l], m2.weights[l], c1, c2);
        adam(model.biases[l], lg.grads.biases[l], m1.biases[l], m2.biases[l], c1, c2);
      }
    }
    out.loss_history.push_back(loss_and_gradients(model, features, labels, config.l2_penalty).loss);
  }
  out.model = std::move(model);
  return out;
}

Eigen::MatrixXd to_eigen(const FeatureMatrix& matrix) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(matrix.rows.size()),
                    static_cast<Eigen::Index>(matrix.dim()));
  for (std::size_t r = 0; r < matrix.rows.size(); ++r) {
    if (matrix.rows[r].values.size() != matrix.dim()) {
      throw Error(ErrorCode::DimensionMismatch, "ragged feature matrix at row " + std::to_string(r));
    }
    for (std::size_t c = 0; c < matrix.dim(); ++c)
      x(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = matrix.rows[r].values[c];
  }
  return x;
}

void check_layout(const MLPModel& model, const FeatureMatrix& matrix) {
  if (matrix.corpus_fingerprint != model.corpus_fingerprint) {
    throw Error(ErrorCode::FingerprintMismatch,
                "corpus fingerprint mismatch: model " + model.corpus_fingerprint + ", features " +
                    matrix.corpus_fingerprint);
  }
  if (matrix.pattern_ids != model.input_pattern_ids) {
    throw Error(ErrorCode::FingerprintMismatch, "feature pattern_ids differ from model inputs");
  }
}

TrainResult train(MLPModel model, const FeatureMatrix& matrix,
                  std::span<const std::size_t> labels, const TrainConfig& config) {
  if (matrix.dim() != model.input_dim()) {
    throw Error(ErrorCode::DimensionMismatch,
                "feature dimension mismatch: expected " + std::to_string(model.input_dim()) +
                    ", got " + std::to_string(matrix.dim()));
  }
  check_layout(model, matrix);
  if (matrix.rows.size() != labels.size()) {
    throw Error(ErrorCode::LengthMismatch, "matrix rows and labels differ in count");
  }
  return train(std::move(model), to_eigen(matrix), labels, config);
}

json model_to_json(const MLPModel& m) {
  json weights = json::array();
  for (const auto& w : m.weights) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < w.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < w.cols(); ++c) row.push_back(w(r, c));
      rows.push_back(std::move(row));
    }
    weights.push_back(std::move(rows));
  }
  json biases = json::array();
  for (const auto& b : m.biases) biases.push_back(std::vector<double>(b.data(), b.data() + b.size()));
  return json{{"layer_dims", m.layer_dims},
              {"weights", std::move(weights)},
              {"biases", std::move(biases)},
              {"labels", m.labels},
              {"input_pattern_ids", m.input_pattern_ids},
              {"corpus_fingerprint", m.corpus_fingerprint},
              {"seed", m.seed}};
}

MLPModel model_from_json(const json& j) {
  MLPModel m;
  try {
    m.layer_dims = j.at("layer_dims").get<std::vector<std::size_t>>();
    m.labels = j.at("labels").get<std::vector<std::string>>();
    m.input_pattern_ids = j.at("input_pattern_ids").get<std::vector<std::string>>();
    m.corpus_fingerprint = j.at("corpus_fingerprint").get<std::string>();
    m.seed = j.at("seed").get<std::uint64_t>();
    const auto& weights = j.at("weights");
    const auto& biases = j.at("biases");
    if (m.layer_dims.size() < 2 || weights.size() != m.layer_dims.size() - 1 ||
        biases.size() != weights.size()) {
      throw Error(ErrorCode::Format, "model layer count inconsistent");
    }
    for (std::size_t l = 0; l < weights.size(); ++l) {
      const auto rows = static_cast<Eigen::Index>(m.layer_dims[l + 1]);
      const auto cols = static_cast<Eigen::Index>(m.layer_dims[l]);
      if (static_cast<Eigen::Index>(weights[l].size()) != rows) {
        throw Error(ErrorCode::Format, "weight matrix " + std::to_string(l) + " has wrong row count");
      }
      Eigen::MatrixXd w(rows, cols);
      for (Eigen::Index r = 0; r < rows; ++r) {
        const auto& row = weights[l][static_cast<std::size_t>(r)];
        if (static_cast<Eigen::Index>(row.size()) != cols) {
          throw Error(ErrorCode::Format, "weight matrix " + std::to_string(l) + " has wrong column count");
        }
        for (Eigen::Index c = 0; c < cols; ++c) w(r, c) = row[static_cast<std::size_t>(c)].get<double>();
      }
      auto b = biases[l].get<std::vector<double>>();
      if (static_cast<Eigen::Index>(b.size()) != rows) {
        throw Error(ErrorCode::Format, "bias vector " + std::to_string(l) + " has wrong length");
      }
      m.weights.push_back(std::move(w));
      m.biases.push_back(Eigen::Map<Eigen::VectorXd>(b.data(), rows));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Format, std::string("bad model JSON: ") + e.what());
  }
  if (m.labels.size() != m.layer_dims.back() || m.input_pattern_ids.size() != m.layer_dims.front()) {
    throw Error(ErrorCode::Format, "model labels/inputs inconsistent with layer_dims");
  }
  return m;
}

}  // namespace rxfeat
