#include <doctest.h>

#include <cmath>
#include <random>

#include "rxfeat/error.hpp"
#include "rxfeat/model.hpp"

using namespace rxfeat;

namespace {

const std::vector<std::size_t> kSmall = {5, 4, 3, 3};

// Plain-loop forward pass, independent of the Eigen path.
std::vector<double> naive_forward(const MLPModel& m, std::vector<double> a) {
  for (std::size_t l = 0; l < m.weights.size(); ++l) {
    const auto& W = m.weights[l];
    std::vector<double> z(static_cast<std::size_t>(W.rows()));
    for (Eigen::Index r = 0; r < W.rows(); ++r) {
      double s = m.biases[l](r);
      for (Eigen::Index c = 0; c < W.cols(); ++c) s += W(r, c) * a[static_cast<std::size_t>(c)];
      z[static_cast<std::size_t>(r)] = s;
    }
    if (l + 1 < m.weights.size()) {
      for (auto& v : z) v = v > 0 ? v : 0;
    } else {
      double mx = z[0];
      for (double v : z) mx = std::max(mx, v);
      double sum = 0;
      for (auto& v : z) sum += (v = std::exp(v - mx));
      for (auto& v : z) v /= sum;
    }
    a = z;
  }
  return a;
}

double rel_err(double a, double b) {
  return std::abs(a - b) / std::max({std::abs(a), std::abs(b), 1e-6});
}

// Central differences over every parameter; returns the worst relative error.
double gradient_check(MLPModel m, const Eigen::MatrixXd& X, const std::vector<std::size_t>& y,
                      double l2) {
  const auto analytic = loss_and_gradients(m, X, y, l2).grads;
  const double h = 1e-5;
  double worst = 0;
  auto probe = [&](double& p, double g) {
    const double orig = p;
    p = orig + h;
    const double up = loss_and_gradients(m, X, y, l2).loss;
    p = orig - h;
    const double down = loss_and_gradients(m, X, y, l2).loss;
    p = orig;
    const double num = (up - down) / (2 * h);
    // Skip parameters sitting on a ReLU kink, where the derivative is undefined.
    if (std::abs(num) < 1e-9 && std::abs(g) < 1e-9) return;
    worst = std::max(worst, rel_err(g, num));
  };
  for (std::size_t l = 0; l < m.weights.size(); ++l) {
    for (Eigen::Index i = 0; i < m.weights[l].size(); ++i)
      probe(m.weights[l].data()[i], analytic.weights[l].data()[i]);
    for (Eigen::Index i = 0; i < m.biases[l].size(); ++i)
      probe(m.biases[l].data()[i], analytic.biases[l].data()[i]);
  }
  return worst;
}

}  // namespace

TEST_CASE("init_model shapes and determinism") {
  const auto m = init_model(10, {"a", "b", "c"}, 1);
  CHECK(m.layer_dims == std::vector<std::size_t>{10, 256, 128, 64, 32, 3});
  REQUIRE(m.weights.size() == 5);
  CHECK(m.weights[0].rows() == 256);
  CHECK(m.weights[0].cols() == 10);
  CHECK(m.weights[4].rows() == 3);
  for (const auto& b : m.biases) CHECK(b.isZero());
  const auto again = init_model(10, {"a", "b", "c"}, 1);
  for (std::size_t l = 0; l < 5; ++l) CHECK(m.weights[l] == again.weights[l]);
  CHECK_FALSE(m.weights[0] == init_model(10, {"a", "b", "c"}, 2).weights[0]);
  CHECK(m.input_pattern_ids.front() == "f0");
}

TEST_CASE("init_model first-layer variance is about 2 / fan_in") {
  const auto m = init_model(10, {"a", "b"}, 11);
  const auto& W = m.weights[0];  // 2560 draws
  const double mean = W.mean();
  const double var = (W.array() - mean).square().sum() / static_cast<double>(W.size() - 1);
  CHECK(std::abs(var - 0.2) / 0.2 < 0.2);
}

TEST_CASE("init_model argument errors") {
  CHECK_THROWS_AS(init_model(0, {"a", "b"}, 0), Error);
  CHECK_THROWS_AS(init_model(3, {"a"}, 0), Error);
  CHECK_THROWS_AS(init_model(3, {"a", "b"}, 0, {4, 4}), Error);
}

TEST_CASE("forward") {
  SUBCASE("zero weights give uniform probabilities") {
    auto m = init_model(4, {"a", "b", "c"}, 3, kSmall);
    for (auto& W : m.weights) W.setZero();
    const auto P = forward(m, Eigen::MatrixXd::Random(6, 4));
    CHECK((P.array() - 1.0 / 3).abs().maxCoeff() < 1e-12);
  }
  SUBCASE("rows sum to one and match the plain-loop oracle") {
    const auto m = init_model(7, {"a", "b", "c", "d"}, 5, kSmall);
    std::mt19937_64 g(1);
    std::uniform_real_distribution<double> u(0, 1);
    Eigen::MatrixXd X(20, 7);
    for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = u(g);
    const auto P = forward(m, X);
    for (Eigen::Index r = 0; r < P.rows(); ++r) {
      CHECK(std::abs(P.row(r).sum() - 1.0) < 1e-9);
      std::vector<double> x(7);
      for (int c = 0; c < 7; ++c) x[static_cast<std::size_t>(c)] = X(r, c);
      const auto expect = naive_forward(m, x);
      for (int c = 0; c < 4; ++c) CHECK(std::abs(P(r, c) - expect[static_cast<std::size_t>(c)]) < 1e-12);
    }
  }
  SUBCASE("huge logit gap stays finite") {
    auto m = init_model(1, {"a", "b"}, 3, {1, 1, 1, 1});
    for (auto& W : m.weights) W.setOnes();
    m.weights[4](0, 0) = 1000;
    m.weights[4](1, 0) = 0;
    Eigen::MatrixXd X(1, 1);
    X << 1.0;
    const auto P = forward(m, X);
    CHECK(P.allFinite());
    CHECK(P(0, 0) == doctest::Approx(1.0));
    CHECK(P(0, 1) >= 0.0);
  }
  SUBCASE("wrong width") {
    const auto m = init_model(3, {"a", "b"}, 1, kSmall);
    CHECK_THROWS_AS(forward(m, Eigen::MatrixXd::Zero(2, 4)), Error);
  }
}

TEST_CASE("loss values") {
  SUBCASE("uniform prediction gives ln k") {
    auto m = init_model(3, {"a", "b", "c", "d", "e"}, 3, kSmall);
    for (auto& W : m.weights) W.setZero();
    const std::vector<std::size_t> y = {0, 4, 2};
    CHECK(loss_and_gradients(m, Eigen::MatrixXd::Ones(3, 3), y, 0.0).loss ==
          doctest::Approx(std::log(5.0)).epsilon(1e-12));
  }
  SUBCASE("confident and correct gives near-zero loss") {
    auto m = init_model(1, {"a", "b"}, 3, {1, 1, 1, 1});
    for (auto& W : m.weights) W.setOnes();
    m.weights[4](0, 0) = 50;
    m.weights[4](1, 0) = 0;
    Eigen::MatrixXd X(1, 1);
    X << 1.0;
    const std::vector<std::size_t> y = {0};
    CHECK(loss_and_gradients(m, X, y, 0.0).loss < 1e-6);
  }
  SUBCASE("l2 adds the squared weight norm, biases excluded") {
    auto m = init_model(3, {"a", "b"}, 9, kSmall);
    for (auto& b : m.biases) b.setConstant(5.0);
    const Eigen::MatrixXd X = Eigen::MatrixXd::Ones(2, 3);
    const std::vector<std::size_t> y = {0, 1};
    double sq = 0;
    for (const auto& W : m.weights) sq += W.squaredNorm();
    CHECK(loss_and_gradients(m, X, y, 0.1).loss - loss_and_gradients(m, X, y, 0.0).loss ==
          doctest::Approx(0.1 * sq).epsilon(1e-10));
  }
  SUBCASE("label out of range") {
    const auto m = init_model(2, {"a", "b"}, 1, kSmall);
    const std::vector<std::size_t> y = {2};
    CHECK_THROWS_AS(loss_and_gradients(m, Eigen::MatrixXd::Ones(1, 2), y, 0.0), Error);
  }
}

TEST_CASE("analytic gradients agree with central differences") {
  std::mt19937_64 g(17);
  std::uniform_real_distribution<double> u(0, 1);
  for (int trial = 0; trial < 10; ++trial) {
    const std::size_t d = 2 + static_cast<std::size_t>(trial % 5);
    const std::size_t k = 2 + static_cast<std::size_t>(trial % 2);
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < k; ++i) labels.push_back("c" + std::to_string(i));
    auto m = init_model(d, labels, static_cast<std::uint64_t>(100 + trial), kSmall);
    // Nonzero biases keep pre-activations off the rectifier kink at 0.
    for (auto& b : m.biases)
      for (Eigen::Index i = 0; i < b.size(); ++i) b(i) = u(g) - 0.5;
    Eigen::MatrixXd X(8, static_cast<Eigen::Index>(d));
    for (Eigen::Index i = 0; i < X.size(); ++i) X.data()[i] = u(g);
    std::vector<std::size_t> y(8);
    for (auto& v : y) v = static_cast<std::size_t>(g() % k);
    CHECK(gradient_check(m, X, y, 1e-3) < 1e-4);
  }
}

TEST_CASE("training learns XOR") {
  auto m = init_model(2, {"zero", "one"}, 4, {8, 8, 8, 8});
  Eigen::MatrixXd X(4, 2);
  X << 0, 0, 0, 1, 1, 0, 1, 1;
  const std::vector<std::size_t> y = {0, 1, 1, 0};
  TrainConfig cfg;
  cfg.epochs = 2000;
  cfg.batch_size = 4;
  cfg.learning_rate = 0.01;
  cfg.l2_penalty = 0.0;
  cfg.seed = 1;
  const auto r = train(m, X, y, cfg);
  CHECK(predict(r.model, X) == y);
  CHECK(r.loss_history.size() == 2000);
  CHECK(r.loss_history.back() < r.loss_history.front());
}

TEST_CASE("training is deterministic for fixed seeds") {
  const auto m = init_model(3, {"a", "b", "c"}, 8, kSmall);
  Eigen::MatrixXd X = Eigen::MatrixXd::Random(30, 3);
  std::vector<std::size_t> y(30);
  for (std::size_t i = 0; i < 30; ++i) y[i] = i % 3;
  TrainConfig cfg;
  cfg.epochs = 5;
  cfg.batch_size = 7;
  cfg.seed = 3;
  const auto a = train(m, X, y, cfg);
  const auto b = train(m, X, y, cfg);
  CHECK(a.loss_history == b.loss_history);
  for (std::size_t l = 0; l < a.model.weights.size(); ++l) CHECK(a.model.weights[l] == b.model.weights[l]);
}

TEST_CASE("train config validation") {
  TrainConfig cfg;
  cfg.epochs = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.batch_size = 0;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.learning_rate = -1;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg = {};
  cfg.l2_penalty = -1;
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("train on a feature matrix checks the layout") {
  FeatureMatrix fm;
  fm.rows = {FeatureVector{{0.0, 1.0}, 1}, FeatureVector{{1.0, 0.0}, 1}};
  fm.sample_ids = {"a", "b"};
  fm.pattern_ids = {"p0", "p1"};
  fm.corpus_fingerprint = "abc";
  auto m = init_model(2, {"x", "y"}, 1, kSmall);
  bind_inputs(m, {"p0", "p1"}, "abc");
  TrainConfig cfg;
  cfg.epochs = 1;
  const std::vector<std::size_t> y = {0, 1};
  CHECK_NOTHROW(train(m, fm, y, cfg));
  fm.corpus_fingerprint = "abd";
  try {
    train(m, fm, y, cfg);
    FAIL("no throw");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::FingerprintMismatch);
  }
}

TEST_CASE("model json round-trips bit-exactly") {
  auto m = init_model(4, {"a", "b", "c"}, 21, kSmall);
  bind_inputs(m, {"w", "x", "y", "z"}, "fp");
  m.biases[2](1) = 0.1 + 0.2;
  const auto back = model_from_json(model_to_json(m));
  CHECK(back.layer_dims == m.layer_dims);
  CHECK(back.labels == m.labels);
  CHECK(back.input_pattern_ids == m.input_pattern_ids);
  CHECK(back.corpus_fingerprint == "fp");
  CHECK(back.seed == 21);
  for (std::size_t l = 0; l < m.weights.size(); ++l) {
    CHECK(back.weights[l] == m.weights[l]);
    CHECK(back.biases[l] == m.biases[l]);
  }
  CHECK(model_to_json(back).dump() == model_to_json(m).dump());
}

TEST_CASE("model_from_json rejects malformed documents") {
  auto j = model_to_json(init_model(2, {"a", "b"}, 1, kSmall));
  j["weights"][0][0].erase(0);
  CHECK_THROWS(model_from_json(j));
}
