#include <doctest.h>

#include <algorithm>
#include <random>

#include "rxfeat/error.hpp"
#include "rxfeat/metrics.hpp"

using namespace rxfeat;

TEST_CASE("evaluate worked example") {
  const auto r = evaluate({"A", "A", "B"}, {"A", "B", "B"});
  REQUIRE(r.classes.size() == 2);
  CHECK(r.classes[0].label == "A");
  CHECK(r.classes[0].precision == doctest::Approx(0.5));
  CHECK(r.classes[0].recall == doctest::Approx(1.0));
  CHECK(r.classes[0].f1 == doctest::Approx(2.0 / 3));
  CHECK(r.classes[1].precision == doctest::Approx(1.0));
  CHECK(r.classes[1].recall == doctest::Approx(0.5));
  CHECK(r.classes[1].f1 == doctest::Approx(2.0 / 3));
  CHECK(r.classes[0].support == 1);
  CHECK(r.classes[1].support == 2);
  CHECK(r.weighted_f1 == doctest::Approx(2.0 / 3).epsilon(1e-4));
  CHECK(r.accuracy == doctest::Approx(2.0 / 3));
  CHECK(r.confusion == std::vector<std::vector<std::size_t>>{{1, 0}, {1, 1}});
}

TEST_CASE("perfect predictions") {
  const std::vector<std::string> g = {"x", "y", "z", "x"};
  const auto r = evaluate(g, g);
  CHECK(r.weighted_f1 == 1.0);
  CHECK(r.accuracy == 1.0);
  for (const auto& c : r.classes) CHECK(c.f1 == 1.0);
}

TEST_CASE("class never predicted has zero precision, not NaN") {
  const auto r = evaluate({"A", "A"}, {"A", "B"});
  REQUIRE(r.classes.size() == 2);
  CHECK(r.classes[1].precision == 0.0);
  CHECK(r.classes[1].f1 == 0.0);
}

TEST_CASE("predicted-only class has zero support and zero weight") {
  const auto r = evaluate({"A", "Q"}, {"A", "A"});
  REQUIRE(r.classes.size() == 2);
  CHECK(r.classes[1].label == "Q");
  CHECK(r.classes[1].support == 0);
  CHECK(r.weighted_f1 == doctest::Approx(2.0 / 3));
}

TEST_CASE("evaluate errors") {
  CHECK_THROWS_AS(evaluate({"A"}, {"A", "B"}), Error);
  CHECK_THROWS_AS(evaluate({}, {}), Error);
}

TEST_CASE("metrics are invariant under a joint permutation") {
  std::mt19937_64 g(5);
  const std::vector<std::string> names = {"a", "b", "c", "d"};
  for (int t = 0; t < 30; ++t) {
    std::vector<std::string> p, q;
    for (int i = 0; i < 25; ++i) {
      p.push_back(names[g() % 4]);
      q.push_back(names[g() % 4]);
    }
    const auto r1 = evaluate(p, q);
    std::vector<std::size_t> order(p.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::shuffle(order.begin(), order.end(), g);
    std::vector<std::string> p2, q2;
    for (auto i : order) {
      p2.push_back(p[i]);
      q2.push_back(q[i]);
    }
    const auto r2 = evaluate(p2, q2);
    CHECK(r2.confusion == r1.confusion);
    CHECK(r2.weighted_f1 == doctest::Approx(r1.weighted_f1).epsilon(1e-12));
    CHECK(r2.weighted_f1 >= 0.0);
    CHECK(r2.weighted_f1 <= 1.0);
  }
}

TEST_CASE("report json and table") {
  const auto r = evaluate({"A", "A", "B"}, {"A", "B", "B"});
  const auto j = report_to_json(r);
  CHECK(j["weighted_f1"].get<double>() == doctest::Approx(2.0 / 3));
  CHECK(j["classes"].size() == 2);
  const auto table = render_report_table(r);
  CHECK(table.find("weighted") != std::string::npos);
  CHECK(table.find("A") != std::string::npos);
}
