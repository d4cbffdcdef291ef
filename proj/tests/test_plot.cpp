#include <doctest.h>

#include <regex>
#include <set>

#include "rxfeat/error.hpp"
#include "rxfeat/plot.hpp"

using namespace rxfeat;

namespace {

std::size_t count(const std::string& s, const std::string& needle) {
  std::size_t n = 0;
  for (auto p = s.find(needle); p != std::string::npos; p = s.find(needle, p + 1)) ++n;
  return n;
}

std::set<std::string> circle_fills(const std::string& svg) {
  std::set<std::string> out;
  const std::regex re("<circle[^>]*fill=\"([^\"]+)\"");
  for (std::sregex_iterator it(svg.begin(), svg.end(), re), end; it != end; ++it)
    out.insert((*it)[1]);
  return out;
}

Embedding2D grid(int n) {
  Embedding2D e;
  for (int i = 0; i < n; ++i) e.points.push_back({static_cast<double>(i % 10), static_cast<double>(i / 10)});
  return e;
}

}  // namespace

TEST_CASE("scatter draws one circle per point, one colour per label") {
  const auto e = grid(100);
  std::vector<std::optional<std::string>> labels;
  for (int i = 0; i < 100; ++i) labels.push_back("c" + std::to_string(i % 4));
  const auto svg = render_scatter_svg(e, labels, "demo");
  CHECK(count(svg, "<circle") == 100);
  CHECK(circle_fills(svg).size() == 4);
  CHECK(svg.find("demo") != std::string::npos);
  CHECK(svg.rfind("<svg", 0) == 0);
}

TEST_CASE("scatter without labels uses a single colour") {
  const auto svg = render_scatter_svg(grid(30));
  CHECK(count(svg, "<circle") == 30);
  CHECK(circle_fills(svg) == std::set<std::string>{kPalette[0]});
}

TEST_CASE("more than twenty labels fall back to the shared colour") {
  const auto e = grid(25);
  std::vector<std::optional<std::string>> labels;
  for (int i = 0; i < 25; ++i) labels.push_back("L" + std::to_string(100 + i));
  const auto fills = circle_fills(render_scatter_svg(e, labels));
  CHECK(fills.size() == 21);
  CHECK(fills.count(kOtherColor) == 1);
}

TEST_CASE("scatter output is byte-identical across calls") {
  const auto e = grid(50);
  CHECK(render_scatter_svg(e, {}, "t") == render_scatter_svg(e, {}, "t"));
}

TEST_CASE("scatter title is escaped") {
  const auto svg = render_scatter_svg(grid(3), {}, "a<b&c");
  CHECK(svg.find("a&lt;b&amp;c") != std::string::npos);
}

TEST_CASE("scatter errors") {
  CHECK_THROWS_AS(render_scatter_svg(Embedding2D{}), Error);
  CHECK_THROWS_AS(render_scatter_svg(grid(3), {std::string("x")}), Error);
}
