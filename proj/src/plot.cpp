#include "rxfeat/plot.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>

#include "rxfeat/error.hpp"

namespace rxfeat {

const std::vector<std::string> kPalette = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b", "#e377c2",
    "#7f7f7f", "#bcbd22", "#17becf", "#aec7e8", "#ffbb78", "#98df8a", "#ff9896",
    "#c5b0d5", "#c49c94", "#f7b6d2", "#c7c7c7", "#dbdb8d", "#9edae5"};

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kPad = 40.0;

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

std::string render_scatter_svg(const Embedding2D& embedding,
                               const std::vector<std::optional<std::string>>& labels,
                               const std::string& title) {
  const auto& pts = embedding.points;
  if (pts.empty()) throw Error(ErrorCode::InvalidArgument, "cannot plot an empty embedding");
  if (!labels.empty() && labels.size() != pts.size()) {
    throw Error(ErrorCode::LengthMismatch, "labels and points differ in length");
  }

  double lo_x = pts[0][0], hi_x = lo_x, lo_y = pts[0][1], hi_y = lo_y;
  for (const auto& p : pts) {
    lo_x = std::min(lo_x, p[0]);
    hi_x = std::max(hi_x, p[0]);
    lo_y = std::min(lo_y, p[1]);
    hi_y = std::max(hi_y, p[1]);
  }
  const double span_x = hi_x > lo_x ? hi_x - lo_x : 1.0;
  const double span_y = hi_y > lo_y ? hi_y - lo_y : 1.0;
  lo_x -= 0.05 * span_x;
  lo_y -= 0.05 * span_y;
  const double range_x = 1.1 * span_x;
  const double range_y = 1.1 * span_y;
  const double plot_w = kWidth - 2 * kPad;
  const double plot_h = kHeight - 2 * kPad;

  std::set<std::string> distinct;
  for (const auto& l : labels)
    if (l) distinct.insert(*l);
  std::map<std::string, std::string> color;
  std::size_t rank = 0;
  for (const auto& l : distinct) {
    color[l] = rank < kPalette.size() ? kPalette[rank] : kOtherColor;
    ++rank;
  }

  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%.0f\" height=\"%.0f\" "
                "viewBox=\"0 0 %.0f %.0f\">\n",
                kWidth, kHeight, kWidth, kHeight);
  out += buf;
  out += "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"#ffffff\"/>\n";
  std::snprintf(buf, sizeof buf,
                "<rect x=\"%.0f\" y=\"%.0f\" width=\"%.0f\" height=\"%.0f\" fill=\"none\" "
                "stroke=\"#000000\"/>\n",
                kPad, kPad, plot_w, plot_h);
  out += buf;
  if (!title.empty()) {
    std::snprintf(buf, sizeof buf, "<text x=\"%.0f\" y=\"24\" font-size=\"14\" text-anchor=\"middle\">",
                  kWidth / 2);
    out += buf;
    out += xml_escape(title) + "</text>\n";
  }
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double x = kPad + (pts[i][0] - lo_x) / range_x * plot_w;
    const double y = kHeight - kPad - (pts[i][1] - lo_y) / range_y * plot_h;
    const std::string& fill =
        (!labels.empty() && labels[i]) ? color[*labels[i]] : kPalette.front();
    std::snprintf(buf, sizeof buf,
                  "<circle cx=\"%.3f\" cy=\"%.3f\" r=\"3\" fill=\"%s\" fill-opacity=\"0.7\"/>\n", x,
                  y, fill.c_str());
    out += buf;
  }
  // Legend swatches are squares so circles stay one-per-point.
  double ly = kPad + 6;
  for (const auto& [label, fill] : color) {
    std::snprintf(buf, sizeof buf,
                  "<rect x=\"%.0f\" y=\"%.1f\" width=\"8\" height=\"8\" fill=\"%s\"/>"
                  "<text x=\"%.0f\" y=\"%.1f\" font-size=\"10\">",
                  kWidth - kPad - 110, ly, fill.c_str(), kWidth - kPad - 98, ly + 8);
    out += buf;
    out += xml_escape(label) + "</text>\n";
    ly += 12;
  }
  out += "</svg>\n";
  return out;
}

}  // namespace rxfeat
