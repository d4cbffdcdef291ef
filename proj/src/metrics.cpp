#include "rxfeat/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>

#include "rxfeat/error.hpp"

namespace rxfeat {

EvalReport evaluate(const std::vector<std::string>& predicted,
                    const std::vector<std::string>& gold) {
  if (predicted.size() != gold.size()) {
    throw Error(ErrorCode::LengthMismatch, "predicted has " + std::to_string(predicted.size()) +
                                               " labels, gold has " + std::to_string(gold.size()));
  }
  if (gold.empty()) throw Error(ErrorCode::InvalidArgument, "nothing to evaluate");

  std::set<std::string> names(gold.begin(), gold.end());
  names.insert(predicted.begin(), predicted.end());
  std::map<std::string, std::size_t> index;
  EvalReport r;
  for (const auto& n : names) {
    index.emplace(n, r.classes.size());
    r.classes.push_back({n});
  }
  const std::size_t k = r.classes.size();
  r.confusion.assign(k, std::vector<std::size_t>(k, 0));
  std::size_t correct = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    ++r.confusion[index[gold[i]]][index[predicted[i]]];
    correct += gold[i] == predicted[i] ? 1 : 0;
  }

  double weighted = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    std::size_t tp = r.confusion[c][c], row = 0, col = 0;
    for (std::size_t o = 0; o < k; ++o) {
      row += r.confusion[c][o];
      col += r.confusion[o][c];
    }
    auto& s = r.classes[c];
    s.support = row;
    s.precision = col == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(col);
    s.recall = row == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(row);
    s.f1 = (s.precision + s.recall) == 0.0
               ? 0.0
               : 2.0 * s.precision * s.recall / (s.precision + s.recall);
    weighted += s.f1 * static_cast<double>(s.support);
  }
  r.weighted_f1 = weighted / static_cast<double>(gold.size());
  r.accuracy = static_cast<double>(correct) / static_cast<double>(gold.size());
  return r;
}

nlohmann::json report_to_json(const EvalReport& r) {
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& c : r.classes) {
    classes.push_back({{"label", c.label},
                       {"precision", c.precision},
                       {"recall", c.recall},
                       {"f1", c.f1},
                       {"support", c.support}});
  }
  return {{"classes", classes},
          {"weighted_f1", r.weighted_f1},
          {"accuracy", r.accuracy},
          {"confusion", r.confusion},
          {"table", render_report_table(r)}};
}

std::string render_report_table(const EvalReport& r) {
  std::size_t width = 11;
  for (const auto& c : r.classes) width = std::max(width, c.label.size());
  std::string out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-*s %9s %9s %9s %8s\n", static_cast<int>(width), "class",
                "precision", "recall", "f1", "support");
  out += buf;
  for (const auto& c : r.classes) {
    std::snprintf(buf, sizeof buf, "%-*s %9.4f %9.4f %9.4f %8zu\n", static_cast<int>(width),
                  c.label.c_str(), c.precision, c.recall, c.f1, c.support);
    out += buf;
  }
  std::snprintf(buf, sizeof buf, "%-*s %29.4f\n", static_cast<int>(width), "weighted f1",
                r.weighted_f1);
  out += buf;
  return out;
}

}  // namespace rxfeat
