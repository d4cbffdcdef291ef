#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

namespace rxfeat {

struct ClassScore {
  std::string label;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::size_t support = 0;

  friend bool operator==(const ClassScore&, const ClassScore&) = default;
};

struct EvalReport {
  std::vector<ClassScore> classes;  // sorted by label
  double weighted_f1 = 0.0;
  double accuracy = 0.0;
  /// confusion[gold][predicted], indexed like `classes`.
  std::vector<std::vector<std::size_t>> confusion;

  friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

/// Classes are the union of gold and predicted labels. Zero denominators
/// give 0; weighted F1 weights each class by its gold support.
EvalReport evaluate(const std::vector<std::string>& predicted, const std::vector<std::string>& gold);

nlohmann::json report_to_json(const EvalReport& report);
std::string render_report_table(const EvalReport& report);

}  // namespace rxfeat
