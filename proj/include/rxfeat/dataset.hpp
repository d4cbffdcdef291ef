#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace rxfeat {

struct ColumnSample {
  std::string sample_id;
  std::vector<std::string> values;
  std::optional<std::string> label;

  friend bool operator==(const ColumnSample&, const ColumnSample&) = default;
};

class Dataset {
 public:
  Dataset() = default;
  /// Validates unique ids and non-empty value lists; derives label_set.
  explicit Dataset(std::vector<ColumnSample> samples);

  const std::vector<ColumnSample>& samples() const { return samples_; }
  /// Sorted distinct non-null labels.
  const std::vector<std::string>& label_set() const { return label_set_; }
  std::size_t size() const { return samples_.size(); }
  bool empty() const { return samples_.empty(); }

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<ColumnSample> samples_;
  std::vector<std::string> label_set_;
};

struct LoadedDataset {
  Dataset dataset;
  std::vector<std::string> warnings;
};

LoadedDataset load_dataset(const std::filesystem::path& path);
LoadedDataset parse_dataset_jsonl(std::string_view text);
std::string dataset_to_jsonl(const Dataset& dataset);

struct SplitResult {
  Dataset train;
  Dataset test;
  std::vector<std::string> warnings;
};

/// Per class, round(train_fraction * count) samples go to train. Each
/// class is shuffled with its own stream derived from (seed, class name).
/// Both halves keep the input order.
SplitResult stratified_split(const Dataset& dataset, double train_fraction, std::uint64_t seed);

struct SynthClass {
  std::string name;
  std::string kind;
  nlohmann::json params = nlohmann::json::object();
};

struct SynthSpec {
  std::vector<SynthClass> classes;
  std::size_t columns_per_class = 200;
  std::size_t values_per_column = 20;
  std::uint64_t seed = 42;

  void validate() const;
};

/// Generator kinds: year, iso_date, isbn13, email, grade_range, gender.
const std::vector<std::string>& generator_kinds();
/// Full-value regex every generated value of the kind matches. The six
/// defining regexes are pairwise disjoint.
const std::string& defining_regex(std::string_view kind);

/// One class per built-in kind, named after the kind.
SynthSpec default_synth_spec(std::uint64_t seed = 42, std::size_t columns_per_class = 200,
                             std::size_t values_per_column = 20);

Dataset generate_synthetic(const SynthSpec& spec);

}  // namespace rxfeat
