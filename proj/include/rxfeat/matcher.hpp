#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "rxfeat/corpus.hpp"
#include "rxfeat/dataset.hpp"
#include "rxfeat/prefilter.hpp"
#include "rxfeat/regex_engine.hpp"

namespace rxfeat {

struct Rejection {
  std::string id;
  std::string reason;
};

/// Ordered, immutable pattern set. Feature index i is the i-th entry of the
/// corpus that compiled; everything else is in rejected().
class CompiledPatternSet {
 public:
  /// Throws Error(EmptyCorpus) or Error(AllPatternsRejected).
  static CompiledPatternSet compile(const Corpus& corpus, const MatchOptions& options = {});

  std::size_t size() const { return regexes_.size(); }
  const std::vector<std::string>& pattern_ids() const { return pattern_ids_; }
  const std::vector<Rejection>& rejected() const { return rejected_; }
  const std::string& corpus_fingerprint() const { return fingerprint_; }
  const MatchOptions& options() const { return options_; }
  const CompiledRegex& regex(std::size_t index) const { return regexes_[index]; }
  /// Indices the literal prefilter can skip on some values.
  std::size_t prefiltered_count() const { return prefiltered_; }

  struct ValueMatch {
    std::vector<std::size_t> indices;  // ascending
    std::size_t timeouts = 0;
    bool truncated = false;
  };
  ValueMatch match(std::string_view value) const;

 private:
  CompiledPatternSet() = default;

  std::vector<CompiledRegex> regexes_;
  std::vector<std::string> pattern_ids_;
  std::vector<Rejection> rejected_;
  std::string fingerprint_;
  MatchOptions options_;
  std::optional<LiteralPrefilter> prefilter_;
  std::size_t prefiltered_ = 0;
};

CompiledPatternSet compile_set(const Corpus& corpus, const MatchOptions& options = {});

/// Feature indices whose pattern occurs anywhere in value.
std::vector<std::size_t> match_value(const CompiledPatternSet& set, std::string_view value);

struct FeatureVector {
  std::vector<double> values;
  std::size_t column_size = 0;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

struct ExtractStats {
  std::size_t timeouts = 0;
  std::size_t truncated_values = 0;
};

/// Element i = (#values matching pattern i) / column size.
/// Throws Error(EmptyColumn).
FeatureVector extract_features(const CompiledPatternSet& set,
                               const std::vector<std::string>& column,
                               ExtractStats* stats = nullptr);

struct FeatureMatrix {
  std::vector<FeatureVector> rows;
  std::vector<std::string> sample_ids;
  std::vector<std::string> pattern_ids;
  std::string corpus_fingerprint;
  std::size_t timeouts = 0;
  std::size_t truncated_values = 0;

  std::size_t dim() const { return pattern_ids.size(); }
  friend bool operator==(const FeatureMatrix&, const FeatureMatrix&) = default;
};

/// Row j = extract_features(set, sample j). Output does not depend on workers.
FeatureMatrix extract_matrix(const CompiledPatternSet& set, const Dataset& dataset,
                             std::size_t workers = 1);

/// `sample_id,<pattern ids...>` header, fractions with 9 decimals.
std::string feature_matrix_csv(const FeatureMatrix& matrix);
nlohmann::json feature_matrix_sidecar(const FeatureMatrix& matrix);
/// Rebuilds exact fractions from the CSV plus sidecar column sizes.
FeatureMatrix parse_feature_matrix(std::string_view csv, const nlohmann::json& sidecar);

std::string csv_escape(std::string_view field);
std::vector<std::string> csv_split_line(std::string_view line);

}  // namespace rxfeat
