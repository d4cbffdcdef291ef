#include "rxfeat/matcher.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <thread>

#include "rxfeat/error.hpp"

namespace rxfeat {

using nlohmann::json;

CompiledPatternSet CompiledPatternSet::compile(const Corpus& corpus, const MatchOptions& options) {
  if (corpus.entries.empty()) throw Error(ErrorCode::EmptyCorpus, "corpus is empty");
  CompiledPatternSet set;
  set.options_ = options;
  set.fingerprint_ = rxfeat::corpus_fingerprint(corpus);
  std::vector<std::optional<std::vector<std::string>>> literals;
  for (const auto& entry : corpus.entries) {
    auto compiled = CompiledRegex::compile(entry, options);
    if (auto* reason = std::get_if<std::string>(&compiled)) {
      set.rejected_.push_back({entry.id, *reason});
      continue;
    }
    set.regexes_.push_back(std::get<CompiledRegex>(std::move(compiled)));
    set.pattern_ids_.push_back(entry.id);
    if (options.literal_prefilter) {
      auto lits = required_literals(entry);
      if (lits && !lits->empty()) ++set.prefiltered_;
      literals.push_back(std::move(lits));
    }
  }
  if (set.regexes_.empty()) {
    throw Error(ErrorCode::AllPatternsRejected,
                "all " + std::to_string(corpus.entries.size()) + " patterns were rejected");
  }
  if (options.literal_prefilter) set.prefilter_.emplace(literals);
  return set;
}

CompiledPatternSet::ValueMatch CompiledPatternSet::match(std::string_view value) const {
  ValueMatch out;
  const std::string_view subject = truncate_utf8(value, options_.max_value_chars, &out.truncated);
  std::vector<char> candidate;
  if (prefilter_) prefilter_->candidates(subject, candidate);
  for (std::size_t i = 0; i < regexes_.size(); ++i) {
    if (prefilter_ && !candidate[i]) continue;
    switch (regexes_[i].search(subject)) {
      case SearchOutcome::Match:
        out.indices.push_back(i);
        break;
      case SearchOutcome::BudgetExceeded:
        ++out.timeouts;
        break;
      case SearchOutcome::NoMatch:
        break;
    }
  }
  return out;
}

CompiledPatternSet compile_set(const Corpus& corpus, const MatchOptions& options) {
  return CompiledPatternSet::compile(corpus, options);
}

std::vector<std::size_t> match_value(const CompiledPatternSet& set, std::string_view value) {
  return set.match(value).indices;
}

FeatureVector extract_features(const CompiledPatternSet& set,
                               const std::vector<std::string>& column, ExtractStats* stats) {
  if (column.empty()) throw Error(ErrorCode::EmptyColumn, "column has no values");
  std::vector<std::size_t> counts(set.size(), 0);
  for (const auto& value : column) {
    auto m = set.match(value);
    for (std::size_t i : m.indices) ++counts[i];
    if (stats) {
      stats->timeouts += m.timeouts;
      stats->truncated_values += m.truncated ? 1 : 0;
    }
  }
  FeatureVector fv;
  fv.column_size = column.size();
  fv.values.resize(counts.size());
  const auto n = static_cast<double>(column.size());
  for (std::size_t i = 0; i < counts.size(); ++i) fv.values[i] = static_cast<double>(counts[i]) / n;
  return fv;
}

FeatureMatrix extract_matrix(const CompiledPatternSet& set, const Dataset& dataset,
                             std::size_t workers) {
  if (dataset.empty()) throw Error(ErrorCode::EmptyDataset, "dataset is empty");
  for (const auto& s : dataset.samples()) {
    if (s.values.empty()) {
      throw Error(ErrorCode::EmptyColumn, "sample " + s.sample_id + " has an empty column");
    }
  }
  const std::size_t n = dataset.size();
  FeatureMatrix m;
  m.rows.resize(n);
  m.pattern_ids = set.pattern_ids();
  m.corpus_fingerprint = set.corpus_fingerprint();
  for (const auto& s : dataset.samples()) m.sample_ids.push_back(s.sample_id);

  std::vector<ExtractStats> stats(n);
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t j = next.fetch_add(1); j < n; j = next.fetch_add(1)) {
      m.rows[j] = extract_features(set, dataset.samples()[j].values, &stats[j]);
    }
  };
  workers = std::max<std::size_t>(1, std::min(workers, n));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  for (const auto& s : stats) {
    m.timeouts += s.timeouts;
    m.truncated_values += s.truncated_values;
  }
  return m;
}

std::string csv_escape(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::vector<std::string> csv_split_line(std::string_view line) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += c;
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

std::string feature_matrix_csv(const FeatureMatrix& matrix) {
  std::string out = "sample_id";
  for (const auto& id : matrix.pattern_ids) {
    out += ',';
    out += csv_escape(id);
  }
  out += '\n';
  char buf[32];
  for (std::size_t j = 0; j < matrix.rows.size(); ++j) {
    out += csv_escape(matrix.sample_ids[j]);
    for (double v : matrix.rows[j].values) {
      std::snprintf(buf, sizeof buf, ",%.9f", v);
      out += buf;
    }
    out += '\n';
  }
  return out;
}

json feature_matrix_sidecar(const FeatureMatrix& matrix) {
  std::vector<std::size_t> sizes;
  sizes.reserve(matrix.rows.size());
  for (const auto& r : matrix.rows) sizes.push_back(r.column_size);
  return json{{"corpus_fingerprint", matrix.corpus_fingerprint},
              {"pattern_ids", matrix.pattern_ids},
              {"timeouts", matrix.timeouts},
              {"truncated_values", matrix.truncated_values},
              {"column_sizes", sizes}};
}

FeatureMatrix parse_feature_matrix(std::string_view csv, const json& sidecar) {
  FeatureMatrix m;
  try {
    m.corpus_fingerprint = sidecar.at("corpus_fingerprint").get<std::string>();
    m.pattern_ids = sidecar.at("pattern_ids").get<std::vector<std::string>>();
    m.timeouts = sidecar.value("timeouts", std::size_t{0});
    m.truncated_values = sidecar.value("truncated_values", std::size_t{0});
  } catch (const json::exception& e) {
    throw Error(ErrorCode::Format, std::string("bad feature sidecar: ") + e.what());
  }
  std::vector<std::size_t> sizes;
  if (sidecar.contains("column_sizes")) sizes = sidecar["column_sizes"].get<std::vector<std::size_t>>();

  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::Format, "feature CSV is empty");
  auto header = csv_split_line(line);
  if (header.empty() || header[0] != "sample_id" ||
      !std::equal(m.pattern_ids.begin(), m.pattern_ids.end(), header.begin() + 1,
                  header.end())) {
    throw Error(ErrorCode::FingerprintMismatch, "feature CSV header does not match sidecar pattern_ids");
  }
  std::size_t row = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto fields = csv_split_line(line);
    if (fields.size() != m.pattern_ids.size() + 1) {
      throw Error(ErrorCode::DimensionMismatch,
                  "feature CSV row " + std::to_string(row + 2) + " has " +
                      std::to_string(fields.size() - 1) + " values, expected " +
                      std::to_string(m.pattern_ids.size()));
    }
    FeatureVector fv;
    fv.column_size = row < sizes.size() ? sizes[row] : 0;
    for (std::size_t i = 1; i < fields.size(); ++i) {
      double x = std::stod(fields[i]);
      if (fv.column_size > 0) {
        const auto n = static_cast<double>(fv.column_size);
        x = std::round(x * n) / n;
      }
      fv.values.push_back(x);
    }
    m.sample_ids.push_back(fields[0]);
    m.rows.push_back(std::move(fv));
    ++row;
  }
  if (!sizes.empty() && sizes.size() != m.rows.size()) {
    throw Error(ErrorCode::DimensionMismatch, "sidecar column_sizes length differs from CSV rows");
  }
  return m;
}

}  // namespace rxfeat
