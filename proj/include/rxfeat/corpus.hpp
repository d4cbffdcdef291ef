#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace rxfeat {

enum class RegexFlag : std::uint8_t {
  CaseInsensitive = 1u << 0,   // "i"
  DotMatchesNewline = 1u << 1, // "s"
  Multiline = 1u << 2,         // "m"
  Extended = 1u << 3,          // "x"
  Unicode = 1u << 4,           // "u"
};

class FlagSet {
 public:
  FlagSet() = default;

  bool has(RegexFlag f) const { return (bits_ & static_cast<std::uint8_t>(f)) != 0; }
  void set(RegexFlag f) { bits_ |= static_cast<std::uint8_t>(f); }
  void merge(FlagSet other) { bits_ |= other.bits_; }
  std::uint8_t bits() const { return bits_; }

  /// Parses single-letter codes; nullopt on an unknown code.
  static std::optional<FlagSet> from_code(char c);
  /// Canonical codes in "ismxu" order.
  std::vector<std::string> codes() const;

  friend bool operator==(FlagSet, FlagSet) = default;

 private:
  std::uint8_t bits_ = 0;
};

struct RegexEntry {
  std::string id;
  std::string pattern;
  std::string dialect;
  FlagSet flags;
  std::string source;

  friend bool operator==(const RegexEntry&, const RegexEntry&) = default;
};

struct Corpus {
  std::vector<RegexEntry> entries;
};

enum class CorpusFormat { Jsonl, Regex101Export };

CorpusFormat parse_corpus_format(std::string_view name);

struct LoadedCorpus {
  Corpus corpus;
  /// One message per skipped record, each naming its line (or array index).
  std::vector<std::string> warnings;
};

LoadedCorpus load_corpus(const std::filesystem::path& path, CorpusFormat format);
LoadedCorpus parse_corpus_jsonl(std::string_view text);
/// Accepts a JSON array of saved-regex records, or an object holding one
/// under "regexes"/"entries"/"results".
LoadedCorpus parse_regex101_export(std::string_view text);

std::string corpus_to_jsonl(const Corpus& corpus);
nlohmann::json entry_to_json(const RegexEntry& entry);

/// Content hash over (id, pattern, dialect, flags) in corpus order.
std::string corpus_fingerprint(const Corpus& corpus);

/// Identifies the shipped probe list; bump on any change to it.
inline constexpr std::string_view kProbeSetVersion = "probes-v1";
const std::vector<std::string>& default_probes();

struct FilterPolicy {
  std::size_t min_pattern_length = 5;
  std::size_t max_pattern_length = 1000;
  std::vector<std::string> allowed_dialects{"pcre"};
  std::vector<std::string> degeneracy_probes = default_probes();
  bool dedupe = true;

  /// Throws Error(InvalidPolicy).
  void validate() const;
};

struct CorpusStats {
  std::size_t total = 0;
  std::size_t kept = 0;
  std::size_t dropped_length = 0;
  std::size_t dropped_dialect = 0;
  std::size_t dropped_duplicate = 0;
  std::size_t dropped_degenerate = 0;

  bool balanced() const {
    return total == kept + dropped_length + dropped_dialect + dropped_duplicate +
                        dropped_degenerate;
  }
  friend bool operator==(const CorpusStats&, const CorpusStats&) = default;
};

nlohmann::json stats_to_json(const CorpusStats& stats);

struct MatchOptions;

/// True iff the pattern finds a match in every non-empty probe.
/// Throws Error(CompileFailed) if the pattern does not compile.
bool detect_degenerate(const RegexEntry& entry, const std::vector<std::string>& probes,
                       const MatchOptions& engine);

struct FilterResult {
  Corpus corpus;
  CorpusStats stats;
};

/// Drops in fixed order dialect -> length -> duplicate -> degenerate.
/// Entries that fail to compile are kept; compile_set rejects them later.
FilterResult filter_corpus(const Corpus& corpus, const FilterPolicy& policy,
                           const MatchOptions& engine);

std::size_t utf8_length(std::string_view text);

}  // namespace rxfeat
