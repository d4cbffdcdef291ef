#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rxfeat/corpus.hpp"

namespace rxfeat {

/// Literal strings (ASCII-lowercased) that every match of the pattern must
/// contain. An empty list means "no requirement"; nullopt means the pattern
/// uses syntax the analysis does not model, so it is never skipped.
std::optional<std::vector<std::string>> required_literals(const RegexEntry& entry);

/// Multi-needle substring search over bytes.
class AhoCorasick {
 public:
  explicit AhoCorasick(const std::vector<std::string>& needles);

  /// Sets present[i] = 1 for every needle i that occurs in text.
  void scan(std::string_view text, std::vector<char>& present) const;
  std::size_t needle_count() const { return needle_count_; }

 private:
  struct Node {
    std::vector<std::pair<unsigned char, std::int32_t>> next;  // sorted by byte
    std::int32_t fail = 0;
    std::int32_t dict = -1;  // nearest proper suffix node that ends a needle
    std::vector<std::int32_t> out;
  };

  std::int32_t child(std::int32_t node, unsigned char c) const;
  std::int32_t step(std::int32_t node, unsigned char c) const;

  std::vector<Node> nodes_;
  std::size_t needle_count_ = 0;
};

/// Skips patterns whose required literals are absent from a value. Never
/// changes match results, only avoids running the engine.
class LiteralPrefilter {
 public:
  explicit LiteralPrefilter(
      const std::vector<std::optional<std::vector<std::string>>>& per_pattern);

  /// candidate[i] == 1 when pattern i could match value.
  void candidates(std::string_view value, std::vector<char>& candidate) const;
  std::size_t pattern_count() const { return requirements_.size(); }

 private:
  std::vector<std::vector<std::int32_t>> requirements_;
  AhoCorasick automaton_;
};

}  // namespace rxfeat
