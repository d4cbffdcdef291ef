#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <variant>

#include "rxfeat/corpus.hpp"

namespace rxfeat {

struct MatchOptions {
  /// Patterns longer than this (bytes) are rejected at compile time.
  std::size_t max_pattern_bytes = 4096;
  /// Values are truncated to this many code points before matching.
  std::size_t max_value_chars = 4096;
  bool literal_prefilter = true;
};

enum class SearchOutcome { Match, NoMatch, BudgetExceeded };

/// One compiled pattern over the Boost perl engine. Unanchored search;
/// ^/$ anchor to the whole subject unless the entry carries "m".
class CompiledRegex {
 public:
  /// Either the compiled pattern or the engine's rejection reason.
  static std::variant<CompiledRegex, std::string> compile(const RegexEntry& entry,
                                                          const MatchOptions& options);

  SearchOutcome search(std::string_view subject) const;

 private:
  struct Impl;
  explicit CompiledRegex(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}

  std::shared_ptr<const Impl> impl_;
};

/// Cuts a string after max_chars UTF-8 code points.
std::string_view truncate_utf8(std::string_view text, std::size_t max_chars,
                               bool* truncated = nullptr);

}  // namespace rxfeat
