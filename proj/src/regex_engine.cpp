#include "rxfeat/regex_engine.hpp"

#include <boost/regex.hpp>

namespace rxfeat {

struct CompiledRegex::Impl {
  boost::regex re;
};

std::variant<CompiledRegex, std::string> CompiledRegex::compile(const RegexEntry& entry,
                                                                const MatchOptions& options) {
  if (entry.pattern.empty()) return std::string("empty pattern");
  if (entry.pattern.size() > options.max_pattern_bytes) {
    return "pattern exceeds " + std::to_string(options.max_pattern_bytes) + " bytes";
  }
  boost::regex_constants::syntax_option_type syntax = boost::regex_constants::perl;
  syntax |= entry.flags.has(RegexFlag::Multiline) ? boost::regex_constants::normal
                                                  : boost::regex_constants::no_mod_m;
  syntax |= entry.flags.has(RegexFlag::DotMatchesNewline) ? boost::regex_constants::mod_s
                                                          : boost::regex_constants::no_mod_s;
  if (entry.flags.has(RegexFlag::CaseInsensitive)) syntax |= boost::regex_constants::icase;
  if (entry.flags.has(RegexFlag::Extended)) syntax |= boost::regex_constants::mod_x;
  try {
    auto impl = std::make_shared<Impl>();
    impl->re.assign(entry.pattern, syntax);
    return CompiledRegex(std::move(impl));
  } catch (const boost::regex_error& e) {
    return std::string(e.what());
  } catch (const std::exception& e) {
    // Boost reports pathological compile-time complexity as runtime_error.
    return std::string(e.what());
  }
}

SearchOutcome CompiledRegex::search(std::string_view subject) const {
  try {
    const bool hit = boost::regex_search(subject.begin(), subject.end(), impl_->re,
                                         boost::match_default | boost::match_any);
    return hit ? SearchOutcome::Match : SearchOutcome::NoMatch;
  } catch (const std::runtime_error&) {
    // State-count or memory budget exhausted; deterministic for a given input.
    return SearchOutcome::BudgetExceeded;
  }
}

std::string_view truncate_utf8(std::string_view text, std::size_t max_chars, bool* truncated) {
  std::size_t chars = 0;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const auto c = static_cast<unsigned char>(text[i]);
    if ((c & 0xC0) != 0x80) {
      if (chars == max_chars) {
        if (truncated) *truncated = true;
        return text.substr(0, i);
      }
      ++chars;
    }
  }
  if (truncated) *truncated = false;
  return text;
}

}  // namespace rxfeat
