#include "rxfeat/prefilter.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>

namespace rxfeat {

namespace {

struct Unsupported {};

enum class AtomKind { Literal, Opaque, Group, ZeroWidth };

struct Atom {
  AtomKind kind = AtomKind::Opaque;
  char literal = 0;
  std::vector<std::string> factors;  // Group only
};

// Recursive descent over the subset of perl syntax whose literal content is
// unambiguous. Anything else throws Unsupported.
class LiteralParser {
 public:
  explicit LiteralParser(std::string_view p) : p_(p) {}

  std::vector<std::string> parse() {
    std::size_t i = 0;
    auto factors = alternation(i);
    if (i != p_.size()) throw Unsupported{};
    return factors;
  }

 private:
  std::vector<std::string> alternation(std::size_t& i) {
    auto first = sequence(i);
    bool branched = false;
    while (i < p_.size() && p_[i] == '|') {
      ++i;
      sequence(i);
      branched = true;
    }
    if (branched) return {};
    return first;
  }

  std::vector<std::string> sequence(std::size_t& i) {
    std::vector<std::string> factors;
    std::string run;
    auto flush = [&] {
      if (!run.empty()) factors.push_back(std::move(run));
      run.clear();
    };
    while (i < p_.size() && p_[i] != '|' && p_[i] != ')') {
      Atom atom = parse_atom(i);
      const int min_repeat = quantifier(i);
      if (atom.kind == AtomKind::ZeroWidth) {
        if (min_repeat != kNone) throw Unsupported{};
        flush();
        continue;
      }
      if (min_repeat == 0) {
        flush();
        continue;
      }
      switch (atom.kind) {
        case AtomKind::Literal:
          run.push_back(atom.literal);
          if (min_repeat != kNone) flush();
          break;
        case AtomKind::Group:
          flush();
          for (auto& f : atom.factors) factors.push_back(std::move(f));
          break;
        default:
          flush();
          break;
      }
    }
    flush();
    return factors;
  }

  static constexpr int kNone = -1;

  // Minimum repetition count of a trailing quantifier, kNone if absent.
  int quantifier(std::size_t& i) {
    if (i >= p_.size()) return kNone;
    int min_repeat = kNone;
    const char c = p_[i];
    if (c == '*' || c == '?') {
      min_repeat = 0;
      ++i;
    } else if (c == '+') {
      min_repeat = 1;
      ++i;
    } else if (c == '{') {
      std::size_t j = i + 1;
      std::size_t digits = 0;
      int value = 0;
      while (j < p_.size() && std::isdigit(static_cast<unsigned char>(p_[j])) && digits < 6) {
        value = value * 10 + (p_[j] - '0');
        ++j;
        ++digits;
      }
      if (digits == 0) throw Unsupported{};
      if (j < p_.size() && p_[j] == ',') {
        ++j;
        while (j < p_.size() && std::isdigit(static_cast<unsigned char>(p_[j]))) ++j;
      }
      if (j >= p_.size() || p_[j] != '}') throw Unsupported{};
      i = j + 1;
      min_repeat = value;
    } else {
      return kNone;
    }
    if (i < p_.size() && (p_[i] == '?' || p_[i] == '+')) ++i;
    return min_repeat;
  }

  Atom parse_atom(std::size_t& i) {
    Atom atom;
    const char c = p_[i];
    switch (c) {
      case '(': {
        ++i;
        if (i < p_.size() && p_[i] == '?') {
          if (i + 1 < p_.size() && p_[i + 1] == ':') {
            i += 2;
          } else {
            throw Unsupported{};
          }
        }
        atom.kind = AtomKind::Group;
        atom.factors = alternation(i);
        if (i >= p_.size() || p_[i] != ')') throw Unsupported{};
        ++i;
        return atom;
      }
      case '[':
        skip_class(i);
        atom.kind = AtomKind::Opaque;
        return atom;
      case '\\':
        return escape(i);
      case '.':
        ++i;
        atom.kind = AtomKind::Opaque;
        return atom;
      case '^':
      case '$':
        ++i;
        atom.kind = AtomKind::ZeroWidth;
        return atom;
      case '*':
      case '+':
      case '?':
      case '{':
      case '}':
      case ']':
        throw Unsupported{};
      default:
        ++i;
        atom.kind = AtomKind::Literal;
        atom.literal = c;
        return atom;
    }
  }

  void skip_class(std::size_t& i) {
    ++i;
    if (i < p_.size() && p_[i] == '^') ++i;
    if (i < p_.size() && p_[i] == ']') ++i;
    while (i < p_.size()) {
      if (p_[i] == ']') {
        ++i;
        return;
      }
      if (p_[i] == '\\') {
        i += 2;
      } else if (p_[i] == '[' && i + 1 < p_.size() &&
                 (p_[i + 1] == ':' || p_[i + 1] == '.' || p_[i + 1] == '=')) {
        const char kind = p_[i + 1];
        const auto end = p_.find(std::string{kind, ']'}, i + 2);
        if (end == std::string_view::npos) throw Unsupported{};
        i = end + 2;
      } else {
        ++i;
      }
    }
    throw Unsupported{};
  }

  Atom escape(std::size_t& i) {
    if (i + 1 >= p_.size()) throw Unsupported{};
    const char e = p_[i + 1];
    i += 2;
    Atom atom;
    switch (e) {
      case 'd': case 'D': case 'w': case 'W': case 's': case 'S':
        atom.kind = AtomKind::Opaque;
        return atom;
      case 'b': case 'B': case 'A': case 'z': case 'Z': case 'G':
        atom.kind = AtomKind::ZeroWidth;
        return atom;
      case 'n': atom.literal = '\n'; break;
      case 't': atom.literal = '\t'; break;
      case 'r': atom.literal = '\r'; break;
      case 'f': atom.literal = '\f'; break;
      case 'a': atom.literal = '\a'; break;
      case 'e': atom.literal = '\x1b'; break;
      default: {
        const auto u = static_cast<unsigned char>(e);
        if (u >= 0x80 || std::isalnum(u) || std::isspace(u)) throw Unsupported{};
        atom.literal = e;
      }
    }
    atom.kind = AtomKind::Literal;
    return atom;
  }

  std::string_view p_;
};

char ascii_lower(char c) {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

}  // namespace

std::optional<std::vector<std::string>> required_literals(const RegexEntry& entry) {
  if (entry.flags.has(RegexFlag::Extended)) return std::nullopt;
  try {
    auto factors = LiteralParser(entry.pattern).parse();
    for (auto& f : factors) std::transform(f.begin(), f.end(), f.begin(), ascii_lower);
    std::sort(factors.begin(), factors.end());
    factors.erase(std::unique(factors.begin(), factors.end()), factors.end());
    return factors;
  } catch (const Unsupported&) {
    return std::nullopt;
  }
}

AhoCorasick::AhoCorasick(const std::vector<std::string>& needles)
    : needle_count_(needles.size()) {
  nodes_.emplace_back();
  for (std::size_t id = 0; id < needles.size(); ++id) {
    std::int32_t cur = 0;
    for (unsigned char c : needles[id]) {
      std::int32_t nxt = child(cur, c);
      if (nxt < 0) {
        nxt = static_cast<std::int32_t>(nodes_.size());
        auto& edges = nodes_[static_cast<std::size_t>(cur)].next;
        edges.insert(std::lower_bound(edges.begin(), edges.end(),
                                      std::pair<unsigned char, std::int32_t>{c, -1}),
                     {c, nxt});
        nodes_.emplace_back();
      }
      cur = nxt;
    }
    nodes_[static_cast<std::size_t>(cur)].out.push_back(static_cast<std::int32_t>(id));
  }
  // Breadth-first failure links.
  std::deque<std::int32_t> queue;
  for (auto [c, n] : nodes_[0].next) {
    nodes_[static_cast<std::size_t>(n)].fail = 0;
    queue.push_back(n);
  }
  while (!queue.empty()) {
    const std::int32_t u = queue.front();
    queue.pop_front();
    for (auto [c, v] : nodes_[static_cast<std::size_t>(u)].next) {
      std::int32_t f = nodes_[static_cast<std::size_t>(u)].fail;
      while (f != 0 && child(f, c) < 0) f = nodes_[static_cast<std::size_t>(f)].fail;
      const std::int32_t fc = child(f, c);
      auto& node = nodes_[static_cast<std::size_t>(v)];
      node.fail = (fc >= 0 && fc != v) ? fc : 0;
      const auto& fail_node = nodes_[static_cast<std::size_t>(node.fail)];
      node.dict = fail_node.out.empty() ? fail_node.dict : node.fail;
      queue.push_back(v);
    }
  }
}

std::int32_t AhoCorasick::child(std::int32_t node, unsigned char c) const {
  const auto& edges = nodes_[static_cast<std::size_t>(node)].next;
  auto it = std::lower_bound(edges.begin(), edges.end(),
                             std::pair<unsigned char, std::int32_t>{c, -1});
  return (it != edges.end() && it->first == c) ? it->second : -1;
}

std::int32_t AhoCorasick::step(std::int32_t node, unsigned char c) const {
  while (true) {
    const std::int32_t nxt = child(node, c);
    if (nxt >= 0) return nxt;
    if (node == 0) return 0;
    node = nodes_[static_cast<std::size_t>(node)].fail;
  }
}

void AhoCorasick::scan(std::string_view text, std::vector<char>& present) const {
  present.assign(needle_count_, 0);
  std::int32_t state = 0;
  for (unsigned char c : text) {
    state = step(state, c);
    for (std::int32_t n = state; n > 0;) {
      const auto& node = nodes_[static_cast<std::size_t>(n)];
      for (std::int32_t id : node.out) present[static_cast<std::size_t>(id)] = 1;
      n = node.dict;
    }
  }
}

namespace {

std::vector<std::string> collect_needles(
    const std::vector<std::optional<std::vector<std::string>>>& per_pattern,
    std::vector<std::vector<std::int32_t>>& requirements) {
  std::map<std::string, std::int32_t> ids;
  std::vector<std::string> needles;
  requirements.resize(per_pattern.size());
  for (std::size_t i = 0; i < per_pattern.size(); ++i) {
    if (!per_pattern[i]) continue;
    for (const auto& lit : *per_pattern[i]) {
      auto [it, inserted] = ids.emplace(lit, static_cast<std::int32_t>(needles.size()));
      if (inserted) needles.push_back(lit);
      requirements[i].push_back(it->second);
    }
  }
  return needles;
}

}  // namespace

LiteralPrefilter::LiteralPrefilter(
    const std::vector<std::optional<std::vector<std::string>>>& per_pattern)
    : automaton_(collect_needles(per_pattern, requirements_)) {}

void LiteralPrefilter::candidates(std::string_view value, std::vector<char>& candidate) const {
  std::string folded(value);
  std::transform(folded.begin(), folded.end(), folded.begin(), ascii_lower);
  std::vector<char> present;
  automaton_.scan(folded, present);
  candidate.assign(requirements_.size(), 1);
  for (std::size_t i = 0; i < requirements_.size(); ++i) {
    for (std::int32_t id : requirements_[i]) {
      if (!present[static_cast<std::size_t>(id)]) {
        candidate[i] = 0;
        break;
      }
    }
  }
}

}  // namespace rxfeat
