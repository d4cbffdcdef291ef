#include <doctest.h>

#include <string>
#include <vector>

#include "reference_matcher.hpp"
#include "rxfeat/prefilter.hpp"
#include "rxfeat/rng.hpp"

using namespace rxfeat;
using rxfeat::testing::pcre;

namespace {

std::optional<std::vector<std::string>> lits(const std::string& p) {
  return required_literals(pcre("p", p));
}

using Lits = std::vector<std::string>;

}  // namespace

TEST_CASE("required literals of simple patterns") {
  CHECK(lits("hello") == Lits{"hello"});
  CHECK(lits("^UTC[+-]\\d{2}[:]\\d{2}$") == Lits{"utc"});
  CHECK(lits("\\S+@gmail.com") == Lits{"@gmail", "com"});
  CHECK(lits("228-1234567") == Lits{"228-1234567"});
  CHECK(lits("ab*c") == Lits{"a", "c"});
  CHECK(lits("ab+c") == Lits{"ab", "c"});
  CHECK(lits("ab?c") == Lits{"a", "c"});
  CHECK(lits("ab{0,3}c") == Lits{"a", "c"});
  CHECK(lits("ab{2}c") == Lits{"ab", "c"});
  CHECK(lits("(abc)+d") == Lits{"abc", "d"});
  CHECK(lits("(?:abc)?d") == Lits{"d"});
  CHECK(lits("a\\.b") == Lits{"a.b"});
  CHECK(lits("K-\\d+") == Lits{"k-"});
}

TEST_CASE("alternation removes requirements at its level only") {
  CHECK(lits("abc|def") == Lits{});
  CHECK(lits("(a|b)cd") == Lits{"cd"});
  CHECK(lits("x(d)(?:ays?)?|(w)(?:eeks?)?") == Lits{});
}

TEST_CASE("unmodelled syntax disables the prefilter") {
  CHECK_FALSE(lits("(?i)abc"));
  CHECK_FALSE(lits("(?=abc)"));
  CHECK_FALSE(lits("(a)\\1"));
  CHECK_FALSE(lits("\\x41"));
  CHECK_FALSE(lits("\\Qa.b\\E"));
  CHECK_FALSE(lits("(abc"));
  CHECK_FALSE(lits("a{x}"));
  RegexEntry x = pcre("x", "a b c");
  x.flags.set(RegexFlag::Extended);
  CHECK_FALSE(required_literals(x));
}

TEST_CASE("character classes are opaque and skipped correctly") {
  CHECK(lits("[]a]bc") == Lits{"bc"});
  CHECK(lits("[^\\]x]yz") == Lits{"yz"});
  CHECK(lits("[[:alpha:]]+end") == Lits{"end"});
  CHECK_FALSE(lits("[abc"));
}

TEST_CASE("Aho-Corasick reports every needle present") {
  AhoCorasick ac({"he", "she", "his", "hers", "s"});
  std::vector<char> present;
  ac.scan("ushers", present);
  CHECK(present == std::vector<char>{1, 1, 0, 1, 1});
  ac.scan("", present);
  CHECK(present == std::vector<char>{0, 0, 0, 0, 0});
  ac.scan("hi", present);
  CHECK(present == std::vector<char>{0, 0, 0, 0, 0});
}

TEST_CASE("Aho-Corasick agrees with std::string::find on random text") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<std::string> needles;
    const auto k = rng.between(1, 8);
    for (int i = 0; i < k; ++i) {
      std::string s;
      const auto len = rng.between(1, 4);
      for (int j = 0; j < len; ++j) s += static_cast<char>('a' + rng.below(3));
      needles.push_back(s);
    }
    std::string text;
    const auto len = rng.between(0, 30);
    for (int j = 0; j < len; ++j) text += static_cast<char>('a' + rng.below(3));
    AhoCorasick ac(needles);
    std::vector<char> present;
    ac.scan(text, present);
    for (std::size_t i = 0; i < needles.size(); ++i) {
      CHECK(static_cast<bool>(present[i]) == (text.find(needles[i]) != std::string::npos));
    }
  }
}

TEST_CASE("prefilter never skips a pattern that matches") {
  // Property: candidate[i] == 0 implies the reference matcher says no match.
  const std::vector<std::string> patterns = {
      "abc",     "a+b",        "(ab)+c",   "x?yz",     "hello|world", "[a-c]+d", "\\d+-\\d+",
      "^ab$",    "AB",         "a.c",      "(?:ba){2}", "c\\.d",       "b{1,2}a", "(a|b)c"};
  std::vector<std::optional<std::vector<std::string>>> per;
  for (const auto& p : patterns) per.push_back(required_literals(pcre("p", p)));
  LiteralPrefilter pf(per);
  Rng rng(9);
  const std::string alphabet = "abcdxyzAB.-1";
  for (int trial = 0; trial < 2000; ++trial) {
    std::string v;
    const auto len = rng.between(0, 10);
    for (int j = 0; j < len; ++j) v += alphabet[rng.below(alphabet.size())];
    std::vector<char> cand;
    pf.candidates(v, cand);
    for (std::size_t i = 0; i < patterns.size(); ++i) {
      if (!cand[i]) {
        CHECK_FALSE_MESSAGE(rxfeat::testing::reference_search(pcre("p", patterns[i]), v),
                            patterns[i] << " on " << v);
      }
    }
  }
}

TEST_CASE("case-insensitive patterns are folded before prefiltering") {
  RegexEntry e = pcre("i", "Hello");
  e.flags.set(RegexFlag::CaseInsensitive);
  LiteralPrefilter pf({required_literals(e)});
  std::vector<char> cand;
  pf.candidates("say HELLO", cand);
  CHECK(cand[0] == 1);
  pf.candidates("say hallo", cand);
  CHECK(cand[0] == 0);
}
