#include "rxfeat/corpus.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_set>

#include "rxfeat/error.hpp"
#include "rxfeat/hash.hpp"
#include "rxfeat/regex_engine.hpp"

namespace rxfeat {

using nlohmann::json;

namespace {

constexpr std::string_view kFlagCodes = "ismxu";
constexpr RegexFlag kFlagOrder[] = {RegexFlag::CaseInsensitive, RegexFlag::DotMatchesNewline,
                                    RegexFlag::Multiline, RegexFlag::Extended,
                                    RegexFlag::Unicode};

std::string trim(std::string_view s) {
  const auto ws = " \t\r\n\f\v";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return std::string(s.substr(b, e - b + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

void add_entry(LoadedCorpus& out, std::unordered_set<std::string>& ids, RegexEntry entry) {
  if (!ids.insert(entry.id).second) {
    throw Error(ErrorCode::DuplicateId, "DuplicateId(\"" + entry.id + "\")");
  }
  out.corpus.entries.push_back(std::move(entry));
}

}  // namespace

std::optional<FlagSet> FlagSet::from_code(char c) {
  const auto pos = kFlagCodes.find(c);
  if (pos == std::string_view::npos) return std::nullopt;
  FlagSet f;
  f.set(kFlagOrder[pos]);
  return f;
}

std::vector<std::string> FlagSet::codes() const {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < kFlagCodes.size(); ++i) {
    if (has(kFlagOrder[i])) out.emplace_back(1, kFlagCodes[i]);
  }
  return out;
}

CorpusFormat parse_corpus_format(std::string_view name) {
  if (name == "jsonl") return CorpusFormat::Jsonl;
  if (name == "regex101_export") return CorpusFormat::Regex101Export;
  throw Error(ErrorCode::InvalidArgument, "unknown corpus format: " + std::string(name));
}

LoadedCorpus load_corpus(const std::filesystem::path& path, CorpusFormat format) {
  const std::string text = read_file(path);
  return format == CorpusFormat::Jsonl ? parse_corpus_jsonl(text) : parse_regex101_export(text);
}

LoadedCorpus parse_corpus_jsonl(std::string_view text) {
  LoadedCorpus out;
  std::unordered_set<std::string> ids;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto fail = [&](const std::string& why) {
      out.warnings.push_back("line " + std::to_string(line_no) + ": " + why);
    };
    json rec = json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object()) {
      fail("not a JSON object");
      continue;
    }
    RegexEntry e;
    if (!rec.contains("id") || !rec["id"].is_string() || rec["id"].get<std::string>().empty()) {
      fail("missing or invalid \"id\"");
      continue;
    }
    if (!rec.contains("pattern") || !rec["pattern"].is_string() ||
        rec["pattern"].get<std::string>().empty()) {
      fail("missing or empty \"pattern\"");
      continue;
    }
    if (!rec.contains("dialect") || !rec["dialect"].is_string()) {
      fail("missing or invalid \"dialect\"");
      continue;
    }
    e.id = rec["id"].get<std::string>();
    e.pattern = rec["pattern"].get<std::string>();
    e.dialect = lower(rec["dialect"].get<std::string>());
    bool ok = true;
    if (rec.contains("flags")) {
      if (!rec["flags"].is_array()) {
        ok = false;
      } else {
        for (const auto& f : rec["flags"]) {
          if (!f.is_string() || f.get<std::string>().size() != 1) {
            ok = false;
            break;
          }
          auto parsed = FlagSet::from_code(f.get<std::string>()[0]);
          if (!parsed) {
            ok = false;
            break;
          }
          e.flags.merge(*parsed);
        }
      }
    }
    if (!ok) {
      fail("invalid \"flags\" (expected codes from \"ismxu\")");
      continue;
    }
    if (rec.contains("source")) {
      if (!rec["source"].is_string()) {
        fail("invalid \"source\"");
        continue;
      }
      e.source = rec["source"].get<std::string>();
    }
    add_entry(out, ids, std::move(e));
  }
  if (out.corpus.entries.empty()) {
    throw Error(ErrorCode::NoRecords, "corpus contains no parseable records");
  }
  return out;
}

LoadedCorpus parse_regex101_export(std::string_view text) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw Error(ErrorCode::Format, "regex101 export is not valid JSON");
  const json* items = nullptr;
  if (doc.is_array()) {
    items = &doc;
  } else if (doc.is_object()) {
    for (const char* key : {"regexes", "entries", "results"}) {
      if (doc.contains(key) && doc[key].is_array()) {
        items = &doc[key];
        break;
      }
    }
  }
  if (!items) throw Error(ErrorCode::Format, "regex101 export holds no record array");

  LoadedCorpus out;
  std::unordered_set<std::string> ids;
  for (std::size_t i = 0; i < items->size(); ++i) {
    const json& rec = (*items)[i];
    auto fail = [&](const std::string& why) {
      out.warnings.push_back("record " + std::to_string(i) + ": " + why);
    };
    if (!rec.is_object()) {
      fail("not an object");
      continue;
    }
    json rest = rec;
    RegexEntry e;
    if (rec.contains("permalinkFragment") && rec["permalinkFragment"].is_string()) {
      e.id = rec["permalinkFragment"].get<std::string>();
      if (rec.contains("version") && rec["version"].is_number_integer()) {
        e.id += "/" + std::to_string(rec["version"].get<long long>());
        rest.erase("version");
      }
      rest.erase("permalinkFragment");
    } else if (rec.contains("id") && (rec["id"].is_string() || rec["id"].is_number_integer())) {
      e.id = rec["id"].is_string() ? rec["id"].get<std::string>()
                                   : std::to_string(rec["id"].get<long long>());
      rest.erase("id");
    }
    if (e.id.empty()) {
      fail("missing permalinkFragment/id");
      continue;
    }
    if (!rec.contains("regex") || !rec["regex"].is_string() ||
        rec["regex"].get<std::string>().empty()) {
      fail("missing or empty \"regex\"");
      continue;
    }
    e.pattern = rec["regex"].get<std::string>();
    rest.erase("regex");
    if (!rec.contains("flavor") || !rec["flavor"].is_string()) {
      fail("missing \"flavor\"");
      continue;
    }
    e.dialect = lower(rec["flavor"].get<std::string>());
    rest.erase("flavor");
    if (rec.contains("flags") && rec["flags"].is_string()) {
      std::string unmapped;
      for (char c : rec["flags"].get<std::string>()) {
        if (auto f = FlagSet::from_code(c)) {
          e.flags.merge(*f);
        } else if (c != 'g') {
          // "g" (global) is meaningless for a boolean search.
          unmapped.push_back(c);
        }
      }
      rest.erase("flags");
      if (!unmapped.empty()) rest["unmappedFlags"] = unmapped;
    }
    e.source = rest.empty() ? std::string("regex101") : "regex101 " + rest.dump();
    add_entry(out, ids, std::move(e));
  }
  if (out.corpus.entries.empty()) {
    throw Error(ErrorCode::NoRecords, "regex101 export contains no parseable records");
  }
  return out;
}

json entry_to_json(const RegexEntry& entry) {
  return json{{"id", entry.id},
              {"pattern", entry.pattern},
              {"dialect", entry.dialect},
              {"flags", entry.flags.codes()},
              {"source", entry.source}};
}

std::string corpus_to_jsonl(const Corpus& corpus) {
  std::string out;
  for (const auto& e : corpus.entries) {
    out += entry_to_json(e).dump();
    out += '\n';
  }
  return out;
}

std::string corpus_fingerprint(const Corpus& corpus) {
  std::string buf;
  for (const auto& e : corpus.entries) {
    buf += e.id;
    buf += '\x1f';
    buf += e.pattern;
    buf += '\x1f';
    buf += e.dialect;
    buf += '\x1f';
    buf += std::to_string(e.flags.bits());
    buf += '\x1e';
  }
  return sha256_hex(buf);
}

const std::vector<std::string>& default_probes() {
  static const std::vector<std::string> probes = {
      "a",
      "Z",
      "7",
      "42",
      "1999-12-31",
      "12/31/1999",
      "UTC+05:00",
      "user@example.com",
      "https://www.example.org/path?q=1",
      "hello world",
      "CamelCaseWord",
      "ALLCAPS",
      "!?.,;:-_()[]{}",
      " \t  ",
      "3.14159",
      "ISBN 978-3-16-148410-0",
  };
  return probes;
}

void FilterPolicy::validate() const {
  if (min_pattern_length == 0 || min_pattern_length > max_pattern_length) {
    throw Error(ErrorCode::InvalidPolicy,
                "require 0 < min_pattern_length <= max_pattern_length");
  }
  if (std::none_of(degeneracy_probes.begin(), degeneracy_probes.end(),
                   [](const std::string& p) { return !p.empty(); })) {
    throw Error(ErrorCode::InvalidPolicy, "degeneracy_probes needs a non-empty string");
  }
}

json stats_to_json(const CorpusStats& s) {
  return json{{"total", s.total},
              {"kept", s.kept},
              {"dropped_length", s.dropped_length},
              {"dropped_dialect", s.dropped_dialect},
              {"dropped_duplicate", s.dropped_duplicate},
              {"dropped_degenerate", s.dropped_degenerate}};
}

std::size_t utf8_length(std::string_view text) {
  return static_cast<std::size_t>(std::count_if(text.begin(), text.end(), [](char c) {
    return (static_cast<unsigned char>(c) & 0xC0) != 0x80;
  }));
}

bool detect_degenerate(const RegexEntry& entry, const std::vector<std::string>& probes,
                       const MatchOptions& engine) {
  auto compiled = CompiledRegex::compile(entry, engine);
  if (auto* reason = std::get_if<std::string>(&compiled)) {
    throw Error(ErrorCode::CompileFailed, "pattern " + entry.id + " does not compile: " + *reason);
  }
  const auto& re = std::get<CompiledRegex>(compiled);
  bool any_probe = false;
  for (const auto& probe : probes) {
    if (probe.empty()) continue;
    any_probe = true;
    if (re.search(truncate_utf8(probe, engine.max_value_chars)) != SearchOutcome::Match) {
      return false;
    }
  }
  return any_probe;
}

FilterResult filter_corpus(const Corpus& corpus, const FilterPolicy& policy,
                           const MatchOptions& engine) {
  policy.validate();
  const std::set<std::string> dialects(policy.allowed_dialects.begin(),
                                       policy.allowed_dialects.end());
  FilterResult out;
  out.stats.total = corpus.entries.size();
  std::unordered_set<std::string> seen;
  for (const auto& e : corpus.entries) {
    if (!dialects.contains(e.dialect)) {
      ++out.stats.dropped_dialect;
      continue;
    }
    const std::size_t len = utf8_length(e.pattern);
    if (len < policy.min_pattern_length || len > policy.max_pattern_length) {
      ++out.stats.dropped_length;
      continue;
    }
    if (policy.dedupe) {
      std::string key = trim(e.pattern);
      key += '\0';
      key += static_cast<char>(e.flags.bits());
      if (!seen.insert(std::move(key)).second) {
        ++out.stats.dropped_duplicate;
        continue;
      }
    }
    bool degenerate = false;
    try {
      degenerate = detect_degenerate(e, policy.degeneracy_probes, engine);
    } catch (const Error& err) {
      if (err.code() != ErrorCode::CompileFailed) throw;
    }
    if (degenerate) {
      ++out.stats.dropped_degenerate;
      continue;
    }
    out.corpus.entries.push_back(e);
  }
  out.stats.kept = out.corpus.entries.size();
  return out;
}

}  // namespace rxfeat
