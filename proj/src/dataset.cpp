#include "rxfeat/dataset.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <sstream>
#include <unordered_set>

#include "rxfeat/error.hpp"
#include "rxfeat/hash.hpp"
#include "rxfeat/rng.hpp"

namespace rxfeat {

using nlohmann::json;

Dataset::Dataset(std::vector<ColumnSample> samples) : samples_(std::move(samples)) {
  std::unordered_set<std::string> ids;
  std::set<std::string> labels;
  for (const auto& s : samples_) {
    if (!ids.insert(s.sample_id).second) {
      throw Error(ErrorCode::DuplicateId, "DuplicateId(\"" + s.sample_id + "\")");
    }
    if (s.values.empty()) {
      throw Error(ErrorCode::EmptyColumn, "sample " + s.sample_id + " has no values");
    }
    if (s.label) labels.insert(*s.label);
  }
  label_set_.assign(labels.begin(), labels.end());
}

LoadedDataset load_dataset(const std::filesystem::path& path) {
  return parse_dataset_jsonl(read_file(path));
}

LoadedDataset parse_dataset_jsonl(std::string_view text) {
  LoadedDataset out;
  std::vector<ColumnSample> samples;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto fail = [&](const std::string& why) {
      out.warnings.push_back("line " + std::to_string(line_no) + ": " + why);
    };
    json rec = json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object()) {
      fail("not a JSON object");
      continue;
    }
    if (!rec.contains("values") || !rec["values"].is_array() || rec["values"].empty() ||
        !std::all_of(rec["values"].begin(), rec["values"].end(),
                     [](const json& v) { return v.is_string(); })) {
      fail("missing or invalid \"values\" (need a non-empty string array)");
      continue;
    }
    ColumnSample s;
    s.values = rec["values"].get<std::vector<std::string>>();
    if (rec.contains("label") && !rec["label"].is_null()) {
      if (!rec["label"].is_string()) {
        fail("\"label\" must be a string or null");
        continue;
      }
      s.label = rec["label"].get<std::string>();
    }
    if (rec.contains("sample_id") && !rec["sample_id"].is_null()) {
      if (!rec["sample_id"].is_string()) {
        fail("\"sample_id\" must be a string");
        continue;
      }
      s.sample_id = rec["sample_id"].get<std::string>();
    } else {
      s.sample_id = "row" + std::to_string(samples.size());
    }
    samples.push_back(std::move(s));
  }
  if (samples.empty()) throw Error(ErrorCode::NoRecords, "dataset contains no valid samples");
  out.dataset = Dataset(std::move(samples));
  return out;
}

std::string dataset_to_jsonl(const Dataset& dataset) {
  std::string out;
  for (const auto& s : dataset.samples()) {
    json rec{{"sample_id", s.sample_id}, {"values", s.values}};
    rec["label"] = s.label ? json(*s.label) : json(nullptr);
    out += rec.dump();
    out += '\n';
  }
  return out;
}

SplitResult stratified_split(const Dataset& dataset, double train_fraction, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "train_fraction must lie in (0, 1)");
  }
  std::map<std::string, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    const auto& s = dataset.samples()[i];
    if (!s.label) {
      throw Error(ErrorCode::UnlabeledSample, "sample " + s.sample_id + " has no label");
    }
    by_class[*s.label].push_back(i);
  }
  SplitResult out;
  std::vector<char> in_train(dataset.size(), 0);
  for (auto& [label, members] : by_class) {
    if (members.size() == 1) {
      out.warnings.push_back("class " + label + " has a single sample; placed in train");
      in_train[members[0]] = 1;
      continue;
    }
    Rng rng(derive_seed(seed, label));
    rng.shuffle(std::span<std::size_t>(members));
    const auto n_train = static_cast<std::size_t>(
        std::lround(train_fraction * static_cast<double>(members.size())));
    for (std::size_t k = 0; k < n_train && k < members.size(); ++k) in_train[members[k]] = 1;
  }
  std::vector<ColumnSample> train, test;
  for (std::size_t i = 0; i < dataset.size(); ++i) {
    (in_train[i] ? train : test).push_back(dataset.samples()[i]);
  }
  out.train = Dataset(std::move(train));
  out.test = Dataset(std::move(test));
  return out;
}

namespace {

const std::vector<std::string> kKinds = {"year",  "iso_date",    "isbn13",
                                         "email", "grade_range", "gender"};

const std::map<std::string, std::string, std::less<>> kDefining = {
    {"year", R"(^\d{4}$)"},
    {"iso_date", R"(^\d{4}-\d{2}-\d{2}$)"},
    {"isbn13", R"(^97[89]-\d{1,5}-\d{1,7}-\d{1,7}-\d$)"},
    {"email", R"(^[a-z]+@[a-z]+\.[a-z]{2,3}$)"},
    {"grade_range", R"(^(PK|K|(PK|K|[1-9]|1[01])-([1-9]|1[0-2]))$)"},
    {"gender", R"(^(male|female|m|f|M|F)$)"},
};

constexpr std::array<const char*, 16> kLocalParts = {
    "alice", "bob",   "carol", "dave",    "erin",  "frank", "grace", "heidi",
    "ivan",  "judy",  "kevin", "mallory", "oscar", "peggy", "trent", "victor"};
constexpr std::array<const char*, 8> kDomains = {"example", "mail", "inbox", "post",
                                                 "corp",    "uni",  "web",   "data"};
constexpr std::array<const char*, 5> kTlds = {"com", "org", "net", "edu", "io"};
constexpr std::array<const char*, 6> kGenders = {"male", "female", "m", "f", "M", "F"};

std::string pad(long long v, int width) {
  std::string s = std::to_string(v);
  if (static_cast<int>(s.size()) < width) s.insert(0, static_cast<std::size_t>(width) - s.size(), '0');
  return s;
}

int days_in_month(int year, int month) {
  static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
  const bool leap = (year % 4 == 0 && year % 100 != 0) || year % 400 == 0;
  return month == 2 && leap ? 29 : kDays[month - 1];
}

std::string gen_isbn13(Rng& rng) {
  std::string digits = rng.below(2) == 0 ? "978" : "979";
  for (int i = 0; i < 9; ++i) digits.push_back(static_cast<char>('0' + rng.below(10)));
  int sum = 0;
  for (int i = 0; i < 12; ++i) sum += (digits[static_cast<std::size_t>(i)] - '0') * (i % 2 == 0 ? 1 : 3);
  const char check = static_cast<char>('0' + (10 - sum % 10) % 10);
  // Nine body digits split into group / registrant / publication.
  const auto group = static_cast<std::size_t>(rng.between(1, 5));
  const auto registrant = static_cast<std::size_t>(rng.between(1, static_cast<std::int64_t>(std::min<std::size_t>(7, 8 - group))));
  std::string out = digits.substr(0, 3);
  out += '-';
  out += digits.substr(3, group);
  out += '-';
  out += digits.substr(3 + group, registrant);
  out += '-';
  out += digits.substr(3 + group + registrant);
  out += '-';
  out += check;
  return out;
}

std::string gen_grade(Rng& rng) {
  const auto pick = rng.below(8);
  if (pick == 0) return "PK";
  if (pick == 1) return "K";
  // Range start: 0 = PK, 1 = K, s >= 2 = grade s - 1 (so 1..11). End > start.
  const auto start = static_cast<int>(rng.between(0, 12));
  const auto end = static_cast<int>(rng.between(std::max(1, start), 12));
  std::string out = start == 0 ? "PK" : start == 1 ? "K" : std::to_string(start - 1);
  return out + "-" + std::to_string(end);
}

std::string generate_value(const SynthClass& c, Rng& rng) {
  const int min_year = c.params.value("min_year", 1900);
  const int max_year = c.params.value("max_year", 2020);
  if (c.kind == "year") return std::to_string(rng.between(min_year, max_year));
  if (c.kind == "iso_date") {
    const auto y = static_cast<int>(rng.between(min_year, max_year));
    const auto m = static_cast<int>(rng.between(1, 12));
    const auto d = static_cast<int>(rng.between(1, days_in_month(y, m)));
    return pad(y, 4) + "-" + pad(m, 2) + "-" + pad(d, 2);
  }
  if (c.kind == "isbn13") return gen_isbn13(rng);
  if (c.kind == "email") {
    return std::string(kLocalParts[rng.below(kLocalParts.size())]) + "@" +
           kDomains[rng.below(kDomains.size())] + "." + kTlds[rng.below(kTlds.size())];
  }
  if (c.kind == "grade_range") return gen_grade(rng);
  if (c.kind == "gender") return kGenders[rng.below(kGenders.size())];
  throw Error(ErrorCode::UnknownGenerator, "unknown generator kind: " + c.kind);
}

}  // namespace

const std::vector<std::string>& generator_kinds() { return kKinds; }

const std::string& defining_regex(std::string_view kind) {
  auto it = kDefining.find(kind);
  if (it == kDefining.end()) {
    throw Error(ErrorCode::UnknownGenerator, "unknown generator kind: " + std::string(kind));
  }
  return it->second;
}

void SynthSpec::validate() const {
  if (classes.empty() || columns_per_class == 0 || values_per_column == 0) {
    throw Error(ErrorCode::InvalidArgument, "synthetic spec needs classes and positive counts");
  }
  std::set<std::string> names;
  for (const auto& c : classes) {
    if (!names.insert(c.name).second) {
      throw Error(ErrorCode::InvalidArgument, "duplicate class name: " + c.name);
    }
    if (!kDefining.contains(c.kind)) {
      throw Error(ErrorCode::UnknownGenerator, "unknown generator kind: " + c.kind);
    }
  }
}

SynthSpec default_synth_spec(std::uint64_t seed, std::size_t columns_per_class,
                             std::size_t values_per_column) {
  SynthSpec spec;
  for (const auto& k : kKinds) spec.classes.push_back({k, k, json::object()});
  spec.columns_per_class = columns_per_class;
  spec.values_per_column = values_per_column;
  spec.seed = seed;
  return spec;
}

Dataset generate_synthetic(const SynthSpec& spec) {
  spec.validate();
  std::vector<ColumnSample> samples;
  samples.reserve(spec.classes.size() * spec.columns_per_class);
  for (const auto& c : spec.classes) {
    Rng rng(derive_seed(spec.seed, c.name));
    for (std::size_t col = 0; col < spec.columns_per_class; ++col) {
      ColumnSample s;
      s.sample_id = c.name + "-" + pad(static_cast<long long>(col), 4);
      s.label = c.name;
      s.values.reserve(spec.values_per_column);
      for (std::size_t v = 0; v < spec.values_per_column; ++v) {
        s.values.push_back(generate_value(c, rng));
      }
      samples.push_back(std::move(s));
    }
  }
  return Dataset(std::move(samples));
}

}  // namespace rxfeat
