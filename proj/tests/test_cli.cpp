#include <doctest.h>

#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "rxfeat/cli.hpp"
#include "rxfeat/hash.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using rxfeat::dispatch;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = dispatch(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("rxfeat_cli_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

const std::string kCorpus = std::string(RXFEAT_DATA_DIR) + "/mini_corpus.jsonl";

}  // namespace

TEST_CASE("corpus clean writes corpus, stats and manifest") {
  const auto dir = scratch("clean");
  const auto out = (dir / "clean.jsonl").string();
  const auto r = run({"corpus", "clean", "--in", kCorpus, "--out", out});
  REQUIRE(r.code == rxfeat::kExitOk);
  CHECK(r.out.empty());
  const auto stats = json::parse(rxfeat::read_file(out + ".stats.json"));
  CHECK(stats["total"] == 40);
  CHECK(stats["kept"] == 31);
  const auto manifest = json::parse(rxfeat::read_file(out + ".manifest.json"));
  CHECK(manifest["command"] == "corpus clean");
  CHECK(manifest["tool_version"] == rxfeat::kToolVersion);
  CHECK(manifest["inputs"][0]["sha256"] == rxfeat::sha256_file(kCorpus));
  CHECK(manifest["outputs"][0]["sha256"] == rxfeat::sha256_file(out));
  CHECK(manifest["config"]["probe_set"] == "probes-v1");
  CHECK(manifest.dump().find("time") == std::string::npos);
}

TEST_CASE("usage errors exit 1") {
  CHECK(run({"corpus", "clean", "--out", "x"}).code == rxfeat::kExitUsage);
  CHECK(run({"frobnicate"}).code == rxfeat::kExitUsage);
  CHECK(run({}).code == rxfeat::kExitUsage);
  CHECK(run({"model", "train", "--features", "a", "--dataset", "b", "--out", "c", "--epochs", "x"}).code ==
        rxfeat::kExitUsage);
}

TEST_CASE("data errors exit 2") {
  const auto dir = scratch("dataerr");
  CHECK(run({"corpus", "clean", "--in", (dir / "nope.jsonl").string(), "--out",
             (dir / "o.jsonl").string()})
            .code == rxfeat::kExitData);
  CHECK(run({"corpus", "fetch", "--fixture", std::string(RXFEAT_FIXTURE_DIR) + "/regex101_export.json",
             "--out", (dir / "f.jsonl").string(), "--transport", "http"})
            .code == rxfeat::kExitData);
}

TEST_CASE("corpus fetch imports the recorded fixture") {
  const auto dir = scratch("fetch");
  const auto out = (dir / "fetched.jsonl").string();
  const auto r = run({"corpus", "fetch", "--fixture",
                      std::string(RXFEAT_FIXTURE_DIR) + "/regex101_export.json", "--out", out});
  REQUIRE(r.code == rxfeat::kExitOk);
  CHECK(r.err.find("record 3") != std::string::npos);
  std::istringstream lines(rxfeat::read_file(out));
  std::string line;
  std::vector<json> rows;
  while (std::getline(lines, line)) rows.push_back(json::parse(line));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0]["id"] == "a1B2c3/2");
  CHECK(rows[0]["flags"] == json::array({"m"}));
  CHECK(rows[1]["dialect"] == "pcre");
  CHECK(rows[3]["dialect"] == "python");
}

TEST_CASE("pipeline: fingerprint mismatch is rejected and replay reproduces outputs") {
  const auto dir = scratch("pipeline");
  const auto p = [&](const char* n) { return (dir / n).string(); };
  REQUIRE(run({"synth", "generate", "--out", p("data.jsonl"), "--columns-per-class", "12",
               "--values-per-column", "6"})
              .code == 0);
  REQUIRE(run({"corpus", "clean", "--in", kCorpus, "--out", p("clean.jsonl")}).code == 0);
  REQUIRE(run({"features", "extract", "--corpus", p("clean.jsonl"), "--dataset", p("data.jsonl"),
               "--out", p("feat.csv"), "--workers", "3"})
              .code == 0);
  REQUIRE(run({"model", "train", "--features", p("feat.csv"), "--dataset", p("data.jsonl"), "--out",
               p("model.json"), "--epochs", "3", "--hidden", "8,8,8,8"})
              .code == 0);
  const auto ev = run({"model", "eval", "--model", p("model.json"), "--features", p("feat.csv"),
                       "--dataset", p("data.jsonl"), "--split", p("model.json.split.json"), "--out",
                       p("report.json")});
  REQUIRE(ev.code == 0);
  CHECK(ev.out.find("weighted f1") != std::string::npos);

  // A corpus that differs by one pattern cannot feed the trained model.
  std::string other = rxfeat::read_file(p("clean.jsonl"));
  other = other.substr(other.find('\n') + 1);
  rxfeat::write_file(p("other.jsonl"), other);
  const auto mismatch = run({"features", "extract", "--corpus", p("other.jsonl"), "--dataset",
                             p("data.jsonl"), "--out", p("feat2.csv"), "--model", p("model.json")});
  CHECK(mismatch.code == rxfeat::kExitData);
  CHECK(mismatch.err.find("fingerprint") != std::string::npos);

  const auto before = rxfeat::sha256_file(p("model.json"));
  const auto rep = run({"replay", "--manifest", p("model.json.manifest.json")});
  CHECK(rep.code == 0);
  CHECK(rxfeat::sha256_file(p("model.json")) == before);

  // Replay refuses when an input changed.
  rxfeat::write_file(p("data.jsonl"), rxfeat::read_file(p("data.jsonl")) + "\n");
  CHECK(run({"replay", "--manifest", p("model.json.manifest.json")}).code == rxfeat::kExitData);
}
