#include "rxfeat/cli.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <map>
#include <ostream>
#include <set>
#include <sstream>

#include "rxfeat/cluster.hpp"
#include "rxfeat/corpus.hpp"
#include "rxfeat/dataset.hpp"
#include "rxfeat/error.hpp"
#include "rxfeat/hash.hpp"
#include "rxfeat/matcher.hpp"
#include "rxfeat/metrics.hpp"
#include "rxfeat/model.hpp"
#include "rxfeat/plot.hpp"

namespace rxfeat {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Manifest {
  explicit Manifest(std::string name = {}) : command(std::move(name)) {}

  std::string command;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  json seeds = json::object();
  json config = json::object();
};

std::string dump(const json& j) { return j.dump(2) + "\n"; }

std::string sidecar_path(const std::string& csv) { return csv + ".meta.json"; }

FeatureMatrix load_features(const std::string& csv_path, Manifest& m) {
  m.inputs.push_back(csv_path);
  m.inputs.push_back(sidecar_path(csv_path));
  json meta = json::parse(read_file(sidecar_path(csv_path)), nullptr, false);
  if (meta.is_discarded()) throw Error(ErrorCode::Format, "bad sidecar " + sidecar_path(csv_path));
  return parse_feature_matrix(read_file(csv_path), meta);
}

Dataset load_dataset_logged(const std::string& path, std::ostream& err, Manifest& m) {
  m.inputs.push_back(path);
  auto loaded = load_dataset(path);
  for (const auto& w : loaded.warnings) err << "warning: " << path << ": " << w << "\n";
  return std::move(loaded.dataset);
}

std::map<std::string, std::optional<std::string>> labels_by_id(const Dataset& d) {
  std::map<std::string, std::optional<std::string>> out;
  for (const auto& s : d.samples()) out.emplace(s.sample_id, s.label);
  return out;
}

std::vector<std::size_t> parse_dims(const std::string& text) {
  std::vector<std::size_t> dims;
  std::stringstream ss(text);
  std::string part;
  while (std::getline(ss, part, ',')) {
    try {
      dims.push_back(static_cast<std::size_t>(std::stoul(part)));
    } catch (const std::exception&) {
      throw Error(ErrorCode::InvalidArgument, "bad --hidden value: " + text);
    }
  }
  return dims;
}

// Rows of `matrix` whose sample id is in `keep` (all rows when keep is empty).
FeatureMatrix select_rows(const FeatureMatrix& matrix, const std::set<std::string>& keep) {
  FeatureMatrix out = matrix;
  out.rows.clear();
  out.sample_ids.clear();
  for (std::size_t r = 0; r < matrix.rows.size(); ++r) {
    if (!keep.empty() && !keep.contains(matrix.sample_ids[r])) continue;
    out.rows.push_back(matrix.rows[r]);
    out.sample_ids.push_back(matrix.sample_ids[r]);
  }
  return out;
}

void write_manifest(const Manifest& m, const std::vector<std::string>& argv) {
  json inputs = json::array();
  for (const auto& p : m.inputs) inputs.push_back({{"path", p}, {"sha256", sha256_file(p)}});
  json outputs = json::array();
  for (const auto& p : m.outputs) outputs.push_back({{"path", p}, {"sha256", sha256_file(p)}});
  json j{{"command", m.command},     {"argv", argv},          {"inputs", inputs},
         {"seeds", m.seeds},         {"config", m.config},    {"tool_version", kToolVersion},
         {"outputs", outputs}};
  write_file(m.outputs.front() + ".manifest.json", dump(j));
}

// ------------------------------------------------------------------ commands

struct CorpusCleanArgs {
  std::string in, out, format = "jsonl", stats;
  std::size_t min_len = 5, max_len = 1000;
  std::vector<std::string> dialects{"pcre"};
  bool no_dedupe = false;
};

Manifest corpus_clean(const CorpusCleanArgs& a, std::ostream& err) {
  Manifest m{"corpus clean"};
  m.inputs.push_back(a.in);
  auto loaded = load_corpus(a.in, parse_corpus_format(a.format));
  for (const auto& w : loaded.warnings) err << "warning: " << a.in << ": " << w << "\n";
  FilterPolicy policy;
  policy.min_pattern_length = a.min_len;
  policy.max_pattern_length = a.max_len;
  policy.allowed_dialects = a.dialects;
  policy.dedupe = !a.no_dedupe;
  auto result = filter_corpus(loaded.corpus, policy, MatchOptions{});
  const std::string stats_path = a.stats.empty() ? a.out + ".stats.json" : a.stats;
  write_file(a.out, corpus_to_jsonl(result.corpus));
  write_file(stats_path, dump(stats_to_json(result.stats)));
  err << "corpus clean: kept " << result.stats.kept << " of " << result.stats.total << "\n";
  m.outputs = {a.out, stats_path};
  m.config = {{"format", a.format},       {"min_len", a.min_len},
              {"max_len", a.max_len},     {"dialects", a.dialects},
              {"dedupe", !a.no_dedupe},   {"probe_set", std::string(kProbeSetVersion)}};
  return m;
}

struct CorpusFetchArgs {
  std::string fixture, out, transport = "file";
};

// Only the recorded-fixture transport exists; live fetching is not built in.
Manifest corpus_fetch(const CorpusFetchArgs& a, std::ostream& err) {
  if (a.transport != "file") {
    throw Error(ErrorCode::InvalidArgument, "unsupported transport: " + a.transport);
  }
  Manifest m{"corpus fetch"};
  m.inputs.push_back(a.fixture);
  auto loaded = load_corpus(a.fixture, CorpusFormat::Regex101Export);
  for (const auto& w : loaded.warnings) err << "warning: " << a.fixture << ": " << w << "\n";
  write_file(a.out, corpus_to_jsonl(loaded.corpus));
  m.outputs = {a.out};
  m.config = {{"transport", a.transport}};
  return m;
}

struct SynthArgs {
  std::string out;
  std::uint64_t seed = 42;
  std::size_t columns = 200, values = 20;
  std::vector<std::string> classes;
};

Manifest synth_generate(const SynthArgs& a) {
  Manifest m{"synth generate"};
  SynthSpec spec = default_synth_spec(a.seed, a.columns, a.values);
  if (!a.classes.empty()) {
    spec.classes.clear();
    for (const auto& k : a.classes) spec.classes.push_back({k, k, json::object()});
  }
  write_file(a.out, dataset_to_jsonl(generate_synthetic(spec)));
  m.outputs = {a.out};
  m.seeds = {{"seed", a.seed}};
  json classes = json::array();
  for (const auto& c : spec.classes) classes.push_back(c.name);
  m.config = {{"columns_per_class", a.columns}, {"values_per_column", a.values}, {"classes", classes}};
  return m;
}

struct ExtractArgs {
  std::string corpus, dataset, out, model;
  std::size_t workers = 1, max_value_chars = 4096;
  bool no_prefilter = false;
};

Manifest features_extract(const ExtractArgs& a, std::ostream& err) {
  Manifest m{"features extract"};
  m.inputs.push_back(a.corpus);
  auto loaded = load_corpus(a.corpus, CorpusFormat::Jsonl);
  for (const auto& w : loaded.warnings) err << "warning: " << a.corpus << ": " << w << "\n";
  MatchOptions opts;
  opts.literal_prefilter = !a.no_prefilter;
  opts.max_value_chars = a.max_value_chars;
  const auto set = compile_set(loaded.corpus, opts);
  for (const auto& r : set.rejected()) err << "rejected " << r.id << ": " << r.reason << "\n";
  if (!a.model.empty()) {
    m.inputs.push_back(a.model);
    const MLPModel model = model_from_json(json::parse(read_file(a.model)));
    if (model.corpus_fingerprint != set.corpus_fingerprint() ||
        model.input_pattern_ids != set.pattern_ids()) {
      throw Error(ErrorCode::FingerprintMismatch,
                  "corpus fingerprint mismatch: model was trained on " + model.corpus_fingerprint +
                      " but corpus " + a.corpus + " is " + set.corpus_fingerprint());
    }
  }
  const Dataset dataset = load_dataset_logged(a.dataset, err, m);
  const FeatureMatrix matrix = extract_matrix(set, dataset, a.workers);
  if (matrix.timeouts) err << "warning: " << matrix.timeouts << " match budget overruns\n";
  if (matrix.truncated_values) err << "warning: " << matrix.truncated_values << " values truncated\n";
  write_file(a.out, feature_matrix_csv(matrix));
  write_file(sidecar_path(a.out), dump(feature_matrix_sidecar(matrix)));
  m.outputs = {a.out, sidecar_path(a.out)};
  m.config = {{"workers", a.workers},
              {"literal_prefilter", !a.no_prefilter},
              {"max_value_chars", a.max_value_chars},
              {"active_patterns", set.size()},
              {"rejected_patterns", set.rejected().size()}};
  return m;
}

struct TrainArgs {
  std::string features, dataset, out, hidden = "256,128,64,32";
  TrainConfig config;
  double train_fraction = 0.8;
  std::uint64_t split_seed = 7;
};

Manifest model_train(const TrainArgs& a, std::ostream& err) {
  Manifest m{"model train"};
  const FeatureMatrix all = load_features(a.features, m);
  const Dataset dataset = load_dataset_logged(a.dataset, err, m);
  const auto label_of = labels_by_id(dataset);

  std::vector<ColumnSample> labeled;
  for (const auto& id : all.sample_ids) {
    auto it = label_of.find(id);
    if (it == label_of.end()) throw Error(ErrorCode::Format, "feature row " + id + " not in dataset");
    if (!it->second) throw Error(ErrorCode::UnlabeledSample, "sample " + id + " has no label");
    labeled.push_back({id, {""}, it->second});
  }
  const Dataset rows(std::move(labeled));
  std::set<std::string> train_ids, test_ids;
  if (a.train_fraction >= 1.0) {
    for (const auto& s : rows.samples()) train_ids.insert(s.sample_id);
  } else {
    auto split = stratified_split(rows, a.train_fraction, a.split_seed);
    for (const auto& w : split.warnings) err << "warning: " << w << "\n";
    for (const auto& s : split.train.samples()) train_ids.insert(s.sample_id);
    for (const auto& s : split.test.samples()) test_ids.insert(s.sample_id);
  }
  const FeatureMatrix train_rows = select_rows(all, train_ids);
  std::set<std::string> label_names;
  for (const auto& id : train_rows.sample_ids) label_names.insert(*label_of.at(id));
  const std::vector<std::string> labels(label_names.begin(), label_names.end());
  std::vector<std::size_t> y;
  for (const auto& id : train_rows.sample_ids) {
    y.push_back(static_cast<std::size_t>(
        std::lower_bound(labels.begin(), labels.end(), *label_of.at(id)) - labels.begin()));
  }

  MLPModel model = init_model(all.dim(), labels, a.config.seed, parse_dims(a.hidden));
  bind_inputs(model, all.pattern_ids, all.corpus_fingerprint);
  auto result = train(std::move(model), train_rows, y, a.config);
  err << "model train: final loss " << result.loss_history.back() << "\n";

  const std::string split_path = a.out + ".split.json";
  const std::string loss_path = a.out + ".loss.json";
  write_file(a.out, model_to_json(result.model).dump() + "\n");
  json split{{"train_fraction", a.train_fraction},
             {"split_seed", a.split_seed},
             {"train", std::vector<std::string>(train_ids.begin(), train_ids.end())},
             {"test", std::vector<std::string>(test_ids.begin(), test_ids.end())}};
  write_file(split_path, dump(split));
  write_file(loss_path, json(result.loss_history).dump() + "\n");
  m.outputs = {a.out, split_path, loss_path};
  m.seeds = {{"seed", a.config.seed}, {"split_seed", a.split_seed}};
  m.config = {{"epochs", a.config.epochs},       {"batch_size", a.config.batch_size},
              {"learning_rate", a.config.learning_rate}, {"l2_penalty", a.config.l2_penalty},
              {"hidden", a.hidden},              {"train_fraction", a.train_fraction}};
  return m;
}

struct EvalArgs {
  std::string model, features, dataset, split, out;
};

Manifest model_eval(const EvalArgs& a, std::ostream& out, std::ostream& err) {
  Manifest m{"model eval"};
  m.inputs.push_back(a.model);
  const MLPModel model = model_from_json(json::parse(read_file(a.model)));
  FeatureMatrix matrix = load_features(a.features, m);
  check_layout(model, matrix);
  const Dataset dataset = load_dataset_logged(a.dataset, err, m);
  if (!a.split.empty()) {
    m.inputs.push_back(a.split);
    const json split = json::parse(read_file(a.split));
    const auto test = split.at("test").get<std::vector<std::string>>();
    if (test.empty()) throw Error(ErrorCode::EmptyDataset, "split file has no test samples");
    matrix = select_rows(matrix, std::set<std::string>(test.begin(), test.end()));
  }
  const auto label_of = labels_by_id(dataset);
  std::vector<std::string> gold, predicted;
  const auto pred = predict(model, to_eigen(matrix));
  for (std::size_t r = 0; r < matrix.rows.size(); ++r) {
    auto it = label_of.find(matrix.sample_ids[r]);
    if (it == label_of.end() || !it->second) continue;
    gold.push_back(*it->second);
    predicted.push_back(model.labels[pred[r]]);
  }
  const EvalReport report = evaluate(predicted, gold);
  write_file(a.out, dump(report_to_json(report)));
  out << render_report_table(report);
  m.outputs = {a.out};
  return m;
}

struct ClusterArgs {
  std::string features, dataset, out, embedding_out;
  double eps = 0.0;
  std::size_t min_pts = kDefaultMinPts;
  std::vector<std::string> classes;
};

Manifest cluster_run(const ClusterArgs& a, std::ostream& err) {
  Manifest m{"cluster run"};
  FeatureMatrix matrix = load_features(a.features, m);
  std::map<std::string, std::optional<std::string>> label_of;
  if (!a.dataset.empty()) label_of = labels_by_id(load_dataset_logged(a.dataset, err, m));
  if (!a.classes.empty()) {
    const std::set<std::string> wanted(a.classes.begin(), a.classes.end());
    std::set<std::string> keep;
    for (const auto& id : matrix.sample_ids) {
      auto it = label_of.find(id);
      if (it != label_of.end() && it->second && wanted.contains(*it->second)) keep.insert(id);
    }
    if (keep.empty()) throw Error(ErrorCode::EmptyDataset, "no samples carry the requested classes");
    matrix = select_rows(matrix, keep);
  }
  const Embedding2D emb = PcaEmbedder().embed(matrix);
  const double eps = a.eps > 0.0 ? a.eps : default_eps(emb.points);
  const ClusterResult clusters = dbscan(emb.points, eps, a.min_pts);

  std::vector<std::optional<std::string>> labels;
  bool all_labeled = !label_of.empty();
  for (const auto& id : matrix.sample_ids) {
    auto it = label_of.find(id);
    labels.push_back(it == label_of.end() ? std::nullopt : it->second);
    all_labeled = all_labeled && labels.back().has_value();
  }
  const std::string emb_path = a.embedding_out.empty() ? a.out + ".embedding.csv" : a.embedding_out;
  write_file(a.out, dump(cluster_result_to_json(clusters)));
  write_file(emb_path, embedding_csv(emb, matrix.sample_ids, label_of.empty() ? decltype(labels){} : labels));
  m.outputs = {a.out, emb_path};
  err << "cluster run: " << clusters.cluster_count << " clusters, eps " << eps << "\n";
  if (all_labeled) {
    std::vector<std::string> gold;
    for (const auto& l : labels) gold.push_back(*l);
    const std::string acc_path = a.out + ".accuracy.json";
    json mapping = json::object();
    json result{{"accuracy", 0.0}, {"correct", 0}, {"total", gold.size()}, {"mapping", mapping}};
    try {
      const auto acc = best_match_accuracy(clusters, gold);
      for (const auto& [c, l] : acc.mapping) mapping[std::to_string(c)] = l;
      result = {{"accuracy", acc.accuracy}, {"correct", acc.correct}, {"total", acc.total}, {"mapping", mapping}};
    } catch (const Error& e) {
      if (e.code() != ErrorCode::AllNoise) throw;
      err << "warning: every point is noise\n";
    }
    write_file(acc_path, dump(result));
    m.outputs.push_back(acc_path);
    err << "cluster run: best-match accuracy " << result["accuracy"].get<double>() << "\n";
  }
  m.config = {{"eps", eps}, {"min_pts", a.min_pts}, {"classes", a.classes}, {"embedder", "pca"}};
  return m;
}

struct PlotArgs {
  std::string embedding, out, title;
};

Manifest plot_scatter(const PlotArgs& a) {
  Manifest m{"plot scatter"};
  m.inputs.push_back(a.embedding);
  const auto table = parse_embedding_csv(read_file(a.embedding));
  const bool any_label = std::any_of(table.labels.begin(), table.labels.end(),
                                     [](const auto& l) { return l.has_value(); });
  write_file(a.out, render_scatter_svg(table.embedding,
                                       any_label ? table.labels : decltype(table.labels){}, a.title));
  m.outputs = {a.out};
  m.config = {{"title", a.title}};
  return m;
}

int replay(const std::string& manifest_path, std::ostream& out, std::ostream& err) {
  const json m = json::parse(read_file(manifest_path), nullptr, false);
  if (m.is_discarded() || !m.contains("argv")) {
    throw Error(ErrorCode::Format, "bad manifest " + manifest_path);
  }
  for (const auto& in : m.at("inputs")) {
    const auto path = in.at("path").get<std::string>();
    if (sha256_file(path) != in.at("sha256").get<std::string>()) {
      throw Error(ErrorCode::FingerprintMismatch, "input changed since manifest: " + path);
    }
  }
  const int code = dispatch(m.at("argv").get<std::vector<std::string>>(), out, err);
  if (code != kExitOk) return code;
  for (const auto& o : m.at("outputs")) {
    const auto path = o.at("path").get<std::string>();
    if (sha256_file(path) != o.at("sha256").get<std::string>()) {
      err << "replay: output differs: " << path << "\n";
      return kExitData;
    }
  }
  err << "replay: all outputs reproduced\n";
  return kExitOk;
}

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Regex-corpus features for semantic column typing", "rxfeat"};
  app.require_subcommand(1);

  auto* corpus = app.add_subcommand("corpus", "Corpus import and cleaning");
  corpus->require_subcommand(1);
  CorpusCleanArgs clean;
  auto* clean_cmd = corpus->add_subcommand("clean", "Filter a raw regex corpus");
  clean_cmd->add_option("--in", clean.in, "Raw corpus")->required();
  clean_cmd->add_option("--out", clean.out, "Cleaned corpus JSONL")->required();
  clean_cmd->add_option("--format", clean.format, "jsonl | regex101_export")->capture_default_str();
  clean_cmd->add_option("--min-len", clean.min_len)->capture_default_str();
  clean_cmd->add_option("--max-len", clean.max_len)->capture_default_str();
  clean_cmd->add_option("--dialect", clean.dialects, "Allowed dialects")->capture_default_str();
  clean_cmd->add_flag("--no-dedupe", clean.no_dedupe);
  clean_cmd->add_option("--stats", clean.stats, "Stats JSON (default <out>.stats.json)");

  CorpusFetchArgs fetch;
  auto* fetch_cmd = corpus->add_subcommand("fetch", "Import a recorded regex101 export");
  fetch_cmd->add_option("--fixture", fetch.fixture, "Recorded export JSON")->required();
  fetch_cmd->add_option("--out", fetch.out, "Corpus JSONL")->required();
  fetch_cmd->add_option("--transport", fetch.transport)->capture_default_str();

  auto* features = app.add_subcommand("features", "Feature extraction");
  features->require_subcommand(1);
  ExtractArgs extract;
  auto* extract_cmd = features->add_subcommand("extract", "Match-fraction features per column");
  extract_cmd->add_option("--corpus", extract.corpus, "Cleaned corpus JSONL")->required();
  extract_cmd->add_option("--dataset", extract.dataset, "Dataset JSONL")->required();
  extract_cmd->add_option("--out", extract.out, "Feature CSV")->required();
  extract_cmd->add_option("--workers", extract.workers)->capture_default_str()->check(CLI::PositiveNumber);
  extract_cmd->add_option("--max-value-chars", extract.max_value_chars)->capture_default_str();
  extract_cmd->add_flag("--no-prefilter", extract.no_prefilter);
  extract_cmd->add_option("--model", extract.model, "Check layout against this model");

  auto* model = app.add_subcommand("model", "Classifier");
  model->require_subcommand(1);
  TrainArgs tr;
  auto* train_cmd = model->add_subcommand("train", "Train the dense classifier");
  train_cmd->add_option("--features", tr.features)->required();
  train_cmd->add_option("--dataset", tr.dataset)->required();
  train_cmd->add_option("--out", tr.out)->required();
  train_cmd->add_option("--epochs", tr.config.epochs)->capture_default_str();
  train_cmd->add_option("--batch-size", tr.config.batch_size)->capture_default_str();
  train_cmd->add_option("--lr", tr.config.learning_rate)->capture_default_str();
  train_cmd->add_option("--l2", tr.config.l2_penalty)->capture_default_str();
  train_cmd->add_option("--seed", tr.config.seed)->capture_default_str();
  train_cmd->add_option("--hidden", tr.hidden)->capture_default_str();
  train_cmd->add_option("--train-fraction", tr.train_fraction)->capture_default_str();
  train_cmd->add_option("--split-seed", tr.split_seed)->capture_default_str();

  EvalArgs ev;
  auto* eval_cmd = model->add_subcommand("eval", "Score a trained model");
  eval_cmd->add_option("--model", ev.model)->required();
  eval_cmd->add_option("--features", ev.features)->required();
  eval_cmd->add_option("--dataset", ev.dataset)->required();
  eval_cmd->add_option("--split", ev.split, "Split JSON from model train; scores its test ids");
  eval_cmd->add_option("--out", ev.out)->required();

  auto* cluster = app.add_subcommand("cluster", "Unsupervised grouping");
  cluster->require_subcommand(1);
  ClusterArgs cl;
  auto* cluster_cmd = cluster->add_subcommand("run", "PCA + DBSCAN + best-match accuracy");
  cluster_cmd->add_option("--features", cl.features)->required();
  cluster_cmd->add_option("--dataset", cl.dataset, "Labels for accuracy and class selection");
  cluster_cmd->add_option("--out", cl.out)->required();
  cluster_cmd->add_option("--embedding-out", cl.embedding_out);
  cluster_cmd->add_option("--eps", cl.eps, "Default: 5% of the bounding-box diagonal");
  cluster_cmd->add_option("--min-pts", cl.min_pts)->capture_default_str();
  cluster_cmd->add_option("--classes", cl.classes, "Only rows with these labels");

  auto* synth = app.add_subcommand("synth", "Synthetic data");
  synth->require_subcommand(1);
  SynthArgs sy;
  auto* synth_cmd = synth->add_subcommand("generate", "Generate labelled columns");
  synth_cmd->add_option("--out", sy.out)->required();
  synth_cmd->add_option("--seed", sy.seed)->capture_default_str();
  synth_cmd->add_option("--columns-per-class", sy.columns)->capture_default_str();
  synth_cmd->add_option("--values-per-column", sy.values)->capture_default_str();
  synth_cmd->add_option("--classes", sy.classes, "Generator kinds (default: all)");

  auto* plot = app.add_subcommand("plot", "Figures");
  plot->require_subcommand(1);
  PlotArgs pl;
  auto* scatter_cmd = plot->add_subcommand("scatter", "SVG scatter of an embedding CSV");
  scatter_cmd->add_option("--embedding", pl.embedding)->required();
  scatter_cmd->add_option("--out", pl.out)->required();
  scatter_cmd->add_option("--title", pl.title);

  std::string manifest_path;
  auto* replay_cmd = app.add_subcommand("replay", "Re-run a command from its manifest");
  replay_cmd->add_option("--manifest", manifest_path)->required();

  std::vector<std::string> storage{"rxfeat"};
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    Manifest m;
    if (*clean_cmd) {
      m = corpus_clean(clean, err);
    } else if (*fetch_cmd) {
      m = corpus_fetch(fetch, err);
    } else if (*extract_cmd) {
      m = features_extract(extract, err);
    } else if (*train_cmd) {
      m = model_train(tr, err);
    } else if (*eval_cmd) {
      m = model_eval(ev, out, err);
    } else if (*cluster_cmd) {
      m = cluster_run(cl, err);
    } else if (*synth_cmd) {
      m = synth_generate(sy);
    } else if (*scatter_cmd) {
      m = plot_scatter(pl);
    } else if (*replay_cmd) {
      return replay(manifest_path, out, err);
    } else {
      err << app.help();
      return kExitUsage;
    }
    write_manifest(m, args);
  } catch (const Error& e) {
    err << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return kExitData;
  } catch (const nlohmann::json::exception& e) {
    err << "error (Format): " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

}  // namespace rxfeat
