#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "semsim/analysis.hpp"
#include "semsim/embeddings.hpp"
#include "semsim/error.hpp"
#include "semsim/report.hpp"
#include "semsim/textproc.hpp"

namespace semsim::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string s;
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (k) s += sep;
    s += items[k];
  }
  return s;
}

std::vector<std::string> split(std::string_view text, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = text.find(sep, start);
    std::string part(text.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    part.erase(0, part.find_first_not_of(" \t"));
    part.erase(part.find_last_not_of(" \t") + 1);
    if (!part.empty()) parts.push_back(part);
    if (pos == std::string_view::npos) return parts;
    start = pos + 1;
  }
}

fs::path resolve(const fs::path& base, const fs::path& p) { return p.is_absolute() ? p : base / p; }

std::string relative_text(const fs::path& p, const fs::path& base) {
  return p.lexically_proximate(base).generic_string();
}

std::string param_text(const json& v, const std::string& where) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_boolean()) return v.get<bool>() ? "1" : "0";
  if (v.is_number()) return format_number(v.get<double>());
  throw UsageError(where + ": parameter values must be strings, numbers or booleans");
}

HumanAggregation parse_aggregation(std::string_view text) {
  if (text == "mean") return HumanAggregation::mean;
  if (text == "median") return HumanAggregation::median;
  throw UsageError("human aggregation must be \"mean\" or \"median\", got \"" + std::string(text) + "\"");
}

std::string_view to_string(HumanAggregation how) { return how == HumanAggregation::mean ? "mean" : "median"; }

// "name=value"; the name may itself contain dots (metric.key=value).
std::pair<std::string, std::string> split_assignment(const std::string& text, const std::string& flag) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == text.size())
    throw UsageError(flag + " expects NAME=VALUE, got \"" + text + "\"");
  return {text.substr(0, eq), text.substr(eq + 1)};
}

void require_file(const fs::path& p, std::string_view what) {
  if (!fs::is_regular_file(p)) throw UsageError(std::string(what) + " not found: " + p.string());
}

void warn(std::ostream& err, const std::string& message) { err << "warning: " << message << '\n'; }

}  // namespace

// ---------------------------------------------------------------------------
// RunConfig

std::string RunConfig::canonical_json() const {
  json j;
  j["manifest"] = relative_text(manifest, base);
  j["metrics"] = metrics;
  j["params"] = params;
  json tables = json::object();
  for (const auto& [name, path] : embeddings) tables[name] = relative_text(path, base);
  j["embeddings"] = tables;
  j["contextual"] = contextual ? json(relative_text(*contextual, base)) : json(nullptr);
  j["lexicon"] = lexicon ? json(relative_text(*lexicon, base)) : json(nullptr);
  j["synonyms"] = synonyms ? json(relative_text(*synonyms, base)) : json(nullptr);
  j["sample_n"] = sample_n ? json(*sample_n) : json(nullptr);
  j["seed"] = seed;
  j["symmetrize"] = symmetrize;
  j["human_aggregation"] = to_string(human);
  return j.dump();
}

std::string RunConfig::hash() const { return hash_hex(canonical_json()); }

std::vector<MetricDescriptor> RunConfig::descriptors() const {
  if (metrics.empty()) throw UsageError("no metrics selected; known metrics: " + join(known_metrics(), ", "));
  std::vector<MetricDescriptor> out;
  for (const auto& name : metrics) {
    if (!is_known_metric(name))
      throw UsageError("unknown metric \"" + name + "\"; known metrics: " + join(known_metrics(), ", "));
    if (std::any_of(out.begin(), out.end(), [&](const auto& d) { return d.name == name; }))
      throw UsageError("metric \"" + name + "\" selected twice");
    auto d = describe_metric(name);
    if (const auto it = params.find(name); it != params.end())
      for (const auto& [k, v] : it->second) d.params[k] = v;
    out.push_back(std::move(d));
  }
  // Overrides for known but unselected metrics are kept, so --metrics can narrow a config.
  for (const auto& [name, _] : params)
    if (!is_known_metric(name)) throw UsageError("parameters given for unknown metric \"" + name + "\"");
  return out;
}

void RunConfig::validate() const {
  descriptors();
  if (manifest.empty()) throw UsageError("no manifest given (--manifest or \"manifest\" in the config)");
  require_file(manifest, "manifest");
  for (const auto& [name, path] : embeddings) require_file(path, "embedding table '" + name + "'");
  if (contextual) require_file(*contextual, "contextual vectors");
  if (lexicon) require_file(*lexicon, "noun lexicon");
  if (synonyms) require_file(*synonyms, "synonym map");
  if (sample_n && *sample_n == 0) throw UsageError("sample size must be positive");
}

RunConfig parse_config(const std::string& json_text, const fs::path& base) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw UsageError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw UsageError("config must be a JSON object");

  RunConfig c;
  c.base = base;
  const auto path_of = [&](const json& v, const std::string& key) {
    if (!v.is_string()) throw UsageError("config \"" + key + "\" must be a path string");
    return resolve(base, v.get<std::string>());
  };
  try {
    for (const auto& [key, v] : j.items()) {
      if (key == "manifest") {
        c.manifest = path_of(v, key);
      } else if (key == "metrics") {
        if (!v.is_array()) throw UsageError("config \"metrics\" must be an array");
        for (const auto& m : v) {
          if (m.is_string()) {
            c.metrics.push_back(m.get<std::string>());
          } else if (m.is_object() && m.contains("name")) {
            const auto name = m.at("name").get<std::string>();
            c.metrics.push_back(name);
            if (m.contains("params"))
              for (const auto& [k, pv] : m.at("params").items()) c.params[name][k] = param_text(pv, name + "." + k);
          } else {
            throw UsageError("config metrics entries are names or {\"name\", \"params\"} objects");
          }
        }
      } else if (key == "params") {
        for (const auto& [name, kv] : v.items())
          for (const auto& [k, pv] : kv.items()) c.params[name][k] = param_text(pv, name + "." + k);
      } else if (key == "embeddings") {
        for (const auto& [name, p] : v.items()) c.embeddings[name] = path_of(p, "embeddings." + name);
      } else if (key == "contextual") {
        c.contextual = path_of(v, key);
      } else if (key == "lexicon") {
        c.lexicon = path_of(v, key);
      } else if (key == "synonyms") {
        c.synonyms = path_of(v, key);
      } else if (key == "sample_n") {
        if (!v.is_null()) c.sample_n = v.get<std::size_t>();
      } else if (key == "seed") {
        c.seed = v.get<std::uint64_t>();
      } else if (key == "symmetrize") {
        c.symmetrize = v.get<bool>();
      } else if (key == "human_aggregation") {
        c.human = parse_aggregation(v.get<std::string>());
      } else if (key == "out_dir") {
        c.out_dir = path_of(v, key);
      } else {
        throw UsageError("unknown config key \"" + key + "\"");
      }
    }
  } catch (const json::exception& e) {
    throw UsageError(std::string("config has a value of the wrong type: ") + e.what());
  }
  return c;
}

RunConfig load_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read config " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str(), path.parent_path().empty() ? fs::path(".") : path.parent_path());
}

Resources load_resources(const RunConfig& config, const std::vector<MetricDescriptor>& metrics, const Study& study) {
  Resources r;
  for (const auto& [name, path] : config.embeddings)
    r.tables[name] = std::make_shared<const EmbeddingTable>(load_table(path, name).table);
  if (config.contextual) r.contextual = std::make_shared<const ContextualVectors>(load_contextual(*config.contextual));
  if (config.lexicon) r.lexicon = std::make_shared<const NounLexicon>(NounLexicon::load(*config.lexicon));
  if (config.synonyms) r.synonyms = std::make_shared<const SynonymMap>(SynonymMap::load(*config.synonyms));

  const bool idf = std::any_of(metrics.begin(), metrics.end(),
                               [](const auto& d) { return d.name == "bert_score" && d.param("idf", 0.0) != 0.0; });
  if (idf) {
    // Document frequencies over every sentence of the (sampled) study.
    std::vector<TokenSequence> docs;
    for (const auto& ds : study.datasets)
      for (const auto& p : ds.pairs) {
        docs.push_back(tokenize(p.text_a));
        docs.push_back(tokenize(p.text_b));
      }
    r.idf = std::make_shared<const IdfWeights>(compute_idf(docs));
  }
  return r;
}

Study apply_sampling(Study study, const RunConfig& config, std::vector<std::string>* warnings) {
  if (!config.sample_n) return study;
  const auto n = *config.sample_n;
  for (auto& ds : study.datasets) {
    if (ds.size() > n) {
      ds = sample_pairs(ds, n, config.seed);
    } else if (warnings && ds.size() < n) {
      warnings->push_back("dataset " + ds.dataset_id + " has " + std::to_string(ds.size()) +
                          " pairs, fewer than the sample size " + std::to_string(n) + "; using all of them");
    }
  }
  return study;
}

// ---------------------------------------------------------------------------
// Commands

namespace {

struct ScoringFlags {
  std::string config;
  std::string manifest;
  std::string metrics;
  std::vector<std::string> params;
  std::vector<std::string> embeddings;
  std::string contextual, lexicon, synonyms, out_dir, human;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> sample_n;
  bool symmetrize = false;
};

void add_scoring_flags(CLI::App& cmd, ScoringFlags& f) {
  cmd.add_option("--config", f.config, "JSON run config; flags override its fields");
  cmd.add_option("--manifest", f.manifest, "Study manifest");
  cmd.add_option("--metrics", f.metrics, "Comma-separated metric names");
  cmd.add_option("--param", f.params, "Metric parameter override, METRIC.KEY=VALUE (repeatable)");
  cmd.add_option("--embedding", f.embeddings, "Embedding table, NAME=PATH (repeatable)");
  cmd.add_option("--contextual", f.contextual, "Contextual vectors (JSON Lines)");
  cmd.add_option("--lexicon", f.lexicon, "Noun lexicon, one word per line");
  cmd.add_option("--synonyms", f.synonyms, "Synonym map for METEOR (JSON Lines)");
  cmd.add_option("--seed", f.seed, "Sampling seed");
  cmd.add_option("--sample-n", f.sample_n, "Pairs sampled per dataset");
  cmd.add_option("--out-dir", f.out_dir, "Output directory");
  cmd.add_option("--human-aggregation", f.human, "Per-pair human score: mean or median");
  cmd.add_flag("--symmetrize", f.symmetrize, "Average both directions for asymmetric metrics");
}

RunConfig build_config(const ScoringFlags& f) {
  RunConfig c;
  if (!f.config.empty()) c = load_config(f.config);
  const fs::path cwd = ".";
  if (f.config.empty()) c.base = cwd;
  if (!f.manifest.empty()) c.manifest = f.manifest;
  if (!f.metrics.empty()) c.metrics = split(f.metrics, ',');
  for (const auto& p : f.params) {
    auto [lhs, value] = split_assignment(p, "--param");
    const auto dot = lhs.find('.');
    if (dot == std::string::npos || dot == 0 || dot + 1 == lhs.size())
      throw UsageError("--param expects METRIC.KEY=VALUE, got \"" + p + "\"");
    c.params[lhs.substr(0, dot)][lhs.substr(dot + 1)] = value;
  }
  for (const auto& e : f.embeddings) {
    auto [name, path] = split_assignment(e, "--embedding");
    c.embeddings[name] = path;
  }
  if (!f.contextual.empty()) c.contextual = f.contextual;
  if (!f.lexicon.empty()) c.lexicon = f.lexicon;
  if (!f.synonyms.empty()) c.synonyms = f.synonyms;
  if (f.seed) c.seed = *f.seed;
  if (f.sample_n) c.sample_n = *f.sample_n;
  if (!f.out_dir.empty()) c.out_dir = f.out_dir;
  if (!f.human.empty()) c.human = parse_aggregation(f.human);
  if (f.symmetrize) c.symmetrize = true;
  return c;
}

struct Scored {
  RunConfig config;
  Study study;
  ScoreGrid grid;
};

Scored score_study(const ScoringFlags& flags, std::ostream& err) {
  auto config = build_config(flags);
  config.validate();
  const auto metrics = config.descriptors();

  std::vector<std::string> diagnostics;
  auto study = load_study(config.manifest, &diagnostics);
  study = apply_sampling(std::move(study), config, &diagnostics);
  for (const auto& d : diagnostics) warn(err, d);

  const auto resources = load_resources(config, metrics, study);
  for (const auto& d : metrics) {
    try {
      make_metric(d)->check(resources);
    } catch (const MissingResource& e) {
      throw UsageError(e.what());
    }
  }
  auto grid = compute_all(study, metrics, resources, ComputeOptions{config.symmetrize});
  for (const auto& cell : grid.cells)
    if (cell.missing > 0)
      warn(err, cell.metric + " on " + cell.dataset_id + ": " + std::to_string(cell.missing) + " of " +
                    std::to_string(cell.scores.size()) + " pairs have no score");
  return {std::move(config), std::move(study), std::move(grid)};
}

int cmd_score(const ScoringFlags& flags, std::ostream& out, std::ostream& err) {
  const auto s = score_study(flags, err);
  const auto path = s.config.out_dir / "scores.csv";
  write_text(path, scores_csv(s.grid, s.config.hash()));
  out << path.generic_string() << '\n';
  return kExitOk;
}

int cmd_evaluate(const ScoringFlags& flags, std::ostream& out, std::ostream& err) {
  const auto s = score_study(flags, err);
  const auto hash = s.config.hash();

  std::string why;
  const auto human = human_summaries(s.study, s.config.human, &why);
  if (!human) warn(err, "human-relative outputs omitted: " + why);
  const auto report = build_report(s.study, s.grid, human ? *human : std::vector<HumanDatasetSummary>{}, s.config.human);
  for (const auto& w : report.warnings) warn(err, w);
  for (const auto& m : report.metrics)
    for (const auto& note : m.notes) warn(err, m.metric + ": " + note);

  std::vector<fs::path> written{s.config.out_dir / "scores.csv"};
  write_text(written.front(), scores_csv(s.grid, hash));
  for (auto& p : write_report(report, s.config.out_dir, hash)) written.push_back(std::move(p));
  for (const auto& p : written) out << p.generic_string() << '\n';
  return kExitOk;
}

struct DatasetFlags {
  std::string config, manifest, dataset, input, output, id;
  std::optional<std::size_t> n;
  std::uint64_t seed = 0;
};

void add_dataset_flags(CLI::App& cmd, DatasetFlags& f) {
  cmd.add_option("--config", f.config, "JSON run config (its manifest is used with --dataset)");
  cmd.add_option("--manifest", f.manifest, "Study manifest");
  cmd.add_option("--dataset", f.dataset, "Dataset id in the manifest");
  cmd.add_option("--input", f.input, "Pair file (JSON Lines) instead of a manifest dataset");
  cmd.add_option("-n,--n", f.n, "Number of pairs")->required();
  cmd.add_option("--seed", f.seed, "Seed");
  cmd.add_option("--output", f.output, "Output JSON Lines file")->required();
}

PairDataset load_source(const DatasetFlags& f, std::ostream& err) {
  if (f.dataset.empty() == f.input.empty()) throw UsageError("give exactly one of --dataset and --input");
  if (!f.input.empty()) {
    require_file(f.input, "input");
    auto r = load_pairs(f.input);
    for (const auto& d : r.diagnostics) warn(err, d);
    r.dataset.dataset_id = fs::path(f.input).stem().string();
    return std::move(r.dataset);
  }
  fs::path manifest = f.manifest;
  if (manifest.empty() && !f.config.empty()) manifest = load_config(f.config).manifest;
  if (manifest.empty()) throw UsageError("--dataset needs --manifest or a config naming one");
  require_file(manifest, "manifest");
  for (const auto& entry : load_manifest(manifest)) {
    if (entry.dataset_id != f.dataset) continue;
    auto r = load_pairs(entry.path, entry.format);
    for (const auto& d : r.diagnostics) warn(err, d);
    r.dataset.dataset_id = entry.dataset_id;
    r.dataset.kind = entry.kind;
    r.dataset.source_dataset_id = entry.source_dataset_id;
    return std::move(r.dataset);
  }
  throw UsageError("dataset \"" + f.dataset + "\" is not in " + manifest.string());
}

int cmd_random_pairs(const DatasetFlags& f, std::ostream& out, std::ostream& err) {
  const auto source = load_source(f, err);
  const auto capacity = random_pair_capacity(source);
  if (*f.n == 0) throw UsageError("-n must be positive");
  if (*f.n > capacity)
    throw UsageError("cannot build " + std::to_string(*f.n) + " random pairs from " + source.dataset_id +
                     "; at most " + std::to_string(capacity) + " are possible");
  const std::string id = f.id.empty() ? source.dataset_id + "_random" : f.id;
  const auto generated = generate_random_pairs(source, *f.n, f.seed, id);
  save_pairs(generated, f.output);

  json entry{{"dataset_id", id}, {"kind", "random"}, {"path", f.output}, {"source_dataset_id", source.dataset_id}};
  out << entry.dump() << '\n';
  return kExitOk;
}

int cmd_sample(const DatasetFlags& f, std::ostream& out, std::ostream& err) {
  const auto source = load_source(f, err);
  if (*f.n == 0 || *f.n > source.size())
    throw UsageError("-n must be between 1 and " + std::to_string(source.size()) + " for " + source.dataset_id);
  save_pairs(sample_pairs(source, *f.n, f.seed), f.output);
  out << f.output << '\n';
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Semantic similarity metric evaluation"};
  app.name(args.empty() ? "semsim" : fs::path(args.front()).filename().string());
  app.require_subcommand(1);

  ScoringFlags score_flags, evaluate_flags;
  auto* score = app.add_subcommand("score", "Score every pair of every dataset; writes scores.csv");
  add_scoring_flags(*score, score_flags);
  auto* evaluate = app.add_subcommand("evaluate", "Score, summarize and compare metrics; writes tables and report.json");
  add_scoring_flags(*evaluate, evaluate_flags);

  DatasetFlags random_flags, sample_flags;
  auto* random = app.add_subcommand("random-pairs", "Build a random-pair dataset from unaligned sentences");
  add_dataset_flags(*random, random_flags);
  random->add_option("--id", random_flags.id, "Dataset id of the generated pairs");
  auto* sample = app.add_subcommand("sample", "Uniformly sample pairs without replacement");
  add_dataset_flags(*sample, sample_flags);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  if (argv.empty()) argv.push_back("semsim");

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*score) return cmd_score(score_flags, out, err);
    if (*evaluate) return cmd_evaluate(evaluate_flags, out, err);
    if (*random) return cmd_random_pairs(random_flags, out, err);
    if (*sample) return cmd_sample(sample_flags, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return kExitUsage;
}

}  // namespace semsim::cli
