#include "semsim/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "semsim/error.hpp"
#include "semsim/rng.hpp"

namespace semsim {

using nlohmann::json;

namespace {

bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string_view> split_lines(std::string_view content) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < content.size()) {
    auto end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    auto line = content.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    start = end + 1;
  }
  return lines;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

bool score_in_range(int s) { return s >= 1 && s <= 5; }

struct RawRow {
  std::string id, a, b;
  std::vector<int> scores;
};

RawRow parse_json_row(std::string_view line, std::size_t lineno) {
  json obj;
  try {
    obj = json::parse(line);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("malformed JSON: ") + e.what(), lineno);
  }
  if (!obj.is_object()) throw ParseError("expected a JSON object", lineno);
  RawRow row;
  for (const char* key : {"id", "a", "b"}) {
    auto it = obj.find(key);
    if (it == obj.end() || !it->is_string()) throw ParseError(std::string("missing string field \"") + key + "\"", lineno);
  }
  row.id = obj["id"].get<std::string>();
  row.a = obj["a"].get<std::string>();
  row.b = obj["b"].get<std::string>();
  if (auto it = obj.find("scores"); it != obj.end() && !it->is_null()) {
    if (!it->is_array()) throw ParseError("\"scores\" must be an array of integers", lineno);
    for (const auto& v : *it) {
      if (!v.is_number_integer()) throw ParseError("\"scores\" must be an array of integers", lineno);
      row.scores.push_back(v.get<int>());
    }
  }
  return row;
}

RawRow parse_tsv_row(std::string_view line, std::size_t lineno, const FormatSpec& spec) {
  auto cells = split(line, '\t');
  auto cell = [&](std::size_t idx, const char* what) -> std::string {
    if (idx >= cells.size())
      throw ParseError("missing column " + std::to_string(idx) + " (" + what + "), row has " +
                           std::to_string(cells.size()) + " columns",
                       lineno);
    return std::string(cells[idx]);
  };
  RawRow row;
  row.id = cell(spec.id_column, "id");
  row.a = cell(spec.a_column, "a");
  row.b = cell(spec.b_column, "b");
  if (spec.scores_column && *spec.scores_column < cells.size()) {
    auto raw = trim(cells[*spec.scores_column]);
    if (!raw.empty()) {
      for (auto part : split(raw, ';')) {
        part = trim(part);
        int v = 0;
        std::size_t used = 0;
        try {
          v = std::stoi(std::string(part), &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (part.empty() || used != part.size()) throw ParseError("bad score \"" + std::string(part) + "\"", lineno);
        row.scores.push_back(v);
      }
    }
  }
  return row;
}

}  // namespace

SentencePair SentencePair::make(std::string id, std::string a, std::string b, std::vector<int> scores) {
  if (id.empty()) throw Error("pair id must be non-empty");
  if (is_blank(a) || is_blank(b)) throw Error("pair " + id + ": texts must be non-empty");
  for (int s : scores)
    if (!score_in_range(s)) throw Error("pair " + id + ": score " + std::to_string(s) + " outside [1,5]");
  SentencePair p{std::move(id), std::move(a), std::move(b), std::move(scores), std::nullopt};
  if (!p.human_scores.empty()) {
    double sum = std::accumulate(p.human_scores.begin(), p.human_scores.end(), 0.0);
    p.mean_human = sum / static_cast<double>(p.human_scores.size());
  }
  return p;
}

std::string_view to_string(DatasetKind kind) noexcept {
  switch (kind) {
    case DatasetKind::paraphrase: return "paraphrase";
    case DatasetKind::style_transfer: return "style_transfer";
    case DatasetKind::random: return "random";
  }
  return "paraphrase";
}

DatasetKind parse_dataset_kind(std::string_view text) {
  if (text == "paraphrase") return DatasetKind::paraphrase;
  if (text == "style_transfer" || text == "style-transfer") return DatasetKind::style_transfer;
  if (text == "random") return DatasetKind::random;
  throw Error("unknown dataset kind \"" + std::string(text) + "\" (expected paraphrase, style_transfer, random)");
}

void PairDataset::validate() const {
  if (dataset_id.empty()) throw Error("dataset id must be non-empty");
  if (kind == DatasetKind::random && !source_dataset_id)
    throw Error("random dataset " + dataset_id + " has no source_dataset_id");
  std::unordered_set<std::string_view> seen;
  for (const auto& p : pairs)
    if (!seen.insert(p.pair_id).second) throw Error("dataset " + dataset_id + ": duplicate pair id " + p.pair_id);
}

const PairDataset* Study::find(std::string_view dataset_id) const noexcept {
  for (const auto& d : datasets)
    if (d.dataset_id == dataset_id) return &d;
  return nullptr;
}

bool Study::has_random() const noexcept {
  return std::any_of(datasets.begin(), datasets.end(), [](const auto& d) { return d.is_random(); });
}

bool Study::has_non_random() const noexcept {
  return std::any_of(datasets.begin(), datasets.end(), [](const auto& d) { return !d.is_random(); });
}

void Study::validate() const {
  std::set<std::string_view> ids;
  for (const auto& d : datasets) {
    d.validate();
    if (!ids.insert(d.dataset_id).second) throw Error("duplicate dataset id " + d.dataset_id);
  }
  if (!has_non_random()) throw Error("study needs at least one non-random dataset");
}

// ---------------------------------------------------------------------------

LoadResult parse_pairs(std::string_view content, const FormatSpec& spec) {
  LoadResult result;
  auto lines = split_lines(content);
  std::unordered_set<std::string> ids;
  std::size_t rows = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    auto line = lines[i];
    if (is_blank(line)) continue;
    if (spec.format == PairFormat::tsv && spec.has_header && rows++ == 0) continue;
    RawRow row = spec.format == PairFormat::jsonl ? parse_json_row(line, lineno) : parse_tsv_row(line, lineno, spec);
    if (auto bad = std::find_if_not(row.scores.begin(), row.scores.end(), score_in_range); bad != row.scores.end()) {
      result.diagnostics.push_back("line " + std::to_string(lineno) + ": pair " + row.id + " rejected, score " +
                                   std::to_string(*bad) + " outside [1,5]");
      continue;
    }
    if (row.id.empty()) throw ParseError("empty pair id", lineno);
    if (is_blank(row.a) || is_blank(row.b)) throw ParseError("pair " + row.id + ": empty text", lineno);
    if (!ids.insert(row.id).second) throw ParseError("duplicate pair id " + row.id, lineno);
    result.dataset.pairs.push_back(
        SentencePair::make(std::move(row.id), std::move(row.a), std::move(row.b), std::move(row.scores)));
  }
  if (result.dataset.pairs.empty() && result.diagnostics.empty()) result.diagnostics.emplace_back("no pairs found");
  return result;
}

LoadResult load_pairs(const std::filesystem::path& path, const FormatSpec& spec) {
  auto result = parse_pairs(read_file(path), spec);
  result.dataset.dataset_id = path.stem().string();
  return result;
}

std::string format_pairs_jsonl(const PairDataset& dataset) {
  std::string out;
  for (const auto& p : dataset.pairs) {
    json obj = {{"id", p.pair_id}, {"a", p.text_a}, {"b", p.text_b}};
    if (!p.human_scores.empty()) obj["scores"] = p.human_scores;
    out += obj.dump();
    out += '\n';
  }
  return out;
}

void save_pairs(const PairDataset& dataset, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << format_pairs_jsonl(dataset);
  if (!out) throw Error("write failed for " + path.string());
}

std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path,
                                         std::map<std::string, std::string>* metadata) {
  json doc;
  try {
    doc = json::parse(read_file(path));
  } catch (const json::parse_error& e) {
    throw ParseError(path.string() + ": " + e.what(), 0);
  }
  const json* list = &doc;
  if (doc.is_object()) {
    if (!doc.contains("datasets")) throw ParseError(path.string() + ": manifest has no \"datasets\" list", 0);
    list = &doc["datasets"];
    if (metadata && doc.contains("metadata") && doc["metadata"].is_object())
      for (const auto& [k, v] : doc["metadata"].items()) (*metadata)[k] = v.is_string() ? v.get<std::string>() : v.dump();
  }
  if (!list->is_array()) throw ParseError(path.string() + ": \"datasets\" must be an array", 0);

  const auto base = path.parent_path();
  std::vector<ManifestEntry> entries;
  for (const auto& item : *list) {
    try {
      ManifestEntry e;
      e.dataset_id = item.at("dataset_id").get<std::string>();
      e.kind = parse_dataset_kind(item.at("kind").get<std::string>());
      std::filesystem::path p = item.at("path").get<std::string>();
      e.path = p.is_absolute() ? p : base / p;
      if (item.contains("source_dataset_id") && !item["source_dataset_id"].is_null())
        e.source_dataset_id = item["source_dataset_id"].get<std::string>();
      if (item.contains("format")) {
        auto f = item["format"].get<std::string>();
        if (f == "tsv") e.format.format = PairFormat::tsv;
        else if (f != "jsonl") throw Error("unknown format \"" + f + "\"");
      }
      if (item.contains("columns")) {
        const auto& c = item["columns"];
        e.format.id_column = c.value("id", e.format.id_column);
        e.format.a_column = c.value("a", e.format.a_column);
        e.format.b_column = c.value("b", e.format.b_column);
        if (c.contains("scores")) {
          if (c["scores"].is_null()) e.format.scores_column.reset();
          else e.format.scores_column = c["scores"].get<std::size_t>();
        }
        e.format.has_header = c.value("header", false);
      }
      entries.push_back(std::move(e));
    } catch (const json::exception& ex) {
      throw ParseError(path.string() + ": bad manifest entry: " + ex.what(), 0);
    }
  }
  return entries;
}

Study load_study(const std::filesystem::path& manifest_path, std::vector<std::string>* diagnostics) {
  Study study;
  for (auto& entry : load_manifest(manifest_path, &study.metadata)) {
    LoadResult loaded;
    try {
      loaded = load_pairs(entry.path, entry.format);
    } catch (const ParseError& e) {
      throw ParseError(entry.path.string() + ": " + e.what(), e.line());
    }
    if (diagnostics)
      for (auto& d : loaded.diagnostics) diagnostics->push_back(entry.dataset_id + ": " + d);
    loaded.dataset.dataset_id = entry.dataset_id;
    loaded.dataset.kind = entry.kind;
    loaded.dataset.source_dataset_id = entry.source_dataset_id;
    study.datasets.push_back(std::move(loaded.dataset));
  }
  study.validate();
  return study;
}

// ---------------------------------------------------------------------------

std::optional<double> pair_human_score(const SentencePair& pair, HumanAggregation how) {
  if (pair.human_scores.empty()) return std::nullopt;
  if (how == HumanAggregation::mean) {
    if (pair.mean_human) return pair.mean_human;
    double sum = std::accumulate(pair.human_scores.begin(), pair.human_scores.end(), 0.0);
    return sum / static_cast<double>(pair.human_scores.size());
  }
  auto s = pair.human_scores;
  std::sort(s.begin(), s.end());
  const auto n = s.size();
  return n % 2 == 1 ? static_cast<double>(s[n / 2]) : 0.5 * (s[n / 2 - 1] + s[n / 2]);
}

HumanSummary aggregate_human(const PairDataset& dataset, HumanAggregation how) {
  std::vector<std::string> unlabelled;
  std::vector<double> values;
  values.reserve(dataset.size());
  for (const auto& p : dataset.pairs) {
    if (auto v = pair_human_score(p, how)) values.push_back(*v);
    else unlabelled.push_back(p.pair_id);
  }
  if (!unlabelled.empty()) {
    std::string msg = "dataset " + dataset.dataset_id + ": pairs without human scores:";
    for (const auto& id : unlabelled) msg += " " + id;
    throw Error(msg);
  }
  if (values.empty()) throw Error("dataset " + dataset.dataset_id + " is empty");

  HumanSummary s;
  s.n = values.size();
  s.mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(s.n);
  if (s.n == 1) {
    s.degenerate = true;
  } else {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.std = std::sqrt(ss / static_cast<double>(s.n - 1));
  }
  return s;
}

// ---------------------------------------------------------------------------

PairDataset sample_pairs(const PairDataset& dataset, std::size_t n, std::uint64_t seed) {
  const std::size_t size = dataset.size();
  if (n > size)
    throw Error("cannot sample " + std::to_string(n) + " pairs from dataset " + dataset.dataset_id + " of size " +
                std::to_string(size));
  std::vector<std::size_t> idx(size);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  SplitMix64 rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const auto j = i + static_cast<std::size_t>(rng.uniform(size - i));
    std::swap(idx[i], idx[j]);
  }
  PairDataset out;
  out.dataset_id = dataset.dataset_id;
  out.kind = dataset.kind;
  out.source_dataset_id = dataset.source_dataset_id;
  out.pairs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.pairs.push_back(dataset.pairs[idx[i]]);
  return out;
}

namespace {

struct SentencePool {
  std::vector<const std::string*> texts;
  std::vector<std::vector<std::size_t>> owners;  // sorted ids of originating pairs
  std::vector<std::vector<std::size_t>> members;  // pool entries of each originating pair

  explicit SentencePool(const PairDataset& d) {
    std::unordered_map<std::string_view, std::size_t> index;
    members.resize(d.size());
    for (std::size_t k = 0; k < d.size(); ++k) {
      for (const std::string* s : {&d.pairs[k].text_a, &d.pairs[k].text_b}) {
        auto [it, inserted] = index.try_emplace(*s, texts.size());
        if (inserted) {
          texts.push_back(s);
          owners.emplace_back();
        }
        auto& own = owners[it->second];
        if (own.empty() || own.back() != k) own.push_back(k);
        auto& mem = members[k];
        if (std::find(mem.begin(), mem.end(), it->second) == mem.end()) mem.push_back(it->second);
      }
    }
  }

  std::size_t size() const noexcept { return texts.size(); }

  bool admissible(std::size_t i, std::size_t j) const {
    if (i == j) return false;
    const auto& x = owners[i];
    const auto& y = owners[j];
    auto xi = x.begin();
    auto yi = y.begin();
    while (xi != x.end() && yi != y.end()) {
      if (*xi == *yi) return false;
      if (*xi < *yi) ++xi;
      else ++yi;
    }
    return true;
  }

  std::size_t capacity() const {
    const std::size_t m = size();
    std::size_t blocked = 0;  // ordered (i, j), i != j, sharing an owner
    std::vector<std::size_t> partners;
    for (std::size_t i = 0; i < m; ++i) {
      partners.clear();
      for (auto k : owners[i])
        for (auto j : members[k])
          if (j != i) partners.push_back(j);
      std::sort(partners.begin(), partners.end());
      blocked += static_cast<std::size_t>(std::unique(partners.begin(), partners.end()) - partners.begin());
    }
    return (m * (m - 1) - blocked) / 2;
  }
};

}  // namespace

std::size_t random_pair_capacity(const PairDataset& dataset) {
  return SentencePool(dataset).capacity();
}

PairDataset generate_random_pairs(const PairDataset& dataset, std::size_t n, std::uint64_t seed,
                                  std::string output_id) {
  PairDataset out;
  out.dataset_id = output_id.empty() ? dataset.dataset_id + "_random" : std::move(output_id);
  out.kind = DatasetKind::random;
  out.source_dataset_id = dataset.dataset_id;
  if (n == 0) return out;

  const SentencePool pool(dataset);
  const std::size_t cap = pool.capacity();
  if (n > cap)
    throw Error("cannot build " + std::to_string(n) + " random pairs from dataset " + dataset.dataset_id +
                "; at most " + std::to_string(cap) + " are possible");

  const std::uint64_t m = pool.size();
  SplitMix64 rng(seed);
  std::set<std::pair<std::size_t, std::size_t>> used;
  out.pairs.reserve(n);
  while (out.pairs.size() < n) {
    const auto i = static_cast<std::size_t>(rng.uniform(m));
    const auto j = static_cast<std::size_t>(rng.uniform(m));
    if (!pool.admissible(i, j)) continue;
    if (!used.emplace(std::min(i, j), std::max(i, j)).second) continue;
    out.pairs.push_back(SentencePair::make(out.dataset_id + "-" + std::to_string(out.pairs.size()), *pool.texts[i],
                                           *pool.texts[j]));
  }
  return out;
}

}  // namespace semsim
