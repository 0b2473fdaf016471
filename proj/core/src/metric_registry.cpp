#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <set>

#include "semsim/error.hpp"
#include "semsim/metrics.hpp"

namespace semsim {

std::string_view to_string(Polarity p) noexcept { return p == Polarity::similarity ? "similarity" : "distance"; }

double MetricDescriptor::param(std::string_view key, double fallback) const {
  auto it = params.find(std::string(key));
  if (it == params.end()) return fallback;
  double v = 0.0;
  const auto& s = it->second;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error("metric " + name + ": parameter " + std::string(key) + "=\"" + s + "\" is not a number");
  return v;
}

std::string MetricDescriptor::param(std::string_view key, std::string_view fallback) const {
  auto it = params.find(std::string(key));
  return it == params.end() ? std::string(fallback) : it->second;
}

namespace {

struct Entry {
  std::string name;
  Polarity polarity;
  std::map<std::string, std::string> defaults;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = {
      {"word_overlap", Polarity::similarity, {}},
      {"pos_distance", Polarity::distance, {{"table", "w2v"}, {"aggregation", "nearest"}}},
      {"chrf", Polarity::similarity, {{"max_n", "6"}, {"beta", "2"}}},
      {"cosine_w2v", Polarity::distance, {{"table", "w2v"}}},
      {"cosine_fasttext", Polarity::distance, {{"table", "fasttext"}}},
      {"wmd", Polarity::distance, {{"table", "w2v"}}},
      {"elmo_l2", Polarity::distance, {}},
      {"rouge_1", Polarity::similarity, {{"mode", "recall"}}},
      {"rouge_2", Polarity::similarity, {{"mode", "recall"}}},
      {"rouge_l", Polarity::similarity, {{"beta", "1"}}},
      {"bleu", Polarity::similarity, {{"max_n", "4"}}},
      {"meteor", Polarity::similarity, {{"recall_weight", "9"}, {"gamma", "0.5"}, {"beta", "3"}}},
      {"bert_score", Polarity::similarity, {{"idf", "0"}}},
  };
  return table;
}

const Entry* find_entry(std::string_view name) {
  for (const auto& e : entries())
    if (e.name == name) return &e;
  return nullptr;
}

std::size_t count_param(const MetricDescriptor& d, std::string_view key, double fallback) {
  const double v = d.param(key, fallback);
  if (v < 1.0 || v != std::floor(v)) throw Error("metric " + d.name + ": " + std::string(key) + " must be a positive integer");
  return static_cast<std::size_t>(v);
}

const EmbeddingTable& table_for(const MetricDescriptor& d, const Resources& r) {
  const auto name = d.param("table", "w2v");
  auto it = r.tables.find(name);
  if (it == r.tables.end() || !it->second)
    throw MissingResource("metric " + d.name + " needs embedding table \"" + name + "\"");
  return *it->second;
}

class TableMetric : public Metric {
 public:
  using Fn = std::function<std::optional<double>(const PairView&, const EmbeddingTable&, const Resources&)>;
  TableMetric(MetricDescriptor d, Fn fn, bool needs_lexicon) : Metric(std::move(d)), fn_(std::move(fn)), needs_lexicon_(needs_lexicon) {}

  void check(const Resources& r) const override {
    table_for(descriptor(), r);
    if (needs_lexicon_ && !r.lexicon) throw MissingResource("metric " + descriptor().name + " needs a noun lexicon");
  }
  std::optional<double> score(const PairView& p, const Resources& r) const override {
    return fn_(p, table_for(descriptor(), r), r);
  }

 private:
  Fn fn_;
  bool needs_lexicon_;
};

class TextMetric : public Metric {
 public:
  using Fn = std::function<double(const TokenSequence& cand, const TokenSequence& ref, const SentencePair&)>;
  TextMetric(MetricDescriptor d, Fn fn, bool directional, bool symmetrize)
      : Metric(std::move(d)), fn_(std::move(fn)), symmetrize_(directional && symmetrize) {}

  void check(const Resources&) const override {}
  std::optional<double> score(const PairView& p, const Resources&) const override {
    const double forward = fn_(p.b, p.a, p.pair);
    if (!symmetrize_) return forward;
    return 0.5 * (forward + fn_(p.a, p.b, p.pair));
  }

 private:
  Fn fn_;
  bool symmetrize_;
};

class ContextualMetric : public Metric {
 public:
  using Fn = std::function<double(const ContextualPairVectors&, const Resources&)>;
  ContextualMetric(MetricDescriptor d, Fn fn) : Metric(std::move(d)), fn_(std::move(fn)) {}

  void check(const Resources& r) const override {
    if (!r.contextual)
      throw MissingResource("metric " + descriptor().name + " needs a contextual-vector file (--contextual)");
    if (descriptor().param("idf", 0.0) != 0.0 && !r.idf)
      throw MissingResource("metric " + descriptor().name + " was asked for idf weighting but no weights are loaded");
  }
  std::optional<double> score(const PairView& p, const Resources& r) const override {
    if (!p.contextual) return std::nullopt;
    return fn_(*p.contextual, r);
  }

 private:
  Fn fn_;
};

std::unique_ptr<Metric> build(const MetricDescriptor& d, bool symmetrize) {
  const auto& n = d.name;
  if (n == "word_overlap")
    return std::make_unique<TextMetric>(
        d, [](const TokenSequence& c, const TokenSequence& r, const SentencePair&) { return word_overlap(r, c); },
        false, false);
  if (n == "chrf") {
    const auto max_n = count_param(d, "max_n", 6);
    const double beta = d.param("beta", 2.0);
    return std::make_unique<TextMetric>(
        d,
        [max_n, beta](const TokenSequence&, const TokenSequence&, const SentencePair& p) {
          return chrf(p.text_a, p.text_b, max_n, beta);
        },
        false, false);
  }
  if (n == "bleu") {
    const auto max_n = count_param(d, "max_n", 4);
    return std::make_unique<TextMetric>(
        d, [max_n](const TokenSequence& c, const TokenSequence& r, const SentencePair&) { return bleu(c, r, max_n); },
        true, symmetrize);
  }
  if (n == "rouge_1" || n == "rouge_2") {
    const std::size_t order = n == "rouge_1" ? 1 : 2;
    const auto mode_name = d.param("mode", "recall");
    if (mode_name != "recall" && mode_name != "f1") throw Error("metric " + n + ": mode must be recall or f1");
    const auto mode = mode_name == "f1" ? RougeMode::f1 : RougeMode::recall;
    return std::make_unique<TextMetric>(
        d,
        [order, mode](const TokenSequence& c, const TokenSequence& r, const SentencePair&) {
          return rouge_n(c, r, order, mode);
        },
        true, symmetrize);
  }
  if (n == "rouge_l") {
    const double beta = d.param("beta", 1.0);
    return std::make_unique<TextMetric>(
        d, [beta](const TokenSequence& c, const TokenSequence& r, const SentencePair&) { return rouge_l(c, r, beta); },
        true, symmetrize);
  }
  if (n == "meteor") {
    MeteorParams mp{d.param("recall_weight", 9.0), d.param("gamma", 0.5), d.param("beta", 3.0)};
    class Meteor : public Metric {
     public:
      Meteor(MetricDescriptor desc, MeteorParams params, bool sym)
          : Metric(std::move(desc)), params_(params), symmetrize_(sym) {}
      void check(const Resources&) const override {}
      std::optional<double> score(const PairView& p, const Resources& r) const override {
        const SynonymMap* syn = r.synonyms.get();
        const double forward = meteor(p.b, p.a, syn, params_);
        if (!symmetrize_) return forward;
        return 0.5 * (forward + meteor(p.a, p.b, syn, params_));
      }

     private:
      MeteorParams params_;
      bool symmetrize_;
    };
    return std::make_unique<Meteor>(d, mp, symmetrize);
  }
  if (n == "cosine_w2v" || n == "cosine_fasttext")
    return std::make_unique<TableMetric>(
        d, [](const PairView& p, const EmbeddingTable& t, const Resources&) { return cosine_static(p.a, p.b, t); },
        false);
  if (n == "wmd")
    return std::make_unique<TableMetric>(
        d, [](const PairView& p, const EmbeddingTable& t, const Resources&) { return wmd(p.a, p.b, t); }, false);
  if (n == "pos_distance") {
    const auto agg = d.param("aggregation", "nearest");
    if (agg != "nearest" && agg != "cross_mean") throw Error("metric pos_distance: aggregation must be nearest or cross_mean");
    const auto how = agg == "nearest" ? NounAggregation::nearest : NounAggregation::cross_mean;
    return std::make_unique<TableMetric>(
        d,
        [how](const PairView& p, const EmbeddingTable& t, const Resources& r) {
          return pos_distance(p.a, p.b, *r.lexicon, t, how);
        },
        true);
  }
  if (n == "elmo_l2")
    return std::make_unique<ContextualMetric>(d, [](const ContextualPairVectors& v, const Resources&) { return elmo_l2(v); });
  if (n == "bert_score") {
    const bool use_idf = d.param("idf", 0.0) != 0.0;
    return std::make_unique<ContextualMetric>(d, [use_idf](const ContextualPairVectors& v, const Resources& r) {
      return bert_score(v, use_idf ? r.idf.get() : nullptr).f1;
    });
  }
  throw Error("unknown metric \"" + n + "\"");
}

}  // namespace

const std::vector<std::string>& known_metrics() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& e : entries()) out.push_back(e.name);
    return out;
  }();
  return names;
}

bool is_known_metric(std::string_view name) { return find_entry(name) != nullptr; }

MetricDescriptor describe_metric(std::string_view name) {
  const Entry* e = find_entry(name);
  if (!e) {
    std::string msg = "unknown metric \"" + std::string(name) + "\"; known metrics:";
    for (const auto& k : known_metrics()) msg += " " + k;
    throw Error(msg);
  }
  return MetricDescriptor{e->name, e->polarity, e->defaults};
}

bool Metric::needs_contextual() const noexcept {
  return descriptor_.name == "elmo_l2" || descriptor_.name == "bert_score";
}

std::unique_ptr<Metric> make_metric(const MetricDescriptor& descriptor) {
  const auto canonical = describe_metric(descriptor.name);
  if (canonical.polarity != descriptor.polarity)
    throw Error("metric " + descriptor.name + " has fixed polarity " + std::string(to_string(canonical.polarity)));
  MetricDescriptor merged = canonical;
  for (const auto& [k, v] : descriptor.params) merged.params[k] = v;
  const bool symmetrize = merged.param("symmetrize", 0.0) != 0.0;
  return build(merged, symmetrize);
}

const GridCell* ScoreGrid::find(std::string_view metric, std::string_view dataset_id) const noexcept {
  for (const auto& c : cells)
    if (c.metric == metric && c.dataset_id == dataset_id) return &c;
  return nullptr;
}

const ContextualPairVectors* find_contextual(const ContextualVectors& vectors, std::string_view dataset_id,
                                             std::string_view pair_id) {
  std::string scoped(dataset_id);
  scoped += '/';
  scoped += pair_id;
  if (auto it = vectors.find(scoped); it != vectors.end()) return &it->second;
  if (auto it = vectors.find(std::string(pair_id)); it != vectors.end()) return &it->second;
  return nullptr;
}

ScoreGrid compute_all(const Study& study, const std::vector<MetricDescriptor>& registry, const Resources& resources,
                      const ComputeOptions& options) {
  std::vector<std::unique_ptr<Metric>> metrics;
  std::set<std::string> names;
  for (const auto& d : registry) {
    if (!names.insert(d.name).second) throw Error("metric " + d.name + " selected twice");
    MetricDescriptor desc = d;
    if (options.symmetrize) desc.params["symmetrize"] = "1";
    metrics.push_back(make_metric(desc));
    metrics.back()->check(resources);
  }
  for (const auto& ds : study.datasets) ds.validate();

  ScoreGrid grid;
  for (const auto& m : metrics) {
    for (const auto& ds : study.datasets) {
      GridCell cell;
      cell.metric = m->descriptor().name;
      cell.dataset_id = ds.dataset_id;
      cell.polarity = m->descriptor().polarity;
      grid.cells.push_back(std::move(cell));
    }
  }

  for (std::size_t di = 0; di < study.datasets.size(); ++di) {
    const auto& ds = study.datasets[di];
    std::vector<std::size_t> order(ds.size());
    for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return ds.pairs[x].pair_id < ds.pairs[y].pair_id; });

    for (auto k : order) {
      const auto& pair = ds.pairs[k];
      const TokenSequence a = tokenize(pair.text_a);
      const TokenSequence b = tokenize(pair.text_b);
      const ContextualPairVectors* ctx =
          resources.contextual ? find_contextual(*resources.contextual, ds.dataset_id, pair.pair_id) : nullptr;
      const PairView view{pair, a, b, ctx};
      for (std::size_t mi = 0; mi < metrics.size(); ++mi) {
        auto& cell = grid.cells[mi * study.datasets.size() + di];
        std::optional<double> value;
        try {
          value = metrics[mi]->score(view, resources);
        } catch (const DomainError&) {
          value.reset();
        }
        if (!value) ++cell.missing;
        cell.scores.push_back(PairScore{pair.pair_id, value, cell.metric});
      }
    }
  }
  return grid;
}

}  // namespace semsim
