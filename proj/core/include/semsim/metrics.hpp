#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "semsim/corpus.hpp"
#include "semsim/embeddings.hpp"
#include "semsim/textproc.hpp"

namespace semsim {

// ---------------------------------------------------------------------------
// Pairwise metrics. Directional ones take (candidate, reference); in a
// SentencePair text_a is the reference and text_b the candidate.

/// Jaccard index of the two token sets. Throws Error on an empty sequence.
double word_overlap(const TokenSequence& a, const TokenSequence& b);

enum class NounAggregation {
  nearest,     // mean of nearest-noun distances, averaged over both directions
  cross_mean,  // mean over every (noun of a, noun of b) combination
};

/// Distance between the embeddings of the nouns of a and b (OOV nouns skipped).
/// nullopt when either side has no embeddable noun.
std::optional<double> pos_distance(const TokenSequence& a, const TokenSequence& b, const NounLexicon& lexicon,
                                   const EmbeddingTable& table, NounAggregation how = NounAggregation::nearest);

/// Character n-gram F-score, `reference` first. Per order n = 1..max_n the
/// clipped matches give precision and recall; orders where neither text has an
/// n-gram are skipped, the rest are averaged, then combined as
/// (1 + beta^2) P R / (beta^2 P + R). 0 when nothing matches.
double chrf(std::string_view reference, std::string_view hypothesis, std::size_t max_n = 6, double beta = 2.0);

/// 1 - cos(minmaxmean(a), minmaxmean(b)); nullopt if either side is all-OOV
/// or has a zero sentence vector.
std::optional<double> cosine_static(const TokenSequence& a, const TokenSequence& b, const EmbeddingTable& table);

/// Word Mover's Distance: exact transport between the nBOW weights of the
/// unique in-vocabulary tokens under Euclidean ground cost. nullopt if either side is all-OOV.
std::optional<double> wmd(const TokenSequence& a, const TokenSequence& b, const EmbeddingTable& table);

/// Euclidean distance between the two sentence vectors. Throws DomainError if one is absent.
double elmo_l2(const ContextualPairVectors& vectors);

/// Sentence BLEU, unsmoothed, uniform weights over orders 1..min(max_n, |candidate|),
/// times BP = min(1, exp(1 - r/c)). 0 when any used precision is 0.
double bleu(const TokenSequence& candidate, const TokenSequence& reference, std::size_t max_n = 4);

enum class RougeMode { recall, f1 };

/// ROUGE-N with clipped n-gram matches. Throws DomainError if the reference is shorter than n.
double rouge_n(const TokenSequence& candidate, const TokenSequence& reference, std::size_t n,
               RougeMode mode = RougeMode::recall);

/// LCS-based F-measure: R = LCS/|ref|, P = LCS/|cand|, F = (1+beta^2) P R / (R + beta^2 P).
double rouge_l(const TokenSequence& candidate, const TokenSequence& reference, double beta = 1.0);

/// Symmetric word-to-synonyms relation for the METEOR synonym stage.
class SynonymMap {
 public:
  void add(std::string_view word, std::string_view synonym);
  bool related(std::string_view a, std::string_view b) const;
  std::size_t size() const noexcept { return links_.size(); }

  /// JSON Lines: {"word": str, "synonyms": [str...]}.
  static SynonymMap load(const std::filesystem::path& path);
  static SynonymMap parse(std::string_view content);

 private:
  std::unordered_map<std::string, std::unordered_set<std::string>> links_;
};

struct MeteorParams {
  double recall_weight = 9.0;  // F = (1 + w) P R / (R + w P)
  double gamma = 0.5;          // penalty = gamma (chunks / m)^beta
  double beta = 3.0;
};

struct MeteorAlignment {
  std::vector<std::pair<std::size_t, std::size_t>> matches;  // (candidate index, reference index), by candidate index
  std::size_t chunks = 0;
};

/// Staged unigram alignment: exact, then Porter stem, then synonyms. Each
/// stage walks the candidate left to right and links each unmatched token to
/// the leftmost unmatched reference token it matches.
MeteorAlignment meteor_align(const TokenSequence& candidate, const TokenSequence& reference,
                             const SynonymMap* synonyms = nullptr);

double meteor(const TokenSequence& candidate, const TokenSequence& reference, const SynonymMap* synonyms = nullptr,
              const MeteorParams& params = {});

/// Token weights for BERT-style scoring; tokens absent from `weights` get `fallback`.
struct IdfWeights {
  std::unordered_map<std::string, double> weights;
  double fallback = 1.0;

  double operator()(std::string_view token) const;
};

/// idf(w) = log((M + 1) / (df(w) + 1)) over M documents; fallback = log(M + 1).
IdfWeights compute_idf(const std::vector<TokenSequence>& documents);

struct BertScore {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

/// Greedy cosine matching of per-token vectors; side a is the reference.
/// F is 0 when P R <= 0. Throws DomainError when a side has no token vectors.
BertScore bert_score(const ContextualPairVectors& vectors, const IdfWeights* idf = nullptr);

// ---------------------------------------------------------------------------
// Registry

enum class Polarity { similarity, distance };

std::string_view to_string(Polarity p) noexcept;

struct MetricDescriptor {
  std::string name;
  Polarity polarity = Polarity::similarity;
  std::map<std::string, std::string> params;

  double param(std::string_view key, double fallback) const;
  std::string param(std::string_view key, std::string_view fallback) const;
};

/// Registered metric names, in the canonical order.
const std::vector<std::string>& known_metrics();
bool is_known_metric(std::string_view name);

/// Descriptor with default parameters. Throws Error for an unknown name.
MetricDescriptor describe_metric(std::string_view name);

struct PairScore {
  std::string pair_id;
  std::optional<double> value;  // nullopt = missing (all-OOV, failed precondition, no vectors)
  std::string metric;
};

/// Shared read-only inputs that some metrics need.
struct Resources {
  std::map<std::string, std::shared_ptr<const EmbeddingTable>> tables;  // by table name
  std::shared_ptr<const ContextualVectors> contextual;
  std::shared_ptr<const NounLexicon> lexicon;
  std::shared_ptr<const SynonymMap> synonyms;
  std::shared_ptr<const IdfWeights> idf;
};

/// Inputs for scoring one pair. `contextual` may be null.
struct PairView {
  const SentencePair& pair;
  const TokenSequence& a;
  const TokenSequence& b;
  const ContextualPairVectors* contextual = nullptr;
};

class Metric {
 public:
  explicit Metric(MetricDescriptor d) : descriptor_(std::move(d)) {}
  virtual ~Metric() = default;

  const MetricDescriptor& descriptor() const noexcept { return descriptor_; }

  /// Throws MissingResource when `resources` cannot serve this metric.
  virtual void check(const Resources& resources) const = 0;

  /// nullopt marks a missing value. DomainError propagates to the caller.
  virtual std::optional<double> score(const PairView& pair, const Resources& resources) const = 0;

  bool needs_contextual() const noexcept;

 private:
  MetricDescriptor descriptor_;
};

/// Instantiates a metric; unknown names or a polarity differing from the fixed table throw Error.
std::unique_ptr<Metric> make_metric(const MetricDescriptor& descriptor);

struct ComputeOptions {
  bool symmetrize = false;  // average both directions for bleu, rouge_*, meteor
};

/// Scores of one (metric, dataset) cell, sorted by pair id.
struct GridCell {
  std::string metric;
  std::string dataset_id;
  Polarity polarity = Polarity::similarity;
  std::vector<PairScore> scores;
  std::size_t missing = 0;
};

/// Cells in (metric registry order, dataset order).
struct ScoreGrid {
  std::vector<GridCell> cells;

  const GridCell* find(std::string_view metric, std::string_view dataset_id) const noexcept;
};

/// Contextual records are looked up as "<dataset_id>/<pair_id>" first, then "<pair_id>".
const ContextualPairVectors* find_contextual(const ContextualVectors& vectors, std::string_view dataset_id,
                                             std::string_view pair_id);

/// Scores every pair of every dataset with every metric. All resource checks
/// run before any scoring; pairs failing a per-pair precondition are missing.
ScoreGrid compute_all(const Study& study, const std::vector<MetricDescriptor>& registry, const Resources& resources,
                      const ComputeOptions& options = {});

}  // namespace semsim
