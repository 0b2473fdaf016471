#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace semsim {

/// Two texts with the human similarity judgements collected for them (1..5 each).
struct SentencePair {
  std::string pair_id;
  std::string text_a;
  std::string text_b;
  std::vector<int> human_scores;
  std::optional<double> mean_human;

  /// Builds a pair and fills mean_human from the scores. Throws Error when an
  /// invariant is violated (score out of [1,5], blank text).
  static SentencePair make(std::string id, std::string a, std::string b, std::vector<int> scores = {});

  bool has_human() const noexcept { return !human_scores.empty(); }
};

enum class DatasetKind { paraphrase, style_transfer, random };

std::string_view to_string(DatasetKind kind) noexcept;
/// Accepts "paraphrase", "style_transfer" (or "style-transfer"), "random".
DatasetKind parse_dataset_kind(std::string_view text);

struct PairDataset {
  std::string dataset_id;
  DatasetKind kind = DatasetKind::paraphrase;
  std::vector<SentencePair> pairs;
  std::optional<std::string> source_dataset_id;

  std::size_t size() const noexcept { return pairs.size(); }
  bool is_random() const noexcept { return kind == DatasetKind::random; }

  /// Throws Error on duplicate pair ids or a random dataset without a source.
  void validate() const;
};

struct Study {
  std::vector<PairDataset> datasets;
  std::map<std::string, std::string> metadata;

  const PairDataset* find(std::string_view dataset_id) const noexcept;
  bool has_random() const noexcept;
  bool has_non_random() const noexcept;

  /// Unique dataset ids, every dataset valid, at least one non-random dataset.
  void validate() const;
};

// ---------------------------------------------------------------------------
// I/O

enum class PairFormat { jsonl, tsv };

/// Column layout of a pair file. For TSV the indices are 0-based columns and
/// scores are semicolon separated; an empty score cell means "no scores".
struct FormatSpec {
  PairFormat format = PairFormat::jsonl;
  std::size_t id_column = 0;
  std::size_t a_column = 1;
  std::size_t b_column = 2;
  std::optional<std::size_t> scores_column = 3;
  bool has_header = false;
};

struct LoadResult {
  PairDataset dataset;
  /// Rows that were skipped (score outside [1,5]) and other warnings.
  std::vector<std::string> diagnostics;
};

/// Reads a pair file. Malformed rows throw ParseError naming the line; rows
/// with out-of-range scores are dropped and reported in diagnostics.
LoadResult load_pairs(const std::filesystem::path& path, const FormatSpec& spec = {});
LoadResult parse_pairs(std::string_view content, const FormatSpec& spec = {});

/// Writes JSON Lines: {"id","a","b","scores"}; "scores" omitted when empty.
void save_pairs(const PairDataset& dataset, const std::filesystem::path& path);
std::string format_pairs_jsonl(const PairDataset& dataset);

struct ManifestEntry {
  std::string dataset_id;
  DatasetKind kind = DatasetKind::paraphrase;
  std::filesystem::path path;
  std::optional<std::string> source_dataset_id;
  FormatSpec format;
};

/// Study manifest: {"datasets": [{"dataset_id","kind","path","source_dataset_id"?,
/// "format"?: "jsonl"|"tsv", "columns"?: {...}}], "metadata"?: {...}}.
/// Relative paths resolve against the manifest's directory.
std::vector<ManifestEntry> load_manifest(const std::filesystem::path& path,
                                         std::map<std::string, std::string>* metadata = nullptr);

/// Loads every dataset named in the manifest. Diagnostics from each file are
/// appended to `diagnostics` (prefixed with the dataset id) when non-null.
Study load_study(const std::filesystem::path& manifest_path, std::vector<std::string>* diagnostics = nullptr);

// ---------------------------------------------------------------------------
// Human labels

enum class HumanAggregation { mean, median };

/// Per-pair human score: mean (default) or median of the annotator scores.
std::optional<double> pair_human_score(const SentencePair& pair, HumanAggregation how = HumanAggregation::mean);

struct HumanSummary {
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation (ddof = 1) of per-pair scores
  std::size_t n = 0;
  bool degenerate = false;  // n == 1: std is reported as 0
};

/// Mean and sample std of per-pair human scores. Throws Error listing the
/// pair ids without scores when any pair is unlabelled, or on an empty dataset.
HumanSummary aggregate_human(const PairDataset& dataset, HumanAggregation how = HumanAggregation::mean);

// ---------------------------------------------------------------------------
// Sampling

/// Uniform sample of n pairs without replacement using a partial Fisher-Yates
/// shuffle driven by SplitMix64(seed): for i in [0, n) swap index i with
/// i + uniform(size - i). Output keeps the shuffled order.
PairDataset sample_pairs(const PairDataset& dataset, std::size_t n, std::uint64_t seed);

/// Number of distinct random pairs generate_random_pairs can build from `dataset`.
std::size_t random_pair_capacity(const PairDataset& dataset);

/// Builds n pairs of sentences that were not aligned in `dataset`.
///
/// The pool holds the distinct sentence strings of the dataset in first-seen
/// order (a0, b0, a1, b1, ...); each string remembers the pairs it occurs in.
/// Two pool entries are admissible when they share no originating pair, which
/// excludes aligned pairs and identical strings. Draw loop, with
/// rng = SplitMix64(seed) and M the pool size:
///
///   i = rng.uniform(M); j = rng.uniform(M)
///   reject if i == j, if {i, j} is inadmissible or was already emitted
///   otherwise emit (pool[i], pool[j]) with id "<output_id>-<k>"
///
/// Throws Error with the achievable maximum when n exceeds random_pair_capacity.
PairDataset generate_random_pairs(const PairDataset& dataset, std::size_t n, std::uint64_t seed,
                                  std::string output_id = {});

}  // namespace semsim
