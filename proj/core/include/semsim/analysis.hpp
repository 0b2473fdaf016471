#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "semsim/corpus.hpp"
#include "semsim/metrics.hpp"
#include "semsim/transport.hpp"

namespace semsim {

struct DatasetSummary {
  std::string metric;
  std::string dataset_id;
  double mean = 0.0;
  double std = 0.0;  // ddof = 1; 0 with `degenerate` set when a single value was scored
  std::size_t n_scored = 0;
  std::size_t n_missing = 0;
  bool degenerate = false;
};

/// Mean and sample std over the non-missing values. Throws Error when every value is missing.
DatasetSummary summarize(const std::vector<PairScore>& scores, std::string metric = {}, std::string dataset_id = {});
DatasetSummary summarize(const GridCell& cell);

/// Per-dataset means of one metric, keyed by dataset id.
using DatasetMeans = std::map<std::string, double>;

/// mean for similarity metrics, -mean for distances: higher is always more similar.
double normalized(double mean, Polarity polarity) noexcept;

struct InducedOrder {
  std::string metric;
  std::vector<std::string> ranking;  // rank 1 first
  bool tie = false;                  // some adjacent datasets had equal normalized scores
};

/// Sorts datasets by normalized mean, descending; equal scores fall back to dataset id order.
InducedOrder induce_order(std::string metric, const DatasetMeans& means, Polarity polarity);

struct Violation {
  std::string random_dataset;
  std::string offended_dataset;
};

/// Every (random, non-random) combination where the random dataset scores
/// strictly higher after normalization. Throws Error when the study has no
/// random or no non-random dataset, or a dataset has no mean.
std::vector<Violation> check_inequalities(const DatasetMeans& means, Polarity polarity, const Study& study);

/// Pearson correlation. Throws Error on length mismatch, fewer than 2 points or zero variance.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

/// Dataset-level Pearson between normalized metric means and human means.
/// Needs the same dataset ids on both sides and at least 3 of them.
double pearson_with_human(const DatasetMeans& metric_means, Polarity polarity, const DatasetMeans& human_means);

/// Spearman correlation of the two rankings. Throws Error if they rank different dataset sets.
double order_correlation(const InducedOrder& a, const InducedOrder& b);

/// Kendall tau-b of the two rankings (rankings have no ties, so this equals tau-a).
double kendall_tau(const InducedOrder& a, const InducedOrder& b);

/// (max - min over random datasets) / (max - min over all datasets), on raw means.
/// Throws Error with fewer than 2 random datasets or a zero denominator.
double variability(const DatasetMeans& means, const Study& study);

/// Positions holding the same dataset in both rankings.
std::size_t rank_coincidence(const InducedOrder& order, const InducedOrder& human);

/// Minimum number of adjacent transpositions turning `order` into `human`.
std::size_t swap_count(const InducedOrder& order, const InducedOrder& human);

inline constexpr std::string_view kHumanLabel = "human";

struct MetricReport {
  std::string metric;
  Polarity polarity = Polarity::similarity;
  std::vector<DatasetSummary> summaries;  // study dataset order
  InducedOrder order;
  std::optional<std::vector<Violation>> violations;  // nullopt when the check could not run
  std::optional<double> variability;
  std::optional<double> pearson_with_human;  // dataset level, signed
  std::optional<double> pearson_pair_level;
  std::optional<double> order_corr_with_human;  // Spearman
  std::optional<double> kendall_with_human;
  std::optional<std::size_t> rank_coincidence;
  std::optional<std::size_t> swap_count;
  std::vector<std::string> notes;  // why an optional field is absent
};

struct HumanDatasetSummary {
  std::string dataset_id;
  HumanSummary summary;
};

struct ComparisonReport {
  std::vector<std::string> dataset_ids;
  std::vector<HumanDatasetSummary> human;  // empty when the study is unlabelled
  std::optional<InducedOrder> human_order;
  std::optional<double> human_variability;
  std::vector<MetricReport> metrics;
  std::vector<std::string> matrix_labels;  // metrics, then "human" when labelled
  Matrix order_corr_matrix;
  std::vector<std::string> warnings;
};

/// Human summaries for every dataset, or nullopt (with the reason in `warning`) if any pair is unlabelled.
std::optional<std::vector<HumanDatasetSummary>> human_summaries(const Study& study, HumanAggregation how,
                                                                std::string* warning = nullptr);

/// Assembles the comparison. `human` may be empty, in which case every
/// human-relative field stays unset. Throws Error if a grid cell is missing
/// or has no scored pair.
ComparisonReport build_report(const Study& study, const ScoreGrid& grid,
                              const std::vector<HumanDatasetSummary>& human,
                              HumanAggregation how = HumanAggregation::mean);

}  // namespace semsim
