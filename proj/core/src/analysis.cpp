#include "semsim/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "semsim/error.hpp"

namespace semsim {

namespace {

struct Moments {
  double mean = 0.0;
  double std = 0.0;
};

Moments moments(const std::vector<double>& v) {
  Moments m;
  for (double x : v) m.mean += x;
  m.mean /= static_cast<double>(v.size());
  if (v.size() > 1) {
    double ss = 0.0;
    for (double x : v) ss += (x - m.mean) * (x - m.mean);
    m.std = std::sqrt(ss / static_cast<double>(v.size() - 1));
  }
  return m;
}

// Position of every dataset in `b`, checking that `a` ranks the same set.
std::vector<std::size_t> positions_in(const InducedOrder& a, const InducedOrder& b) {
  if (a.ranking.size() != b.ranking.size()) throw Error("rankings cover different dataset sets");
  std::map<std::string, std::size_t> pos;
  for (std::size_t k = 0; k < b.ranking.size(); ++k) pos[b.ranking[k]] = k;
  std::vector<std::size_t> out;
  out.reserve(a.ranking.size());
  for (const auto& id : a.ranking) {
    auto it = pos.find(id);
    if (it == pos.end()) throw Error("rankings cover different dataset sets (\"" + id + "\" appears in only one)");
    out.push_back(it->second);
  }
  if (pos.size() != out.size()) throw Error("ranking lists a dataset twice");
  return out;
}

double mean_of(const DatasetMeans& means, const std::string& id) {
  auto it = means.find(id);
  if (it == means.end()) throw Error("no mean for dataset \"" + id + "\"");
  return it->second;
}

}  // namespace

DatasetSummary summarize(const std::vector<PairScore>& scores, std::string metric, std::string dataset_id) {
  std::vector<double> values;
  for (const auto& s : scores)
    if (s.value) values.push_back(*s.value);
  DatasetSummary out;
  out.metric = std::move(metric);
  out.dataset_id = std::move(dataset_id);
  out.n_scored = values.size();
  out.n_missing = scores.size() - values.size();
  if (values.empty())
    throw Error("metric " + out.metric + " has no scored pair in dataset \"" + out.dataset_id + "\"");
  const auto m = moments(values);
  out.mean = m.mean;
  out.std = m.std;
  out.degenerate = values.size() == 1;
  return out;
}

DatasetSummary summarize(const GridCell& cell) { return summarize(cell.scores, cell.metric, cell.dataset_id); }

double normalized(double mean, Polarity polarity) noexcept { return polarity == Polarity::similarity ? mean : -mean; }

InducedOrder induce_order(std::string metric, const DatasetMeans& means, Polarity polarity) {
  std::vector<std::pair<double, std::string>> keyed;
  for (const auto& [id, m] : means) keyed.emplace_back(normalized(m, polarity), id);
  std::stable_sort(keyed.begin(), keyed.end(), [](const auto& x, const auto& y) {
    if (x.first != y.first) return x.first > y.first;
    return x.second < y.second;
  });
  InducedOrder order;
  order.metric = std::move(metric);
  for (std::size_t k = 0; k < keyed.size(); ++k) {
    if (k > 0 && keyed[k].first == keyed[k - 1].first) order.tie = true;
    order.ranking.push_back(keyed[k].second);
  }
  return order;
}

std::vector<Violation> check_inequalities(const DatasetMeans& means, Polarity polarity, const Study& study) {
  if (!study.has_random()) throw Error("inequality check needs at least one random dataset");
  if (!study.has_non_random()) throw Error("inequality check needs at least one non-random dataset");
  std::vector<Violation> out;
  for (const auto& r : study.datasets) {
    if (r.kind != DatasetKind::random) continue;
    const double nr = normalized(mean_of(means, r.dataset_id), polarity);
    for (const auto& d : study.datasets) {
      if (d.kind == DatasetKind::random) continue;
      if (nr > normalized(mean_of(means, d.dataset_id), polarity)) out.push_back({r.dataset_id, d.dataset_id});
    }
  }
  return out;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw Error("pearson: series differ in length");
  if (x.size() < 2) throw Error("pearson: needs at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw Error("pearson: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

double pearson_with_human(const DatasetMeans& metric_means, Polarity polarity, const DatasetMeans& human_means) {
  if (metric_means.size() != human_means.size()) throw Error("pearson_with_human: dataset sets differ");
  if (metric_means.size() < 3) throw Error("pearson_with_human: needs at least three datasets");
  std::vector<double> x, y;
  for (const auto& [id, m] : metric_means) {
    x.push_back(normalized(m, polarity));
    y.push_back(mean_of(human_means, id));
  }
  return pearson(x, y);
}

double order_correlation(const InducedOrder& a, const InducedOrder& b) {
  const auto pos = positions_in(a, b);
  const std::size_t n = pos.size();
  if (n < 2) throw Error("order correlation needs at least two datasets");
  double d2 = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double d = static_cast<double>(k) - static_cast<double>(pos[k]);
    d2 += d * d;
  }
  const double nn = static_cast<double>(n);
  return 1.0 - 6.0 * d2 / (nn * (nn * nn - 1.0));
}

double kendall_tau(const InducedOrder& a, const InducedOrder& b) {
  const std::size_t n = a.ranking.size();
  if (n < 2) {
    positions_in(a, b);
    throw Error("kendall tau needs at least two datasets");
  }
  const double pairs = static_cast<double>(n * (n - 1) / 2);
  return 1.0 - 2.0 * static_cast<double>(swap_count(a, b)) / pairs;
}

double variability(const DatasetMeans& means, const Study& study) {
  std::vector<double> random, all;
  for (const auto& d : study.datasets) {
    const double m = mean_of(means, d.dataset_id);
    all.push_back(m);
    if (d.kind == DatasetKind::random) random.push_back(m);
  }
  if (random.size() < 2) throw Error("variability needs at least two random datasets");
  const auto [rlo, rhi] = std::minmax_element(random.begin(), random.end());
  const auto [alo, ahi] = std::minmax_element(all.begin(), all.end());
  const double denom = *ahi - *alo;
  if (!(denom > 0.0)) throw Error("variability: metric is constant across datasets");
  return (*rhi - *rlo) / denom;
}

std::size_t rank_coincidence(const InducedOrder& order, const InducedOrder& human) {
  const auto pos = positions_in(order, human);
  std::size_t same = 0;
  for (std::size_t k = 0; k < pos.size(); ++k) same += pos[k] == k;
  return same;
}

std::size_t swap_count(const InducedOrder& order, const InducedOrder& human) {
  const auto pos = positions_in(order, human);
  std::size_t inversions = 0;
  for (std::size_t i = 0; i < pos.size(); ++i)
    for (std::size_t j = i + 1; j < pos.size(); ++j) inversions += pos[i] > pos[j];
  return inversions;
}

std::optional<std::vector<HumanDatasetSummary>> human_summaries(const Study& study, HumanAggregation how,
                                                                std::string* warning) {
  std::vector<HumanDatasetSummary> out;
  for (const auto& d : study.datasets) {
    try {
      out.push_back({d.dataset_id, aggregate_human(d, how)});
    } catch (const Error& e) {
      if (warning) *warning = "dataset \"" + d.dataset_id + "\": " + e.what();
      return std::nullopt;
    }
  }
  return out;
}

ComparisonReport build_report(const Study& study, const ScoreGrid& grid,
                              const std::vector<HumanDatasetSummary>& human, HumanAggregation how) {
  ComparisonReport report;
  for (const auto& d : study.datasets) report.dataset_ids.push_back(d.dataset_id);
  report.human = human;

  DatasetMeans human_means;
  for (const auto& h : human) human_means[h.dataset_id] = h.summary.mean;
  const bool labelled = !human.empty();
  if (labelled) {
    for (const auto& id : report.dataset_ids)
      if (!human_means.count(id)) throw Error("no human summary for dataset \"" + id + "\"");
    report.human_order = induce_order(std::string(kHumanLabel), human_means, Polarity::similarity);
    try {
      report.human_variability = variability(human_means, study);
    } catch (const Error& e) {
      report.warnings.push_back(std::string("human variability: ") + e.what());
    }
  } else {
    report.warnings.push_back("study has no complete human labels; human-relative fields omitted");
  }

  std::vector<std::string> metric_names;
  for (const auto& c : grid.cells)
    if (std::find(metric_names.begin(), metric_names.end(), c.metric) == metric_names.end())
      metric_names.push_back(c.metric);

  for (const auto& name : metric_names) {
    MetricReport mr;
    mr.metric = name;
    DatasetMeans means;
    for (const auto& id : report.dataset_ids) {
      const GridCell* cell = grid.find(name, id);
      if (!cell) throw Error("score grid has no cell for metric " + name + " on dataset \"" + id + "\"");
      mr.polarity = cell->polarity;
      mr.summaries.push_back(summarize(*cell));
      means[id] = mr.summaries.back().mean;
    }
    mr.order = induce_order(name, means, mr.polarity);

    auto attempt = [&mr](const char* what, auto&& fn) {
      try {
        fn();
      } catch (const Error& e) {
        mr.notes.push_back(std::string(what) + ": " + e.what());
      }
    };
    attempt("inequalities", [&] { mr.violations = check_inequalities(means, mr.polarity, study); });
    attempt("variability", [&] { mr.variability = variability(means, study); });
    if (labelled) {
      attempt("pearson", [&] { mr.pearson_with_human = pearson_with_human(means, mr.polarity, human_means); });
      attempt("pair-level pearson", [&] {
        std::vector<double> x, y;
        for (const auto& d : study.datasets) {
          const GridCell* cell = grid.find(name, d.dataset_id);
          std::map<std::string, double> by_id;
          for (const auto& s : cell->scores)
            if (s.value) by_id[s.pair_id] = normalized(*s.value, mr.polarity);
          for (const auto& p : d.pairs) {
            auto it = by_id.find(p.pair_id);
            const auto h = pair_human_score(p, how);
            if (it == by_id.end() || !h) continue;
            x.push_back(it->second);
            y.push_back(*h);
          }
        }
        mr.pearson_pair_level = pearson(x, y);
      });
      attempt("order correlation", [&] {
        mr.order_corr_with_human = order_correlation(mr.order, *report.human_order);
        mr.kendall_with_human = kendall_tau(mr.order, *report.human_order);
      });
      mr.rank_coincidence = rank_coincidence(mr.order, *report.human_order);
      mr.swap_count = swap_count(mr.order, *report.human_order);
    }
    report.metrics.push_back(std::move(mr));
  }

  std::vector<const InducedOrder*> orders;
  for (const auto& mr : report.metrics) {
    report.matrix_labels.push_back(mr.metric);
    orders.push_back(&mr.order);
  }
  if (report.human_order) {
    report.matrix_labels.emplace_back(kHumanLabel);
    orders.push_back(&*report.human_order);
  }
  const std::size_t k = orders.size();
  report.order_corr_matrix = Matrix(k, k, 1.0);
  if (report.dataset_ids.size() >= 2) {
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = i + 1; j < k; ++j) {
        const double r = order_correlation(*orders[i], *orders[j]);
        report.order_corr_matrix(i, j) = r;
        report.order_corr_matrix(j, i) = r;
      }
  }
  return report;
}

}  // namespace semsim
