#include "semsim/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <tuple>

#include <nlohmann/json.hpp>

#include "semsim/error.hpp"

namespace semsim {

using nlohmann::json;

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::string_view bytes) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(bytes)));
  return buf;
}

std::string csv_field(std::string_view value) {
  if (value.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(value);
  std::string out = "\"";
  for (char c : value) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "NA";
  if (value == 0.0) return "0";  // folds -0
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  if (ec != std::errc()) throw Error("cannot format number");
  return std::string(buf, ptr);
}

namespace {

std::string header(std::string_view hash) { return "# config_hash=" + std::string(hash) + "\n"; }

template <class T>
std::string opt(const std::optional<T>& v) {
  if (!v) return "NA";
  if constexpr (std::is_floating_point_v<T>) return format_number(*v);
  else return std::to_string(*v);
}

std::string row(std::initializer_list<std::string> fields) {
  std::string out;
  bool first = true;
  for (const auto& f : fields) {
    if (!first) out += ',';
    out += csv_field(f);
    first = false;
  }
  return out + "\n";
}

std::string fixed2(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s = buf;
  return s == "-0.00" ? "0.00" : s;
}

std::string join(const std::vector<std::string>& items, std::string_view sep) {
  std::string out;
  for (std::size_t k = 0; k < items.size(); ++k) {
    if (k) out += sep;
    out += items[k];
  }
  return out;
}

template <class T>
json opt_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

json order_json(const InducedOrder& o) { return {{"metric", o.metric}, {"ranking", o.ranking}, {"tie", o.tie}}; }

}  // namespace

std::string scores_csv(const ScoreGrid& grid, std::string_view config_hash) {
  std::vector<const PairScore*> rows;
  std::vector<const GridCell*> owner;
  for (const auto& c : grid.cells)
    for (const auto& s : c.scores) {
      rows.push_back(&s);
      owner.push_back(&c);
    }
  std::vector<std::size_t> idx(rows.size());
  for (std::size_t k = 0; k < idx.size(); ++k) idx[k] = k;
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t x, std::size_t y) {
    return std::tie(owner[x]->metric, owner[x]->dataset_id, rows[x]->pair_id) <
           std::tie(owner[y]->metric, owner[y]->dataset_id, rows[y]->pair_id);
  });
  std::string out = header(config_hash) + row({"metric", "dataset_id", "pair_id", "value"});
  for (auto k : idx) out += row({owner[k]->metric, owner[k]->dataset_id, rows[k]->pair_id, opt(rows[k]->value)});
  return out;
}

std::string summaries_csv(const ComparisonReport& report, std::string_view config_hash) {
  std::string out =
      header(config_hash) + row({"metric", "polarity", "dataset_id", "mean", "std", "n_scored", "n_missing", "degenerate"});
  for (const auto& m : report.metrics)
    for (const auto& s : m.summaries)
      out += row({s.metric, std::string(to_string(m.polarity)), s.dataset_id, format_number(s.mean),
                  format_number(s.std), std::to_string(s.n_scored), std::to_string(s.n_missing),
                  s.degenerate ? "true" : "false"});
  for (const auto& h : report.human)
    out += row({std::string(kHumanLabel), "similarity", h.dataset_id, format_number(h.summary.mean),
                format_number(h.summary.std), std::to_string(h.summary.n), "0",
                h.summary.degenerate ? "true" : "false"});
  return out;
}

std::string table_scores_csv(const ComparisonReport& report, std::string_view config_hash) {
  std::string out = header(config_hash) + "dataset_id";
  for (const auto& m : report.metrics) out += "," + csv_field(m.metric);
  if (!report.human.empty()) out += "," + std::string(kHumanLabel);
  out += "\n";
  for (std::size_t d = 0; d < report.dataset_ids.size(); ++d) {
    out += csv_field(report.dataset_ids[d]);
    for (const auto& m : report.metrics) {
      const auto& s = m.summaries[d];
      out += "," + csv_field(fixed2(s.mean) + " ± " + fixed2(s.std));
    }
    if (!report.human.empty()) {
      const auto& h = report.human[d].summary;
      out += "," + csv_field(fixed2(h.mean) + " ± " + fixed2(h.std));
    }
    out += "\n";
  }
  return out;
}

std::string table_correlations_csv(const ComparisonReport& report, std::string_view config_hash) {
  std::string out = header(config_hash) + row({"metric", "pearson_with_human", "abs_pearson_with_human",
                                               "pearson_pair_level", "spearman_with_human", "kendall_with_human",
                                               "variability", "passes_inequalities", "violations"});
  for (const auto& m : report.metrics) {
    std::optional<double> abs_p;
    if (m.pearson_with_human) abs_p = std::abs(*m.pearson_with_human);
    std::string passes = "NA", violations;
    if (m.violations) {
      passes = m.violations->empty() ? "true" : "false";
      std::vector<std::string> parts;
      for (const auto& v : *m.violations) parts.push_back(v.random_dataset + ">" + v.offended_dataset);
      violations = join(parts, ";");
    }
    out += row({m.metric, opt(m.pearson_with_human), opt(abs_p), opt(m.pearson_pair_level),
                opt(m.order_corr_with_human), opt(m.kendall_with_human), opt(m.variability), passes, violations});
  }
  if (report.human_variability)
    out += row({std::string(kHumanLabel), "NA", "NA", "NA", "NA", "NA", opt(report.human_variability), "NA", ""});
  return out;
}

std::string table_orders_csv(const ComparisonReport& report, std::string_view config_hash) {
  std::string out = header(config_hash) + row({"metric", "rank_coincidence", "swap_count", "tie", "ranking"});
  for (const auto& m : report.metrics)
    out += row({m.metric, opt(m.rank_coincidence), opt(m.swap_count), m.order.tie ? "true" : "false",
                join(m.order.ranking, " > ")});
  if (report.human_order)
    out += row({std::string(kHumanLabel), std::to_string(report.dataset_ids.size()), "0",
                report.human_order->tie ? "true" : "false", join(report.human_order->ranking, " > ")});
  return out;
}

std::string order_matrix_csv(const ComparisonReport& report, std::string_view config_hash) {
  std::string out = header(config_hash) + "metric";
  for (const auto& l : report.matrix_labels) out += "," + csv_field(l);
  out += "\n";
  for (std::size_t i = 0; i < report.matrix_labels.size(); ++i) {
    out += csv_field(report.matrix_labels[i]);
    for (std::size_t j = 0; j < report.matrix_labels.size(); ++j)
      out += "," + format_number(report.order_corr_matrix(i, j));
    out += "\n";
  }
  return out;
}

std::string report_json(const ComparisonReport& report, std::string_view config_hash) {
  json doc;
  doc["config_hash"] = std::string(config_hash);
  doc["datasets"] = report.dataset_ids;
  json human = json::array();
  for (const auto& h : report.human)
    human.push_back({{"dataset_id", h.dataset_id},
                     {"mean", h.summary.mean},
                     {"std", h.summary.std},
                     {"n", h.summary.n},
                     {"degenerate", h.summary.degenerate}});
  doc["human"] = human;
  doc["human_order"] = report.human_order ? order_json(*report.human_order) : json(nullptr);
  doc["human_variability"] = opt_json(report.human_variability);

  json metrics = json::array();
  for (const auto& m : report.metrics) {
    json j;
    j["metric"] = m.metric;
    j["polarity"] = std::string(to_string(m.polarity));
    json sums = json::array();
    for (const auto& s : m.summaries)
      sums.push_back({{"dataset_id", s.dataset_id},
                      {"mean", s.mean},
                      {"std", s.std},
                      {"n_scored", s.n_scored},
                      {"n_missing", s.n_missing},
                      {"degenerate", s.degenerate}});
    j["summaries"] = sums;
    j["order"] = order_json(m.order);
    if (m.violations) {
      json v = json::array();
      for (const auto& x : *m.violations) v.push_back({{"random", x.random_dataset}, {"offended", x.offended_dataset}});
      j["inequality_violations"] = v;
    } else {
      j["inequality_violations"] = nullptr;
    }
    j["variability"] = opt_json(m.variability);
    j["pearson_with_human"] = opt_json(m.pearson_with_human);
    j["pearson_pair_level"] = opt_json(m.pearson_pair_level);
    j["order_corr_with_human"] = opt_json(m.order_corr_with_human);
    j["kendall_with_human"] = opt_json(m.kendall_with_human);
    j["rank_coincidence"] = opt_json(m.rank_coincidence);
    j["swap_count"] = opt_json(m.swap_count);
    j["notes"] = m.notes;
    metrics.push_back(std::move(j));
  }
  doc["metrics"] = metrics;

  json matrix = json::array();
  for (std::size_t i = 0; i < report.matrix_labels.size(); ++i) {
    json r = json::array();
    for (std::size_t j = 0; j < report.matrix_labels.size(); ++j) r.push_back(report.order_corr_matrix(i, j));
    matrix.push_back(std::move(r));
  }
  doc["order_corr_matrix"] = {{"labels", report.matrix_labels}, {"values", matrix}};
  doc["warnings"] = report.warnings;
  return doc.dump(2) + "\n";
}

void write_text(const std::filesystem::path& path, std::string_view content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error("failed writing " + path.string());
}

std::vector<std::filesystem::path> write_report(const ComparisonReport& report, const std::filesystem::path& out_dir,
                                                std::string_view config_hash) {
  const std::pair<const char*, std::string> files[] = {
      {"report.json", report_json(report, config_hash)},
      {"summaries.csv", summaries_csv(report, config_hash)},
      {"table_scores.csv", table_scores_csv(report, config_hash)},
      {"table_correlations.csv", table_correlations_csv(report, config_hash)},
      {"table_orders.csv", table_orders_csv(report, config_hash)},
      {"order_matrix.csv", order_matrix_csv(report, config_hash)},
  };
  std::vector<std::filesystem::path> written;
  for (const auto& [name, content] : files) {
    write_text(out_dir / name, content);
    written.push_back(out_dir / name);
  }
  return written;
}

}  // namespace semsim
