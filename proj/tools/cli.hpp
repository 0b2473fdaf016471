#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "semsim/corpus.hpp"
#include "semsim/metrics.hpp"

namespace semsim::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

/// Bad flags or config: reported with exit code 2.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::filesystem::path manifest;
  std::vector<std::string> metrics;
  std::map<std::string, std::map<std::string, std::string>> params;  // metric -> key -> value
  std::map<std::string, std::filesystem::path> embeddings;           // table name -> file
  std::optional<std::filesystem::path> contextual;
  std::optional<std::filesystem::path> lexicon;
  std::optional<std::filesystem::path> synonyms;
  std::optional<std::size_t> sample_n;
  std::uint64_t seed = 0;
  bool symmetrize = false;
  HumanAggregation human = HumanAggregation::mean;
  std::filesystem::path out_dir = "out";

  /// Paths in the canonical form are written relative to `base`.
  std::filesystem::path base = ".";

  /// Sorted-key JSON of every field; the config hash is taken over these bytes.
  std::string canonical_json() const;
  std::string hash() const;

  /// Descriptors with defaults merged under the overrides. Throws UsageError
  /// for unknown metrics (listing the known ones) or an empty selection.
  std::vector<MetricDescriptor> descriptors() const;

  /// Metric names valid, manifest and every resource path present.
  void validate() const;
};

/// Parses a JSON config; relative paths resolve against the file's directory.
RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(const std::string& json_text, const std::filesystem::path& base);

/// Loads every resource named in the config.
Resources load_resources(const RunConfig& config, const std::vector<MetricDescriptor>& metrics, const Study& study);

/// Applies the config's sample size to every dataset larger than it. Smaller
/// datasets stay whole and add a warning.
Study apply_sampling(Study study, const RunConfig& config, std::vector<std::string>* warnings);

/// Entry point shared by the executable and the tests.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace semsim::cli
