#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "semsim/textproc.hpp"

namespace semsim {

using Vector = std::vector<double>;

/// Static word vectors (GloVe/FastText style). Immutable once built.
class EmbeddingTable {
 public:
  EmbeddingTable(std::string name, std::size_t dim);

  /// Inserts or replaces a vector; returns false when the token already existed.
  bool insert(std::string token, Vector values);

  /// Lowercases the token before matching against stored keys.
  const Vector* lookup(std::string_view token) const;

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return vectors_.size(); }
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
  std::size_t dim_;
  std::unordered_map<std::string, Vector> vectors_;
};

struct TableLoadResult {
  EmbeddingTable table;
  std::vector<std::string> warnings;
};

/// Word-vector text format: "token v1 ... vd" per line. The first row fixes d;
/// a row of another width throws ParseError with its line number. A leading
/// word2vec-style "count dim" header line is skipped. Duplicate tokens: last wins, warned.
TableLoadResult load_table(const std::filesystem::path& path, std::string name = {});
TableLoadResult parse_table(std::string_view content, std::string name = {});

enum class VectorProvenance { minmaxmean, external };

struct SentenceVector {
  Vector values;
  VectorProvenance provenance = VectorProvenance::minmaxmean;
};

/// [elementwise min; elementwise max; elementwise mean] over the in-vocabulary
/// tokens (OOV tokens skipped). Throws DomainError when no token is in the table.
SentenceVector sentence_embed_minmaxmean(const TokenSequence& tokens, const EmbeddingTable& table);

/// Externally computed per-token (and optionally sentence) vectors for one pair.
struct ContextualPairVectors {
  std::string pair_id;
  std::vector<std::string> tokens_a, tokens_b;
  std::vector<Vector> vecs_a, vecs_b;
  std::optional<Vector> sent_a, sent_b;
};

using ContextualVectors = std::map<std::string, ContextualPairVectors>;

/// JSON Lines: {"id","tokens_a","vecs_a","tokens_b","vecs_b","sent_a"?,"sent_b"?}.
/// Throws ParseError on token/vector count mismatch, dimension mismatch or a duplicate id.
ContextualVectors load_contextual(const std::filesystem::path& path);
ContextualVectors parse_contextual(std::string_view content);

double dot(std::span<const double> u, std::span<const double> v);
double norm(std::span<const double> u);

/// u.v / (|u| |v|), clamped to [-1, 1]. Throws Error on a zero vector or dimension mismatch.
double cosine(std::span<const double> u, std::span<const double> v);

/// |u - v|_2. Throws Error on dimension mismatch.
double euclidean(std::span<const double> u, std::span<const double> v);

}  // namespace semsim
