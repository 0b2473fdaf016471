#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace semsim {

/// Tokens of a text, in source order.
struct TokenSequence {
  std::vector<std::string> tokens;
  std::string source_text;

  std::size_t size() const noexcept { return tokens.size(); }
  bool empty() const noexcept { return tokens.empty(); }
  const std::string& operator[](std::size_t i) const { return tokens[i]; }
};

/// Tokenization rule shared by every metric:
///  - ASCII letters are lowercased; other bytes (UTF-8 continuation etc.) pass through;
///  - whitespace separates tokens;
///  - each ASCII punctuation character is a token of its own, except an
///    apostrophe with a non-space, non-punctuation character on both sides,
///    which stays inside the word ("don't").
/// Throws Error for empty or whitespace-only text.
TokenSequence tokenize(std::string_view text);

/// Original Porter (1980) stemmer. Expects lowercase input; tokens containing
/// anything other than a-z are returned unchanged, as are words of length <= 2.
std::string porter_stem(std::string_view token);

using WordNgram = std::vector<std::string>;
using WordNgramCounts = std::map<WordNgram, std::size_t>;
using CharNgramCounts = std::map<std::string, std::size_t>;

/// All contiguous n-grams with multiplicity. Throws Error for n == 0.
WordNgramCounts word_ngrams(const std::vector<std::string>& tokens, std::size_t n);
inline WordNgramCounts word_ngrams(const TokenSequence& seq, std::size_t n) { return word_ngrams(seq.tokens, n); }

/// Character n-grams (UTF-8 code points) of the text with all whitespace removed.
/// Throws Error for n == 0.
CharNgramCounts char_ngrams(std::string_view text, std::size_t n);

/// Total multiplicity of a counts map.
template <class Counts>
std::size_t total_count(const Counts& counts) {
  std::size_t total = 0;
  for (const auto& [_, c] : counts) total += c;
  return total;
}

/// Sum over shared keys of min(count_a, count_b).
template <class Counts>
std::size_t clipped_overlap(const Counts& a, const Counts& b) {
  std::size_t total = 0;
  auto ia = a.begin();
  auto ib = b.begin();
  while (ia != a.end() && ib != b.end()) {
    if (ia->first < ib->first) {
      ++ia;
    } else if (ib->first < ia->first) {
      ++ib;
    } else {
      total += ia->second < ib->second ? ia->second : ib->second;
      ++ia;
      ++ib;
    }
  }
  return total;
}

/// Lowercase word forms treated as nouns.
class NounLexicon {
 public:
  NounLexicon() = default;
  explicit NounLexicon(const std::vector<std::string>& words);

  /// One word per line, '#' starts a comment, blank lines ignored.
  static NounLexicon load(const std::filesystem::path& path);
  static NounLexicon parse(std::string_view content);

  bool contains(std::string_view word) const;
  std::size_t size() const noexcept { return entries_.size(); }
  const std::set<std::string, std::less<>>& entries() const noexcept { return entries_; }

 private:
  std::set<std::string, std::less<>> entries_;
};

/// Tokens found in the lexicon, in order, duplicates kept.
std::vector<std::string> extract_nouns(const TokenSequence& tokens, const NounLexicon& lexicon);

std::string to_lower_ascii(std::string_view s);

}  // namespace semsim
