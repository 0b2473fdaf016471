#include "semsim/textproc.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "semsim/error.hpp"

namespace semsim {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }
bool is_punct(char c) { return std::ispunct(static_cast<unsigned char>(c)) != 0; }

// Length in bytes of the UTF-8 sequence starting with `lead`; stray
// continuation bytes are treated as single-byte characters.
std::size_t utf8_length(unsigned char lead) {
  if (lead < 0x80) return 1;
  if ((lead >> 5) == 0x6) return 2;
  if ((lead >> 4) == 0xE) return 3;
  if ((lead >> 3) == 0x1E) return 4;
  return 1;
}

}  // namespace

std::string to_lower_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

TokenSequence tokenize(std::string_view text) {
  TokenSequence seq;
  seq.source_text = std::string(text);
  const std::string lower = to_lower_ascii(text);
  const std::size_t n = lower.size();

  std::string current;
  auto flush = [&] {
    if (!current.empty()) seq.tokens.push_back(std::move(current));
    current.clear();
  };
  for (std::size_t i = 0; i < n; ++i) {
    const char c = lower[i];
    if (is_space(c)) {
      flush();
    } else if (c == '\'' && i > 0 && i + 1 < n && !is_space(lower[i - 1]) && !is_punct(lower[i - 1]) &&
               !is_space(lower[i + 1]) && !is_punct(lower[i + 1])) {
      current += c;
    } else if (is_punct(c)) {
      flush();
      seq.tokens.emplace_back(1, c);
    } else {
      current += c;
    }
  }
  flush();
  if (seq.tokens.empty()) throw Error("cannot tokenize empty text");
  return seq;
}

WordNgramCounts word_ngrams(const std::vector<std::string>& tokens, std::size_t n) {
  if (n == 0) throw Error("n-gram order must be at least 1");
  WordNgramCounts counts;
  if (n > tokens.size()) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i)
    ++counts[WordNgram(tokens.begin() + static_cast<std::ptrdiff_t>(i),
                       tokens.begin() + static_cast<std::ptrdiff_t>(i + n))];
  return counts;
}

CharNgramCounts char_ngrams(std::string_view text, std::size_t n) {
  if (n == 0) throw Error("n-gram order must be at least 1");
  std::vector<std::string_view> chars;
  for (std::size_t i = 0; i < text.size();) {
    const auto len = std::min(utf8_length(static_cast<unsigned char>(text[i])), text.size() - i);
    if (!(len == 1 && is_space(text[i]))) chars.push_back(text.substr(i, len));
    i += len;
  }
  CharNgramCounts counts;
  if (n > chars.size()) return counts;
  for (std::size_t i = 0; i + n <= chars.size(); ++i) {
    std::string gram;
    for (std::size_t k = i; k < i + n; ++k) gram += chars[k];
    ++counts[gram];
  }
  return counts;
}

NounLexicon::NounLexicon(const std::vector<std::string>& words) {
  for (const auto& w : words)
    if (!w.empty()) entries_.insert(to_lower_ascii(w));
}

NounLexicon NounLexicon::parse(std::string_view content) {
  std::vector<std::string> words;
  std::istringstream in{std::string(content)};
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto first = std::find_if_not(line.begin(), line.end(), is_space);
    auto last = std::find_if_not(line.rbegin(), line.rend(), is_space).base();
    if (first < last) words.emplace_back(first, last);
  }
  return NounLexicon(words);
}

NounLexicon NounLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open noun lexicon " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

bool NounLexicon::contains(std::string_view word) const { return entries_.find(word) != entries_.end(); }

std::vector<std::string> extract_nouns(const TokenSequence& tokens, const NounLexicon& lexicon) {
  std::vector<std::string> nouns;
  for (const auto& t : tokens.tokens)
    if (lexicon.contains(t)) nouns.push_back(t);
  return nouns;
}

}  // namespace semsim
