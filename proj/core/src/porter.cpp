// Porter, M.F. "An algorithm for suffix stripping", Program 14(3), 1980.
// Straight transcription of the published rule tables; no later departures.

#include <algorithm>
#include <string>
#include <string_view>

#include "semsim/textproc.hpp"

namespace semsim {

namespace {

struct Rule {
  std::string_view suffix;
  std::string_view replacement;
};

class Stemmer {
 public:
  explicit Stemmer(std::string_view word) : w_(word) {}

  std::string run() {
    step1a();
    step1b();
    step1c();
    step2();
    step3();
    step4();
    step5a();
    step5b();
    return w_;
  }

 private:
  std::string w_;

  bool consonant(std::size_t i, const std::string& s) const {
    switch (s[i]) {
      case 'a': case 'e': case 'i': case 'o': case 'u': return false;
      case 'y': return i == 0 || !consonant(i - 1, s);
      default: return true;
    }
  }

  // m in [C](VC)^m[V], measured on s.
  int measure(const std::string& s) const {
    int m = 0;
    std::size_t i = 0;
    const std::size_t n = s.size();
    while (i < n && consonant(i, s)) ++i;
    while (i < n) {
      while (i < n && !consonant(i, s)) ++i;
      if (i >= n) break;
      while (i < n && consonant(i, s)) ++i;
      ++m;
    }
    return m;
  }

  bool has_vowel(const std::string& s) const {
    for (std::size_t i = 0; i < s.size(); ++i)
      if (!consonant(i, s)) return true;
    return false;
  }

  bool ends_double_consonant(const std::string& s) const {
    const auto n = s.size();
    return n >= 2 && s[n - 1] == s[n - 2] && consonant(n - 1, s);
  }

  // *o: stem ends consonant-vowel-consonant, the last not w, x or y.
  bool ends_cvc(const std::string& s) const {
    const auto n = s.size();
    if (n < 3) return false;
    if (!consonant(n - 3, s) || consonant(n - 2, s) || !consonant(n - 1, s)) return false;
    const char c = s[n - 1];
    return c != 'w' && c != 'x' && c != 'y';
  }

  bool ends_with(std::string_view suffix) const {
    return w_.size() >= suffix.size() && std::string_view(w_).substr(w_.size() - suffix.size()) == suffix;
  }

  std::string stem_without(std::string_view suffix) const { return w_.substr(0, w_.size() - suffix.size()); }

  // The first rule whose suffix matches decides the step; it fires only when cond holds.
  template <class Cond>
  void apply_first(std::initializer_list<Rule> rules, Cond cond) {
    for (const auto& r : rules) {
      if (!ends_with(r.suffix)) continue;
      auto stem = stem_without(r.suffix);
      if (cond(stem, r)) w_ = stem + std::string(r.replacement);
      return;
    }
  }

  void step1a() {
    if (ends_with("sses")) w_.resize(w_.size() - 2);
    else if (ends_with("ies")) w_.resize(w_.size() - 2);
    else if (ends_with("ss")) return;
    else if (ends_with("s")) w_.pop_back();
  }

  void step1b() {
    if (ends_with("eed")) {
      if (measure(stem_without("eed")) > 0) w_.pop_back();
      return;
    }
    std::string_view removed;
    if (ends_with("ed") && has_vowel(stem_without("ed"))) removed = "ed";
    else if (ends_with("ing") && has_vowel(stem_without("ing"))) removed = "ing";
    else return;
    w_ = stem_without(removed);

    if (ends_with("at") || ends_with("bl") || ends_with("iz")) {
      w_ += 'e';
    } else if (ends_double_consonant(w_)) {
      const char c = w_.back();
      if (c != 'l' && c != 's' && c != 'z') w_.pop_back();
    } else if (measure(w_) == 1 && ends_cvc(w_)) {
      w_ += 'e';
    }
  }

  void step1c() {
    if (ends_with("y") && has_vowel(stem_without("y"))) w_.back() = 'i';
  }

  void step2() {
    apply_first(
        {
            {"ational", "ate"}, {"tional", "tion"}, {"enci", "ence"},   {"anci", "ance"},  {"izer", "ize"},
            {"abli", "able"},   {"alli", "al"},     {"entli", "ent"},   {"eli", "e"},      {"ousli", "ous"},
            {"ization", "ize"}, {"ation", "ate"},   {"ator", "ate"},    {"alism", "al"},   {"iveness", "ive"},
            {"fulness", "ful"}, {"ousness", "ous"}, {"aliti", "al"},    {"iviti", "ive"},  {"biliti", "ble"},
        },
        [this](const std::string& stem, const Rule&) { return measure(stem) > 0; });
  }

  void step3() {
    apply_first(
        {
            {"icate", "ic"}, {"ative", ""}, {"alize", "al"}, {"iciti", "ic"},
            {"ical", "ic"},  {"ful", ""},   {"ness", ""},
        },
        [this](const std::string& stem, const Rule&) { return measure(stem) > 0; });
  }

  void step4() {
    apply_first(
        {
            {"al", ""},  {"ance", ""}, {"ence", ""}, {"er", ""},  {"ic", ""},  {"able", ""}, {"ible", ""},
            {"ant", ""}, {"ement", ""}, {"ment", ""}, {"ent", ""}, {"ion", ""}, {"ou", ""},   {"ism", ""},
            {"ate", ""}, {"iti", ""},  {"ous", ""},  {"ive", ""}, {"ize", ""},
        },
        [this](const std::string& stem, const Rule& r) {
          if (measure(stem) <= 1) return false;
          if (r.suffix == "ion") return !stem.empty() && (stem.back() == 's' || stem.back() == 't');
          return true;
        });
  }

  void step5a() {
    if (!ends_with("e")) return;
    const auto stem = stem_without("e");
    const int m = measure(stem);
    if (m > 1 || (m == 1 && !ends_cvc(stem))) w_ = stem;
  }

  void step5b() {
    if (measure(w_) > 1 && ends_double_consonant(w_) && w_.back() == 'l') w_.pop_back();
  }
};

}  // namespace

std::string porter_stem(std::string_view token) {
  if (token.size() <= 2) return std::string(token);
  if (!std::all_of(token.begin(), token.end(), [](char c) { return c >= 'a' && c <= 'z'; }))
    return std::string(token);
  return Stemmer(token).run();
}

}  // namespace semsim
