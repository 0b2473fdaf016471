#include "semsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "semsim/error.hpp"
#include "semsim/transport.hpp"

namespace semsim {

namespace {

void require_tokens(const TokenSequence& s, const char* what) {
  if (s.empty()) throw Error(std::string(what) + " has no tokens");
}

std::vector<const Vector*> embed_all(const std::vector<std::string>& words, const EmbeddingTable& table) {
  std::vector<const Vector*> out;
  for (const auto& w : words)
    if (const Vector* v = table.lookup(w)) out.push_back(v);
  return out;
}

double harmonic(double p, double r, double beta) {
  const double b2 = beta * beta;
  const double denom = b2 * p + r;
  return denom > 0.0 ? (1.0 + b2) * p * r / denom : 0.0;
}

}  // namespace

double word_overlap(const TokenSequence& a, const TokenSequence& b) {
  require_tokens(a, "first text");
  require_tokens(b, "second text");
  const std::set<std::string> sa(a.tokens.begin(), a.tokens.end());
  const std::set<std::string> sb(b.tokens.begin(), b.tokens.end());
  std::size_t shared = 0;
  for (const auto& t : sa) shared += sb.count(t);
  const std::size_t all = sa.size() + sb.size() - shared;
  return static_cast<double>(shared) / static_cast<double>(all);
}

std::optional<double> pos_distance(const TokenSequence& a, const TokenSequence& b, const NounLexicon& lexicon,
                                   const EmbeddingTable& table, NounAggregation how) {
  const auto va = embed_all(extract_nouns(a, lexicon), table);
  const auto vb = embed_all(extract_nouns(b, lexicon), table);
  if (va.empty() || vb.empty()) return std::nullopt;

  if (how == NounAggregation::cross_mean) {
    double total = 0.0;
    for (const auto* x : va)
      for (const auto* y : vb) total += euclidean(*x, *y);
    return total / static_cast<double>(va.size() * vb.size());
  }
  auto directed = [](const std::vector<const Vector*>& from, const std::vector<const Vector*>& to) {
    double total = 0.0;
    for (const auto* x : from) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto* y : to) best = std::min(best, euclidean(*x, *y));
      total += best;
    }
    return total / static_cast<double>(from.size());
  };
  return 0.5 * (directed(va, vb) + directed(vb, va));
}

double chrf(std::string_view reference, std::string_view hypothesis, std::size_t max_n, double beta) {
  if (max_n == 0) throw Error("chrF needs max_n >= 1");
  if (beta <= 0.0) throw Error("chrF needs beta > 0");
  auto blank = [](std::string_view s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
  };
  if (blank(reference) || blank(hypothesis)) throw Error("chrF needs non-empty texts");

  double p_sum = 0.0, r_sum = 0.0;
  std::size_t orders = 0;
  for (std::size_t n = 1; n <= max_n; ++n) {
    const auto ref = char_ngrams(reference, n);
    const auto hyp = char_ngrams(hypothesis, n);
    const auto ref_total = total_count(ref);
    const auto hyp_total = total_count(hyp);
    if (ref_total == 0 && hyp_total == 0) continue;
    const auto matched = static_cast<double>(clipped_overlap(ref, hyp));
    if (hyp_total > 0) p_sum += matched / static_cast<double>(hyp_total);
    if (ref_total > 0) r_sum += matched / static_cast<double>(ref_total);
    ++orders;
  }
  if (orders == 0) return 0.0;
  return harmonic(p_sum / static_cast<double>(orders), r_sum / static_cast<double>(orders), beta);
}

std::optional<double> cosine_static(const TokenSequence& a, const TokenSequence& b, const EmbeddingTable& table) {
  SentenceVector ea, eb;
  try {
    ea = sentence_embed_minmaxmean(a, table);
    eb = sentence_embed_minmaxmean(b, table);
  } catch (const DomainError&) {
    return std::nullopt;
  }
  if (dot(ea.values, ea.values) == 0.0 || dot(eb.values, eb.values) == 0.0) return std::nullopt;
  return 1.0 - cosine(ea.values, eb.values);
}

namespace {

struct Bow {
  std::vector<const Vector*> vectors;
  std::vector<double> weights;
};

// Unique in-vocabulary tokens in first-seen order with normalized counts.
Bow nbow(const TokenSequence& s, const EmbeddingTable& table) {
  std::vector<std::string> order;
  std::map<std::string, std::size_t> counts;
  std::size_t total = 0;
  for (const auto& t : s.tokens) {
    if (!table.lookup(t)) continue;
    if (counts[t]++ == 0) order.push_back(t);
    ++total;
  }
  Bow bow;
  for (const auto& t : order) {
    bow.vectors.push_back(table.lookup(t));
    bow.weights.push_back(static_cast<double>(counts[t]) / static_cast<double>(total));
  }
  return bow;
}

}  // namespace

std::optional<double> wmd(const TokenSequence& a, const TokenSequence& b, const EmbeddingTable& table) {
  const Bow ba = nbow(a, table);
  const Bow bb = nbow(b, table);
  if (ba.vectors.empty() || bb.vectors.empty()) return std::nullopt;
  TransportProblem problem{ba.weights, bb.weights, Matrix(ba.vectors.size(), bb.vectors.size())};
  for (std::size_t i = 0; i < ba.vectors.size(); ++i)
    for (std::size_t j = 0; j < bb.vectors.size(); ++j)
      problem.cost(i, j) = euclidean(*ba.vectors[i], *bb.vectors[j]);
  return solve_transport(problem).objective;
}

double elmo_l2(const ContextualPairVectors& vectors) {
  if (!vectors.sent_a || !vectors.sent_b) throw DomainError("pair " + vectors.pair_id + " has no sentence vectors");
  return euclidean(*vectors.sent_a, *vectors.sent_b);
}

double bleu(const TokenSequence& candidate, const TokenSequence& reference, std::size_t max_n) {
  require_tokens(candidate, "candidate");
  require_tokens(reference, "reference");
  if (max_n == 0) throw Error("BLEU needs max_n >= 1");
  const std::size_t c = candidate.size();
  const std::size_t r = reference.size();
  const std::size_t orders = std::min(max_n, c);
  double product = 1.0;
  for (std::size_t n = 1; n <= orders; ++n) {
    const auto matched = clipped_overlap(word_ngrams(candidate, n), word_ngrams(reference, n));
    if (matched == 0) return 0.0;
    product *= static_cast<double>(matched) / static_cast<double>(c - n + 1);
  }
  const double precision = orders == 1 ? product : std::pow(product, 1.0 / static_cast<double>(orders));
  const double bp = c >= r ? 1.0 : std::exp(1.0 - static_cast<double>(r) / static_cast<double>(c));
  return bp * precision;
}

double rouge_n(const TokenSequence& candidate, const TokenSequence& reference, std::size_t n, RougeMode mode) {
  if (n == 0) throw Error("ROUGE-N needs n >= 1");
  if (reference.size() < n)
    throw DomainError("ROUGE-" + std::to_string(n) + ": reference has only " + std::to_string(reference.size()) +
                      " tokens");
  const auto ref = word_ngrams(reference, n);
  const auto cand = word_ngrams(candidate, n);
  const auto matched = static_cast<double>(clipped_overlap(cand, ref));
  const double recall = matched / static_cast<double>(reference.size() - n + 1);
  if (mode == RougeMode::recall) return recall;
  if (candidate.size() < n || matched == 0.0) return 0.0;
  const double precision = matched / static_cast<double>(candidate.size() - n + 1);
  return harmonic(precision, recall, 1.0);
}

double rouge_l(const TokenSequence& candidate, const TokenSequence& reference, double beta) {
  require_tokens(candidate, "candidate");
  require_tokens(reference, "reference");
  const auto& x = reference.tokens;
  const auto& y = candidate.tokens;
  std::vector<std::size_t> prev(y.size() + 1, 0), cur(y.size() + 1, 0);
  for (std::size_t i = 1; i <= x.size(); ++i) {
    for (std::size_t j = 1; j <= y.size(); ++j)
      cur[j] = x[i - 1] == y[j - 1] ? prev[j - 1] + 1 : std::max(prev[j], cur[j - 1]);
    std::swap(prev, cur);
  }
  const auto lcs = static_cast<double>(prev[y.size()]);
  if (lcs == 0.0) return 0.0;
  const double r = lcs / static_cast<double>(x.size());
  const double p = lcs / static_cast<double>(y.size());
  return harmonic(p, r, beta);
}

// ---------------------------------------------------------------------------

void SynonymMap::add(std::string_view word, std::string_view synonym) {
  auto w = to_lower_ascii(word);
  auto s = to_lower_ascii(synonym);
  if (w == s) return;
  links_[w].insert(s);
  links_[s].insert(w);
}

bool SynonymMap::related(std::string_view a, std::string_view b) const {
  auto it = links_.find(std::string(a));
  return it != links_.end() && it->second.count(std::string(b)) > 0;
}

SynonymMap SynonymMap::parse(std::string_view content) {
  SynonymMap map;
  std::istringstream in{std::string(content)};
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto obj = nlohmann::json::parse(line);
      const auto word = obj.at("word").get<std::string>();
      for (const auto& s : obj.at("synonyms")) map.add(word, s.get<std::string>());
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(std::string("malformed synonym record: ") + e.what(), lineno);
    }
  }
  return map;
}

SynonymMap SynonymMap::load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open synonym map " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

MeteorAlignment meteor_align(const TokenSequence& candidate, const TokenSequence& reference,
                             const SynonymMap* synonyms) {
  const auto& cand = candidate.tokens;
  const auto& ref = reference.tokens;
  std::vector<bool> cand_used(cand.size(), false), ref_used(ref.size(), false);
  MeteorAlignment out;

  auto stage = [&](auto&& same) {
    for (std::size_t i = 0; i < cand.size(); ++i) {
      if (cand_used[i]) continue;
      for (std::size_t j = 0; j < ref.size(); ++j) {
        if (ref_used[j] || !same(i, j)) continue;
        cand_used[i] = ref_used[j] = true;
        out.matches.emplace_back(i, j);
        break;
      }
    }
  };
  stage([&](std::size_t i, std::size_t j) { return cand[i] == ref[j]; });
  std::vector<std::string> cand_stem, ref_stem;
  for (const auto& t : cand) cand_stem.push_back(porter_stem(t));
  for (const auto& t : ref) ref_stem.push_back(porter_stem(t));
  stage([&](std::size_t i, std::size_t j) { return cand_stem[i] == ref_stem[j]; });
  if (synonyms) stage([&](std::size_t i, std::size_t j) { return synonyms->related(cand[i], ref[j]); });

  std::sort(out.matches.begin(), out.matches.end());
  for (std::size_t k = 0; k < out.matches.size(); ++k) {
    const bool continues = k > 0 && out.matches[k].first == out.matches[k - 1].first + 1 &&
                           out.matches[k].second == out.matches[k - 1].second + 1;
    if (!continues) ++out.chunks;
  }
  return out;
}

double meteor(const TokenSequence& candidate, const TokenSequence& reference, const SynonymMap* synonyms,
              const MeteorParams& params) {
  require_tokens(candidate, "candidate");
  require_tokens(reference, "reference");
  const auto alignment = meteor_align(candidate, reference, synonyms);
  const auto m = static_cast<double>(alignment.matches.size());
  if (m == 0.0) return 0.0;
  const double p = m / static_cast<double>(candidate.size());
  const double r = m / static_cast<double>(reference.size());
  const double w = params.recall_weight;
  const double f = (1.0 + w) * p * r / (r + w * p);
  const double penalty = params.gamma * std::pow(static_cast<double>(alignment.chunks) / m, params.beta);
  return f * (1.0 - penalty);
}

// ---------------------------------------------------------------------------

double IdfWeights::operator()(std::string_view token) const {
  auto it = weights.find(to_lower_ascii(token));
  return it == weights.end() ? fallback : it->second;
}

IdfWeights compute_idf(const std::vector<TokenSequence>& documents) {
  std::unordered_map<std::string, std::size_t> df;
  for (const auto& doc : documents) {
    std::set<std::string> seen(doc.tokens.begin(), doc.tokens.end());
    for (const auto& t : seen) ++df[t];
  }
  const double m = static_cast<double>(documents.size());
  IdfWeights idf;
  idf.fallback = std::log(m + 1.0);
  for (const auto& [t, count] : df) idf.weights[t] = std::log((m + 1.0) / (static_cast<double>(count) + 1.0));
  return idf;
}

BertScore bert_score(const ContextualPairVectors& vectors, const IdfWeights* idf) {
  if (vectors.vecs_a.empty() || vectors.vecs_b.empty())
    throw DomainError("pair " + vectors.pair_id + " has no token vectors");

  auto similarity = [](const Vector& u, const Vector& v) {
    const double uu = dot(u, u), vv = dot(v, v);
    if (uu == 0.0 || vv == 0.0) return 0.0;
    return cosine(u, v);
  };
  // Weighted mean over `from` tokens of their best cosine against `to`.
  auto greedy = [&](const std::vector<Vector>& from, const std::vector<std::string>& from_tokens,
                    const std::vector<Vector>& to) {
    double total = 0.0, weight_sum = 0.0;
    for (std::size_t i = 0; i < from.size(); ++i) {
      double best = -1.0;
      for (const auto& v : to) best = std::max(best, similarity(from[i], v));
      const double w = idf ? (*idf)(from_tokens[i]) : 1.0;
      total += w * best;
      weight_sum += w;
    }
    if (weight_sum <= 0.0) throw DomainError("pair " + vectors.pair_id + ": token weights sum to zero");
    return total / weight_sum;
  };

  BertScore s;
  s.recall = greedy(vectors.vecs_a, vectors.tokens_a, vectors.vecs_b);
  s.precision = greedy(vectors.vecs_b, vectors.tokens_b, vectors.vecs_a);
  s.f1 = s.precision * s.recall > 0.0 ? 2.0 * s.precision * s.recall / (s.precision + s.recall) : 0.0;
  return s;
}

}  // namespace semsim
