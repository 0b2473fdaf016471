#include "semsim/embeddings.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "semsim/error.hpp"

namespace semsim {

using nlohmann::json;

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const auto start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

bool parse_double(std::string_view s, double& out) {
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size() && std::isfinite(out);
}

Vector parse_vector(const json& arr, const std::string& what, const std::string& id) {
  if (!arr.is_array()) throw ParseError("pair " + id + ": " + what + " must be an array of numbers", 0);
  Vector v;
  v.reserve(arr.size());
  for (const auto& x : arr) {
    if (!x.is_number()) throw ParseError("pair " + id + ": " + what + " must be an array of numbers", 0);
    v.push_back(x.get<double>());
  }
  return v;
}

}  // namespace

EmbeddingTable::EmbeddingTable(std::string name, std::size_t dim) : name_(std::move(name)), dim_(dim) {
  if (dim == 0) throw Error("embedding dimension must be positive");
}

bool EmbeddingTable::insert(std::string token, Vector values) {
  if (values.size() != dim_)
    throw Error("vector for \"" + token + "\" has " + std::to_string(values.size()) + " entries, expected " +
                std::to_string(dim_));
  auto [it, inserted] = vectors_.insert_or_assign(std::move(token), std::move(values));
  return inserted;
}

const Vector* EmbeddingTable::lookup(std::string_view token) const {
  auto it = vectors_.find(to_lower_ascii(token));
  return it == vectors_.end() ? nullptr : &it->second;
}

TableLoadResult parse_table(std::string_view content, std::string name) {
  std::optional<EmbeddingTable> table;
  std::vector<std::string> warnings;
  std::size_t lineno = 0;
  std::size_t start = 0;
  bool first_row = true;
  while (start < content.size()) {
    auto end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    const auto line = content.substr(start, end - start);
    start = end + 1;
    ++lineno;
    auto fields = split_ws(line);
    if (fields.empty()) continue;

    if (first_row && fields.size() == 2) {
      // word2vec text header "<count> <dim>"
      std::size_t a = 0, b = 0;
      auto r1 = std::from_chars(fields[0].data(), fields[0].data() + fields[0].size(), a);
      auto r2 = std::from_chars(fields[1].data(), fields[1].data() + fields[1].size(), b);
      if (r1.ec == std::errc() && r2.ec == std::errc() && r1.ptr == fields[0].data() + fields[0].size() &&
          r2.ptr == fields[1].data() + fields[1].size()) {
        first_row = false;
        continue;
      }
    }
    first_row = false;

    if (fields.size() < 2) throw ParseError("row has no vector values", lineno);
    const std::size_t width = fields.size() - 1;
    if (!table) table.emplace(name, width);
    if (width != table->dim())
      throw ParseError("row has " + std::to_string(width) + " values, expected " + std::to_string(table->dim()),
                       lineno);
    Vector v(width);
    for (std::size_t k = 0; k < width; ++k)
      if (!parse_double(fields[k + 1], v[k]))
        throw ParseError("bad number \"" + std::string(fields[k + 1]) + "\"", lineno);
    std::string token(fields[0]);
    if (!table->insert(token, std::move(v)))
      warnings.push_back("line " + std::to_string(lineno) + ": duplicate token \"" + token + "\", keeping the last");
  }
  if (!table) throw ParseError("no vectors", 0);
  return {std::move(*table), std::move(warnings)};
}

TableLoadResult load_table(const std::filesystem::path& path, std::string name) {
  if (name.empty()) name = path.stem().string();
  try {
    return parse_table(read_file(path), std::move(name));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

SentenceVector sentence_embed_minmaxmean(const TokenSequence& tokens, const EmbeddingTable& table) {
  const std::size_t d = table.dim();
  Vector lo(d, 0.0), hi(d, 0.0), sum(d, 0.0);
  std::size_t found = 0;
  for (const auto& t : tokens.tokens) {
    const Vector* v = table.lookup(t);
    if (!v) continue;
    for (std::size_t k = 0; k < d; ++k) {
      const double x = (*v)[k];
      lo[k] = found == 0 ? x : std::min(lo[k], x);
      hi[k] = found == 0 ? x : std::max(hi[k], x);
      sum[k] += x;
    }
    ++found;
  }
  if (found == 0) throw DomainError("no in-vocabulary tokens in \"" + tokens.source_text + "\"");
  SentenceVector out;
  out.values.reserve(3 * d);
  out.values.insert(out.values.end(), lo.begin(), lo.end());
  out.values.insert(out.values.end(), hi.begin(), hi.end());
  for (double s : sum) out.values.push_back(s / static_cast<double>(found));
  return out;
}

ContextualVectors parse_contextual(std::string_view content) {
  ContextualVectors out;
  std::size_t lineno = 0;
  std::size_t start = 0;
  std::optional<std::size_t> dim;
  while (start < content.size()) {
    auto end = content.find('\n', start);
    if (end == std::string_view::npos) end = content.size();
    const auto line = content.substr(start, end - start);
    start = end + 1;
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    try {
      const json obj = json::parse(line);
      ContextualPairVectors p;
      p.pair_id = obj.at("id").get<std::string>();
      p.tokens_a = obj.at("tokens_a").get<std::vector<std::string>>();
      p.tokens_b = obj.at("tokens_b").get<std::vector<std::string>>();
      for (const auto& v : obj.at("vecs_a")) p.vecs_a.push_back(parse_vector(v, "vecs_a", p.pair_id));
      for (const auto& v : obj.at("vecs_b")) p.vecs_b.push_back(parse_vector(v, "vecs_b", p.pair_id));
      if (obj.contains("sent_a") && !obj["sent_a"].is_null()) p.sent_a = parse_vector(obj["sent_a"], "sent_a", p.pair_id);
      if (obj.contains("sent_b") && !obj["sent_b"].is_null()) p.sent_b = parse_vector(obj["sent_b"], "sent_b", p.pair_id);

      if (p.tokens_a.size() != p.vecs_a.size() || p.tokens_b.size() != p.vecs_b.size())
        throw ParseError("pair " + p.pair_id + ": token and vector counts differ", lineno);
      for (const auto* vecs : {&p.vecs_a, &p.vecs_b})
        for (const auto& v : *vecs) {
          if (!dim) dim = v.size();
          if (v.size() != *dim || v.empty())
            throw ParseError("pair " + p.pair_id + ": token vectors of unequal dimension", lineno);
        }
      if (p.sent_a && p.sent_b && p.sent_a->size() != p.sent_b->size())
        throw ParseError("pair " + p.pair_id + ": sentence vectors of unequal dimension", lineno);
      if (out.count(p.pair_id)) throw ParseError("duplicate pair id " + p.pair_id, lineno);
      auto id = p.pair_id;
      out.emplace(std::move(id), std::move(p));
    } catch (const json::exception& e) {
      throw ParseError(std::string("malformed contextual record: ") + e.what(), lineno);
    } catch (const ParseError& e) {
      if (e.line() != 0) throw;
      throw ParseError(e.what(), lineno);
    }
  }
  return out;
}

ContextualVectors load_contextual(const std::filesystem::path& path) {
  try {
    return parse_contextual(read_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  }
}

double dot(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw Error("dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s;
}

double norm(std::span<const double> u) { return std::sqrt(dot(u, u)); }

double cosine(std::span<const double> u, std::span<const double> v) {
  const double uu = dot(u, u);
  const double vv = dot(v, v);
  if (u.size() != v.size()) throw Error("dimension mismatch");
  if (uu == 0.0 || vv == 0.0) throw Error("cosine of a zero vector");
  // sqrt(uu * vv) keeps cosine(u, u) == 1 exactly.
  const double c = dot(u, v) / std::sqrt(uu * vv);
  return std::clamp(c, -1.0, 1.0);
}

double euclidean(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw Error("dimension mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += (u[i] - v[i]) * (u[i] - v[i]);
  return std::sqrt(s);
}

}  // namespace semsim
