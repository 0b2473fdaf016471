#include <algorithm>
#include <random>

#include <gtest/gtest.h>

#include "semsim/embeddings.hpp"
#include "semsim/error.hpp"

using namespace semsim;

TEST(ParseTable, TwoRows) {
  const auto r = parse_table("a 1 0\nb 0 1\n", "toy");
  EXPECT_EQ(r.table.dim(), 2u);
  EXPECT_EQ(r.table.size(), 2u);
  EXPECT_EQ(r.table.name(), "toy");
  EXPECT_TRUE(r.warnings.empty());
}

TEST(ParseTable, WidthMismatchNamesLine) {
  try {
    parse_table("a 1 0\nb 0 1\nc 1\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
}

TEST(ParseTable, EmptyInput) {
  try {
    parse_table("");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("no vectors"), std::string::npos);
  }
}

TEST(ParseTable, DuplicateTokenLastWins) {
  const auto r = parse_table("a 1 0\na 0 1\n");
  EXPECT_EQ(r.table.size(), 1u);
  EXPECT_EQ(*r.table.lookup("a"), (Vector{0, 1}));
  EXPECT_EQ(r.warnings.size(), 1u);
}

TEST(ParseTable, SkipsWord2vecHeader) {
  const auto r = parse_table("2 3\na 1 2 3\nb 4 5 6\n");
  EXPECT_EQ(r.table.dim(), 3u);
  EXPECT_EQ(r.table.size(), 2u);
}

TEST(Lookup, PresentAbsentAndCaseFolded) {
  const auto t = parse_table("cat 1 2\n").table;
  ASSERT_NE(t.lookup("cat"), nullptr);
  EXPECT_EQ(*t.lookup("cat"), (Vector{1, 2}));
  EXPECT_EQ(t.lookup("dog"), nullptr);
  ASSERT_NE(t.lookup("CaT"), nullptr);
}

TEST(MinMaxMean, HandComputed) {
  const auto t = parse_table("x 1 2\ny 3 0\n").table;
  const auto s = sentence_embed_minmaxmean(tokenize("x y"), t);
  EXPECT_EQ(s.values, (Vector{1, 0, 3, 2, 2, 1}));
  EXPECT_EQ(s.provenance, VectorProvenance::minmaxmean);
}

TEST(MinMaxMean, SingleWordRepeatsVector) {
  const auto t = parse_table("x 1.5 -2\n").table;
  EXPECT_EQ(sentence_embed_minmaxmean(tokenize("x oov"), t).values, (Vector{1.5, -2, 1.5, -2, 1.5, -2}));
}

TEST(MinMaxMean, AllOovIsDomainError) {
  const auto t = parse_table("x 1 2\n").table;
  EXPECT_THROW(sentence_embed_minmaxmean(tokenize("nothing known"), t), DomainError);
}

TEST(MinMaxMean, PermutationInvariant) {
  const auto t = parse_table("a 1 5\nb -2 0.5\nc 3 3\nd 0.25 -1\n").table;
  std::vector<std::string> words{"a", "b", "c", "d", "b"};
  std::sort(words.begin(), words.end());
  const auto join = [](const std::vector<std::string>& w) {
    std::string s;
    for (const auto& x : w) s += x + " ";
    return s;
  };
  const auto ref = sentence_embed_minmaxmean(tokenize(join(words)), t).values;
  while (std::next_permutation(words.begin(), words.end())) {
    const auto v = sentence_embed_minmaxmean(tokenize(join(words)), t).values;
    for (std::size_t k = 0; k < v.size(); ++k) EXPECT_NEAR(v[k], ref[k], 1e-12);
  }
}

TEST(ParseContextual, WellFormed) {
  const auto m = parse_contextual(
      R"({"id":"p1","tokens_a":["a","b"],"vecs_a":[[1,0],[0,1]],"tokens_b":["c"],"vecs_b":[[1,1]],"sent_a":[0,0],"sent_b":[3,4]})");
  ASSERT_EQ(m.size(), 1u);
  const auto& p = m.at("p1");
  EXPECT_EQ(p.tokens_a.size(), 2u);
  EXPECT_EQ(*p.sent_b, (Vector{3, 4}));
}

TEST(ParseContextual, CountMismatchNamesPair) {
  try {
    parse_contextual(R"({"id":"bad","tokens_a":["a","b"],"vecs_a":[[1,0]],"tokens_b":["c"],"vecs_b":[[1,1]]})");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("bad"), std::string::npos);
  }
}

TEST(ParseContextual, DuplicateId) {
  const std::string line = R"({"id":"p","tokens_a":["a"],"vecs_a":[[1]],"tokens_b":["b"],"vecs_b":[[2]]})";
  EXPECT_THROW(parse_contextual(line + "\n" + line + "\n"), ParseError);
}

TEST(Cosine, Examples) {
  const Vector u{1, 2, 3};
  EXPECT_EQ(cosine(u, u), 1.0);
  EXPECT_EQ(cosine(Vector{1, 0}, Vector{0, 5}), 0.0);
  EXPECT_EQ(cosine(u, Vector{-1, -2, -3}), -1.0);
  EXPECT_THROW(cosine(Vector{0, 0}, Vector{1, 0}), Error);
  EXPECT_THROW(cosine(Vector{1, 0}, Vector{1, 0, 0}), Error);
}

TEST(Cosine, SelfIsExactlyOneAndScaleInvariant) {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> dist(-10, 10);
  for (int trial = 0; trial < 1000; ++trial) {
    Vector u(1 + trial % 9), v(u.size());
    for (auto& x : u) x = dist(gen);
    for (auto& x : v) x = dist(gen);
    if (norm(u) == 0.0 || norm(v) == 0.0) continue;
    EXPECT_EQ(cosine(u, u), 1.0);
    const double scale = 0.1 + std::abs(dist(gen));
    Vector w = v;
    for (auto& x : w) x *= scale;
    EXPECT_NEAR(cosine(u, w), cosine(u, v), 1e-12);
  }
}

TEST(Euclidean, Examples) {
  EXPECT_EQ(euclidean(Vector{0, 0}, Vector{3, 4}), 5.0);
  const Vector u{1.5, -2, 7};
  EXPECT_EQ(euclidean(u, u), 0.0);
  const Vector v{0.5, 3, -1};
  EXPECT_EQ(euclidean(u, v), euclidean(v, u));
  EXPECT_THROW(euclidean(Vector{1}, Vector{1, 2}), Error);
}

TEST(Euclidean, TriangleInequality) {
  std::mt19937_64 gen(11);
  std::normal_distribution<double> dist;
  for (int trial = 0; trial < 2000; ++trial) {
    Vector a(4), b(4), c(4);
    for (auto* v : {&a, &b, &c})
      for (auto& x : *v) x = dist(gen);
    EXPECT_LE(euclidean(a, c), euclidean(a, b) + euclidean(b, c) + 1e-12);
  }
}
