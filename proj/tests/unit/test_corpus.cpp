#include <algorithm>
#include <filesystem>
#include <set>

#include <gtest/gtest.h>

#include "semsim/corpus.hpp"
#include "semsim/error.hpp"
#include "semsim/rng.hpp"

using namespace semsim;
namespace fs = std::filesystem;

namespace {

PairDataset make_dataset(std::string id, std::size_t n) {
  PairDataset d;
  d.dataset_id = std::move(id);
  for (std::size_t k = 1; k <= n; ++k)
    d.pairs.push_back(SentencePair::make("p" + std::to_string(k), "sentence a" + std::to_string(k),
                                         "sentence b" + std::to_string(k), {3}));
  return d;
}

std::vector<std::string> ids(const PairDataset& d) {
  std::vector<std::string> out;
  for (const auto& p : d.pairs) out.push_back(p.pair_id);
  return out;
}

fs::path temp_dir(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("semsim_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST(SplitMix64, ReferenceSequenceForSeedZero) {
  SplitMix64 rng(0);
  EXPECT_EQ(rng.next(), 0xe220a8397b1dcdafULL);
  EXPECT_EQ(rng.next(), 0x6e789e6aa1b965f4ULL);
  EXPECT_EQ(rng.next(), 0x06c45d188009454fULL);
}

TEST(SplitMix64, UniformReplaysReferenceTrace) {
  SplitMix64 rng(17);
  const std::vector<std::uint64_t> expected{9, 3, 6, 1, 6, 8, 4, 7};
  for (auto e : expected) EXPECT_EQ(rng.uniform(10), e);
  EXPECT_THROW(rng.uniform(0), Error);
}

TEST(SentencePair, MeanOfScores) {
  const auto p = SentencePair::make("p1", "the cat sat", "a cat was sitting", {4, 5, 4});
  ASSERT_TRUE(p.mean_human);
  EXPECT_NEAR(*p.mean_human, 13.0 / 3.0, 1e-12);
}

TEST(SentencePair, RejectsInvariantViolations) {
  EXPECT_THROW(SentencePair::make("p", "a", "b", {7}), Error);
  EXPECT_THROW(SentencePair::make("p", "a", "b", {0}), Error);
  EXPECT_THROW(SentencePair::make("p", "  ", "b", {3}), Error);
  EXPECT_FALSE(SentencePair::make("p", "a", "b").mean_human.has_value());
}

TEST(ParsePairs, JsonlLine) {
  const auto r = parse_pairs(R"({"id":"p1","a":"the cat sat","b":"a cat was sitting","scores":[4,5,4]})");
  ASSERT_EQ(r.dataset.size(), 1u);
  EXPECT_NEAR(*r.dataset.pairs[0].mean_human, 4.333333333333, 1e-9);
  EXPECT_TRUE(r.diagnostics.empty());
}

TEST(ParsePairs, EmptyInputWarns) {
  const auto r = parse_pairs("");
  EXPECT_EQ(r.dataset.size(), 0u);
  ASSERT_EQ(r.diagnostics.size(), 1u);
}

TEST(ParsePairs, OutOfRangeScoreRejectsRow) {
  const auto r = parse_pairs(
      "{\"id\":\"p1\",\"a\":\"x\",\"b\":\"y\",\"scores\":[7]}\n"
      "{\"id\":\"p2\",\"a\":\"x\",\"b\":\"y\",\"scores\":[3]}\n");
  ASSERT_EQ(r.dataset.size(), 1u);
  EXPECT_EQ(r.dataset.pairs[0].pair_id, "p2");
  ASSERT_EQ(r.diagnostics.size(), 1u);
  EXPECT_NE(r.diagnostics[0].find("line 1"), std::string::npos);
  EXPECT_NE(r.diagnostics[0].find("[1,5]"), std::string::npos) << r.diagnostics[0];
}

TEST(ParsePairs, MalformedRowNamesLine) {
  try {
    parse_pairs("{\"id\":\"p1\",\"a\":\"x\",\"b\":\"y\"}\n{\"id\":\"p2\",\"a\":\"x\"}\n");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse_pairs("not json\n"), ParseError);
}

TEST(ParsePairs, DuplicateIdIsAnError) {
  EXPECT_THROW(parse_pairs("{\"id\":\"p\",\"a\":\"x\",\"b\":\"y\"}\n{\"id\":\"p\",\"a\":\"x\",\"b\":\"z\"}\n"),
               ParseError);
}

TEST(ParsePairs, TsvWithColumnMapping) {
  FormatSpec spec;
  spec.format = PairFormat::tsv;
  spec.has_header = true;
  spec.id_column = 3;
  spec.a_column = 0;
  spec.b_column = 1;
  spec.scores_column = 2;
  const auto r = parse_pairs("a\tb\tscores\tid\nthe cat\ta cat\t4;5\tq1\nx\ty\t\tq2\n", spec);
  ASSERT_EQ(r.dataset.size(), 2u);
  EXPECT_EQ(r.dataset.pairs[0].pair_id, "q1");
  EXPECT_EQ(r.dataset.pairs[0].text_a, "the cat");
  EXPECT_EQ(r.dataset.pairs[0].human_scores, (std::vector<int>{4, 5}));
  EXPECT_TRUE(r.dataset.pairs[1].human_scores.empty());
}

TEST(SavePairs, RoundTrip) {
  PairDataset d;
  d.dataset_id = "rt";
  d.pairs.push_back(SentencePair::make("p1", "with \"quotes\", commas", "ünïcode ✓", {1, 5}));
  d.pairs.push_back(SentencePair::make("p2", "no scores", "here"));
  const auto dir = temp_dir("roundtrip");
  save_pairs(d, dir / "rt.jsonl");
  const auto back = load_pairs(dir / "rt.jsonl").dataset;
  EXPECT_EQ(back.dataset_id, "rt");
  ASSERT_EQ(back.size(), d.size());
  for (std::size_t k = 0; k < d.size(); ++k) {
    EXPECT_EQ(back.pairs[k].pair_id, d.pairs[k].pair_id);
    EXPECT_EQ(back.pairs[k].text_a, d.pairs[k].text_a);
    EXPECT_EQ(back.pairs[k].text_b, d.pairs[k].text_b);
    EXPECT_EQ(back.pairs[k].human_scores, d.pairs[k].human_scores);
    EXPECT_EQ(back.pairs[k].mean_human, d.pairs[k].mean_human);
  }
}

TEST(LoadStudy, ReadsManifestRelativeToItsDirectory) {
  std::vector<std::string> diag;
  const auto study = load_study(SEMSIM_FIXTURE_DIR "/synthetic/manifest.json", &diag);
  ASSERT_EQ(study.datasets.size(), 4u);
  EXPECT_EQ(study.datasets[2].dataset_id, "para_rand");
  EXPECT_EQ(study.datasets[2].kind, DatasetKind::random);
  EXPECT_EQ(study.datasets[2].source_dataset_id, "para");
  EXPECT_TRUE(study.has_random());
  EXPECT_EQ(study.metadata.at("name"), "synthetic four-dataset study");
}

TEST(Study, ValidateRules) {
  Study s;
  auto r = make_dataset("r", 2);
  r.kind = DatasetKind::random;
  s.datasets.push_back(r);
  EXPECT_THROW(s.validate(), Error);  // random without source, no non-random dataset
  s.datasets[0].source_dataset_id = "d";
  EXPECT_THROW(s.validate(), Error);
  s.datasets.push_back(make_dataset("d", 2));
  EXPECT_NO_THROW(s.validate());
  s.datasets.push_back(make_dataset("d", 1));
  EXPECT_THROW(s.validate(), Error);
}

TEST(AggregateHuman, MeanAndSampleStd) {
  PairDataset d;
  d.pairs = {SentencePair::make("a", "x", "y", {3}), SentencePair::make("b", "x", "y", {4}),
             SentencePair::make("c", "x", "y", {5})};
  const auto h = aggregate_human(d);
  EXPECT_DOUBLE_EQ(h.mean, 4.0);
  EXPECT_DOUBLE_EQ(h.std, 1.0);
  EXPECT_EQ(h.n, 3u);
  EXPECT_FALSE(h.degenerate);
}

TEST(AggregateHuman, SinglePairIsDegenerate) {
  PairDataset d;
  d.pairs = {SentencePair::make("a", "x", "y", {4})};
  const auto h = aggregate_human(d);
  EXPECT_DOUBLE_EQ(h.mean, 4.0);
  EXPECT_EQ(h.std, 0.0);
  EXPECT_TRUE(h.degenerate);
}

TEST(AggregateHuman, ListsUnlabelledPairs) {
  PairDataset d;
  d.pairs = {SentencePair::make("a", "x", "y", {4}), SentencePair::make("b", "x", "y"),
             SentencePair::make("c", "x", "y")};
  try {
    aggregate_human(d);
    FAIL();
  } catch (const Error& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("b"), std::string::npos);
    EXPECT_NE(msg.find("c"), std::string::npos);
  }
}

TEST(AggregateHuman, MedianOption) {
  PairDataset d;
  d.pairs = {SentencePair::make("a", "x", "y", {1, 5, 5})};
  EXPECT_DOUBLE_EQ(aggregate_human(d, HumanAggregation::median).mean, 5.0);
  EXPECT_NEAR(aggregate_human(d).mean, 11.0 / 3.0, 1e-12);
}

TEST(AggregateHuman, PermutationInvariant) {
  PairDataset d;
  d.pairs = {SentencePair::make("a", "x", "y", {1, 2}), SentencePair::make("b", "x", "y", {5}),
             SentencePair::make("c", "x", "y", {3, 4, 4}), SentencePair::make("d", "x", "y", {2})};
  const auto ref = aggregate_human(d);
  std::sort(d.pairs.begin(), d.pairs.end(), [](auto& x, auto& y) { return x.pair_id < y.pair_id; });
  do {
    const auto h = aggregate_human(d);
    EXPECT_NEAR(h.mean, ref.mean, 1e-12);
    EXPECT_NEAR(h.std, ref.std, 1e-12);
  } while (std::next_permutation(d.pairs.begin(), d.pairs.end(),
                                 [](auto& x, auto& y) { return x.pair_id < y.pair_id; }));
}

TEST(SamplePairs, ReplaysReferenceTrace) {
  const auto s = sample_pairs(make_dataset("d", 4), 2, 17);
  EXPECT_EQ(ids(s), (std::vector<std::string>{"p4", "p3"}));
}

TEST(SamplePairs, FullSizeKeepsMembership) {
  const auto d = make_dataset("d", 9);
  auto got = ids(sample_pairs(d, 9, 3));
  std::sort(got.begin(), got.end());
  auto want = ids(d);
  std::sort(want.begin(), want.end());
  EXPECT_EQ(got, want);
}

TEST(SamplePairs, DeterministicAndBounded) {
  const auto d = make_dataset("d", 50);
  EXPECT_EQ(ids(sample_pairs(d, 10, 42)), ids(sample_pairs(d, 10, 42)));
  EXPECT_NE(ids(sample_pairs(d, 10, 42)), ids(sample_pairs(d, 10, 43)));
  EXPECT_THROW(sample_pairs(d, 51, 1), Error);
  const auto s = ids(sample_pairs(d, 50, 9));
  EXPECT_EQ(std::set<std::string>(s.begin(), s.end()).size(), 50u);
}

TEST(RandomPairs, NeverReturnsAlignedPair) {
  PairDataset d;
  d.dataset_id = "two";
  d.pairs = {SentencePair::make("1", "a1", "b1"), SentencePair::make("2", "a2", "b2")};
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const auto r = generate_random_pairs(d, 1, seed);
    ASSERT_EQ(r.size(), 1u);
    const auto& p = r.pairs[0];
    EXPECT_NE(p.text_a.back(), p.text_b.back()) << p.text_a << " / " << p.text_b;
  }
}

TEST(RandomPairs, ZeroIsEmptyRandomDataset) {
  const auto r = generate_random_pairs(make_dataset("src", 3), 0, 1);
  EXPECT_EQ(r.size(), 0u);
  EXPECT_EQ(r.kind, DatasetKind::random);
  EXPECT_EQ(r.source_dataset_id, "src");
  EXPECT_EQ(r.dataset_id, "src_random");
}

// Expected pairs come from replaying the documented draw loop against an
// exhaustive list of admissible combinations.
TEST(RandomPairs, ReplaysReferenceTrace) {
  PairDataset d;
  d.dataset_id = "three";
  d.pairs = {SentencePair::make("1", "the cat sat", "a cat was sitting"),
             SentencePair::make("2", "dogs bark loudly", "the dog is barking"),
             SentencePair::make("3", "it rained today", "there was rain today")};
  EXPECT_EQ(random_pair_capacity(d), 12u);
  const auto r = generate_random_pairs(d, 3, 5);
  ASSERT_EQ(r.size(), 3u);
  const std::vector<std::pair<std::string, std::string>> expected{
      {"dogs bark loudly", "it rained today"},
      {"a cat was sitting", "it rained today"},
      {"the dog is barking", "it rained today"}};
  for (std::size_t k = 0; k < 3; ++k) {
    EXPECT_EQ(r.pairs[k].pair_id, "three_random-" + std::to_string(k));
    EXPECT_EQ(r.pairs[k].text_a, expected[k].first);
    EXPECT_EQ(r.pairs[k].text_b, expected[k].second);
  }
}

TEST(RandomPairs, CapacityErrorReportsMaximum) {
  PairDataset d;
  d.dataset_id = "two";
  d.pairs = {SentencePair::make("1", "a1", "b1"), SentencePair::make("2", "a2", "b2")};
  EXPECT_EQ(random_pair_capacity(d), 4u);
  EXPECT_NO_THROW(generate_random_pairs(d, 4, 1));
  try {
    generate_random_pairs(d, 5, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("at most 4"), std::string::npos) << e.what();
  }
}

TEST(RandomPairs, DuplicateStringsAreNotPairedWithThemselves) {
  PairDataset d;
  d.dataset_id = "dup";
  d.pairs = {SentencePair::make("1", "same", "x"), SentencePair::make("2", "same", "y"),
             SentencePair::make("3", "z", "w")};
  const auto cap = random_pair_capacity(d);
  const auto r = generate_random_pairs(d, cap, 11);
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& p : r.pairs) {
    EXPECT_NE(p.text_a, p.text_b);
    EXPECT_FALSE(p.text_a == "same" && (p.text_b == "x" || p.text_b == "y"));
    EXPECT_FALSE(p.text_b == "same" && (p.text_a == "x" || p.text_a == "y"));
    EXPECT_TRUE(seen.insert(std::minmax(p.text_a, p.text_b)).second);
  }
}

TEST(RandomPairs, ExhaustiveScanAgainstAlignedPairs) {
  PairDataset d;
  d.dataset_id = "src";
  for (int k = 0; k < 12; ++k)
    d.pairs.push_back(SentencePair::make(std::to_string(k), "a" + std::to_string(k), "b" + std::to_string(k)));
  std::set<std::pair<std::string, std::string>> aligned;
  for (const auto& p : d.pairs) aligned.insert(std::minmax(p.text_a, p.text_b));
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto r = generate_random_pairs(d, 40, seed);
    EXPECT_EQ(ids(r), ids(generate_random_pairs(d, 40, seed)));
    for (const auto& p : r.pairs) EXPECT_FALSE(aligned.count(std::minmax(p.text_a, p.text_b)));
  }
}
