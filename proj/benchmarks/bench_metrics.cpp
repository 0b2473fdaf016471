#include <random>
#include <string>

#include <benchmark/benchmark.h>

#include "semsim/metrics.hpp"

namespace {

const char* const kWords[] = {"the", "cat", "sat", "on", "mat", "dog", "ran", "in", "park", "a",
                              "big", "old", "tree", "fell", "river", "city", "train", "was", "late", "rain"};

std::string sentence(std::mt19937_64& gen, std::size_t n) {
  std::string s;
  for (std::size_t k = 0; k < n; ++k) s += std::string(k ? " " : "") + kWords[gen() % std::size(kWords)];
  return s;
}

semsim::EmbeddingTable table() {
  std::mt19937_64 gen(1);
  std::normal_distribution<double> normal;
  semsim::EmbeddingTable t("w2v", 50);
  for (const char* w : kWords) {
    semsim::Vector v(50);
    for (auto& x : v) x = normal(gen);
    t.insert(w, v);
  }
  return t;
}

template <typename Fn>
void run_pairs(benchmark::State& state, Fn fn) {
  std::mt19937_64 gen(7);
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = sentence(gen, n), b = sentence(gen, n);
  const auto ta = semsim::tokenize(a), tb = semsim::tokenize(b);
  for (auto _ : state) benchmark::DoNotOptimize(fn(a, b, ta, tb));
}

void BM_Bleu(benchmark::State& state) {
  run_pairs(state, [](auto&, auto&, auto& a, auto& b) { return semsim::bleu(b, a); });
}
BENCHMARK(BM_Bleu)->Arg(10)->Arg(40);

void BM_RougeL(benchmark::State& state) {
  run_pairs(state, [](auto&, auto&, auto& a, auto& b) { return semsim::rouge_l(b, a); });
}
BENCHMARK(BM_RougeL)->Arg(10)->Arg(40);

void BM_Chrf(benchmark::State& state) {
  run_pairs(state, [](auto& a, auto& b, auto&, auto&) { return semsim::chrf(a, b); });
}
BENCHMARK(BM_Chrf)->Arg(10)->Arg(40);

void BM_Meteor(benchmark::State& state) {
  run_pairs(state, [](auto&, auto&, auto& a, auto& b) { return semsim::meteor(b, a); });
}
BENCHMARK(BM_Meteor)->Arg(10)->Arg(40);

void BM_Wmd(benchmark::State& state) {
  const auto t = table();
  run_pairs(state, [&t](auto&, auto&, auto& a, auto& b) { return semsim::wmd(a, b, t); });
}
BENCHMARK(BM_Wmd)->Arg(10)->Arg(40);

}  // namespace
