#include <benchmark/benchmark.h>

#include <random>
#include <string>
#include <vector>

#include "cswkit/align.hpp"
#include "cswkit/switchgen.hpp"
#include "cswkit/tagger.hpp"
#include "cswkit/tokenizer.hpp"

using namespace cswkit;

namespace {

// Synthetic parallel corpus over a small vocabulary; word i on the matrix
// side always translates to word i on the embedded side.
std::vector<TokenizedPair> synthetic_corpus(std::size_t pairs, std::size_t vocab) {
  std::mt19937_64 rng(1);
  std::vector<TokenizedPair> out;
  for (std::size_t p = 0; p < pairs; ++p) {
    TokenizedPair tp{"p" + std::to_string(p), {}, {}};
    const std::size_t len = 5 + rng() % 15;
    for (std::size_t k = 0; k < len; ++k) {
      const auto w = rng() % vocab;
      tp.matrix.push_back("m" + std::to_string(w));
      tp.embedded.push_back("e" + std::to_string(w));
    }
    std::shuffle(tp.embedded.begin(), tp.embedded.end(), rng);
    out.push_back(std::move(tp));
  }
  return out;
}

void BM_Ibm1Train(benchmark::State& state) {
  const auto corpus = synthetic_corpus(static_cast<std::size_t>(state.range(0)), 500);
  for (auto _ : state) benchmark::DoNotOptimize(train_ibm1(corpus, 5));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Ibm1Train)->Arg(200)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_Tokenize(benchmark::State& state) {
  const std::string en =
      "The committee's report, published on 3.5 March, didn't address the state-of-the-art "
      "methods used by researchers in Paris and Berlin.";
  const std::string zh = "我们在NLP会议上讨论了代码转换的问题。";
  for (auto _ : state) {
    benchmark::DoNotOptimize(tokenize(en, Language::en));
    benchmark::DoNotOptimize(tokenize(zh, Language::zh));
  }
}
BENCHMARK(BM_Tokenize);

void BM_TagEnglish(benchmark::State& state) {
  const auto tokens = tokenize("The old teacher quickly opened the heavy window near the garden .", Language::en);
  for (auto _ : state) benchmark::DoNotOptimize(tag_tokens(tokens, Language::en));
}
BENCHMARK(BM_TagEnglish);

void BM_ExtremePlan(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::string text, emb;
  for (std::size_t i = 0; i < n; ++i) {
    text += i ? " house" : "house";
    emb += i ? " w" : "w";
  }
  const auto tokens = tokenize(text, Language::en);
  std::vector<TaggedToken> tagged;
  for (const auto& t : tokens) tagged.push_back({t, Pos::NOUN});
  const std::vector<Language> langs{Language::ar, Language::de, Language::fr, Language::zh};
  std::vector<std::vector<Token>> embedded;
  std::vector<AlignmentSet> alignments;
  std::mt19937_64 rng(2);
  for (Language l : langs) {
    embedded.push_back(tokenize(emb, l));
    AlignmentSet a{"b", l, {}};
    for (std::size_t i = 0; i < n; ++i) {
      if (rng() % 3) a.links.push_back({i, i, 1.0});
    }
    alignments.push_back(std::move(a));
  }
  std::vector<EmbeddedSide> sides;
  for (std::size_t k = 0; k < langs.size(); ++k) sides.push_back({langs[k], &alignments[k], embedded[k]});
  const Stoplist empty;
  for (auto _ : state) benchmark::DoNotOptimize(select_extreme_switch_points("b", tagged, sides, empty));
}
BENCHMARK(BM_ExtremePlan)->Arg(16)->Arg(64);

void BM_RatioPlan(benchmark::State& state) {
  std::string text;
  AlignmentSet a{"b", Language::fr, {}};
  for (std::size_t i = 0; i < 200; ++i) {
    text += i ? " w" : "w";
    a.links.push_back({i, i, 1.0});
  }
  const auto m = tokenize(text, Language::en);
  const auto e = tokenize(text, Language::fr);
  std::uint64_t seed = 0;
  for (auto _ : state) benchmark::DoNotOptimize(select_ratio_switch_points("b", m, a, e, 0.2, ++seed));
}
BENCHMARK(BM_RatioPlan);

}  // namespace

// libbenchmark_main ships as LTO bytecode from another compiler release.
BENCHMARK_MAIN();
