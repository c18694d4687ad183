#include <gtest/gtest.h>

#include <json.hpp>
#include <random>
#include <sstream>

#include "cswkit/evalbench.hpp"
#include "cswkit/generator.hpp"

using namespace cswkit;

namespace {

BenchmarkItem mmlu(const std::string& id, const std::string& q, const std::string& q_ar, std::string gold = "B") {
  BenchmarkItem it{BenchmarkId::mmlu, id,
                   {{"question", q}, {"option_a", "north"}, {"option_b", "south"}, {"option_c", "east"}, {"option_d", "west"}},
                   std::move(gold), {}};
  if (!q_ar.empty()) it.translations[Language::ar] = {{"question", q_ar}};
  return it;
}

// Replaces the whole field with its translation (switches everything).
class SwapGenerator final : public CswGenerator {
 public:
  CswInstance generate(const ParallelPair& pair, std::span<const Language> langs) const override {
    const std::string* t = pair.translation(langs.front());
    if (!t) throw GenerationUnavailable("no translation for " + pair.id);
    return CswInstance{pair.id, pair.matrix_text, *t, SwitchPlan{pair.id, Method::noun_token, {}, std::nullopt, false}, GenerationMode::deterministic};
  }
};

std::vector<EvalRecord> records(BenchmarkId id, int correct, int total) {
  std::vector<EvalRecord> out;
  for (int i = 0; i < total; ++i) out.push_back({id, "i" + std::to_string(i), "A", i < correct ? "A" : "B", i < correct});
  return out;
}

class FixedScores final : public ScoreChoicesAdapter {
 public:
  explicit FixedScores(std::map<std::string, double> s) : ScoreChoicesAdapter("fixed"), scores_(std::move(s)) {}
  double score(const std::string&, std::string_view label, std::string_view) override {
    return scores_.at(std::string(label));
  }

 private:
  std::map<std::string, double> scores_;
};

class ScriptedGenerate final : public GenerateAdapter {
 public:
  explicit ScriptedGenerate(std::vector<std::string> replies) : GenerateAdapter("scripted"), replies_(std::move(replies)) {}
  std::string generate(const std::string& prompt) override {
    prompts.push_back(prompt);
    return replies_.at(std::min(next_++, replies_.size() - 1));
  }
  std::vector<std::string> prompts;

 private:
  std::vector<std::string> replies_;
  std::size_t next_ = 0;
};

}  // namespace

TEST(FieldPolicy, SwitchedFields) {
  auto names = [](BenchmarkId id) {
    const auto f = switched_fields(id);
    return std::vector<std::string>(f.begin(), f.end());
  };
  EXPECT_EQ(names(BenchmarkId::belebele), (std::vector<std::string>{"passage", "question"}));
  EXPECT_EQ(names(BenchmarkId::mmlu), std::vector<std::string>{"question"});
  EXPECT_EQ(names(BenchmarkId::xnli), (std::vector<std::string>{"premise", "hypothesis"}));
}

TEST(BuildBenchmark, MmluOptionsUntouched) {
  const std::vector<BenchmarkItem> items{mmlu("m1", "Where is it ?", "أين هو ؟")};
  const std::vector<Language> langs{Language::ar};
  const auto bench = build_csw_benchmark(items, Language::en, langs, Method::noun_token, SwapGenerator{});
  ASSERT_EQ(bench.items.size(), 1u);
  const auto& s = bench.items[0].switched;
  EXPECT_EQ(s.fields.at("question"), "أين هو ؟");
  for (const char* f : {"option_a", "option_b", "option_c", "option_d"}) EXPECT_EQ(s.fields.at(f), items[0].fields.at(f));
  EXPECT_EQ(s.gold, "B");
  EXPECT_EQ(s.item_id, "m1");
}

TEST(BuildBenchmark, XnliBothFieldsSwitched) {
  BenchmarkItem x{BenchmarkId::xnli, "x1", {{"premise", "A man sleeps ."}, {"hypothesis", "He rests ."}}, "0", {}};
  x.translations[Language::zh] = {{"premise", "一个人睡觉。"}, {"hypothesis", "他休息。"}};
  const std::vector<Language> langs{Language::zh};
  const auto bench = build_csw_benchmark(std::vector{x}, Language::en, langs, Method::noun_token, SwapGenerator{});
  ASSERT_EQ(bench.items.size(), 1u);
  EXPECT_EQ(bench.items[0].switched.fields.at("premise"), "一个人睡觉。");
  EXPECT_EQ(bench.items[0].switched.fields.at("hypothesis"), "他休息。");
}

TEST(BuildBenchmark, MissingPassageTranslationSkipped) {
  BenchmarkItem b{BenchmarkId::belebele, "b1",
                  {{"passage", "P ."}, {"question", "Q ?"}, {"option_a", "a"}, {"option_b", "b"}, {"option_c", "c"}, {"option_d", "d"}},
                  "C", {}};
  b.translations[Language::fr] = {{"question", "Q ?"}};
  BenchmarkItem ok = b;
  ok.item_id = "b2";
  ok.translations[Language::fr]["passage"] = "P fr .";
  const std::vector<Language> langs{Language::fr};
  const auto bench = build_csw_benchmark(std::vector{b, ok}, Language::en, langs, Method::noun_token, SwapGenerator{});
  ASSERT_EQ(bench.skipped.size(), 1u);
  EXPECT_EQ(bench.skipped[0].item_id, "b1");
  EXPECT_FALSE(bench.skipped[0].reason.empty());
  ASSERT_EQ(bench.items.size(), 1u);
  const auto report = nlohmann::json::parse(skip_report_json(bench.skipped));
  EXPECT_EQ(report.dump().find("b1") != std::string::npos, true);
}

TEST(BuildBenchmark, FieldPairIds) {
  const auto pairs = field_pairs(mmlu("m7", "Q ?", "س ؟"), Language::en);
  ASSERT_EQ(pairs.size(), 1u);
  EXPECT_EQ(pairs[0].id, "m7:question");
  EXPECT_EQ(*pairs[0].translation(Language::ar), "س ؟");
}

TEST(BuildBenchmark, GoldAndOptionsPreservedProperty) {
  std::mt19937_64 rng(17);
  const std::vector<std::string> golds{"A", "B", "C", "D"};
  std::vector<BenchmarkItem> items;
  for (int i = 0; i < 200; ++i) {
    const bool translated = rng() % 4 != 0;
    items.push_back(mmlu("m" + std::to_string(i), "What is item " + std::to_string(i) + " ?",
                         translated ? "ما هو " + std::to_string(i) + " ؟" : "", golds[rng() % 4]));
  }
  const std::vector<Language> langs{Language::ar};
  const auto bench = build_csw_benchmark(items, Language::en, langs, Method::noun_token, SwapGenerator{}, 4);
  EXPECT_EQ(bench.items.size() + bench.skipped.size(), items.size());
  std::multiset<std::string> before, after;
  for (const auto& it : bench.items) {
    before.insert(it.original.gold);
    after.insert(it.switched.gold);
    EXPECT_EQ(it.switched.fields.at("option_c"), it.original.fields.at("option_c"));
  }
  EXPECT_EQ(before, after);
}

TEST(BenchmarkIo, Roundtrip) {
  const std::vector<Language> langs{Language::ar};
  const auto bench = build_csw_benchmark(std::vector{mmlu("m1", "Where ?", "أين ؟"), mmlu("m2", "Who ?", "من ؟")},
                                         Language::en, langs, Method::ratio_token, SwapGenerator{});
  std::stringstream ss;
  write_csw_benchmark(ss, bench);
  const auto back = read_csw_benchmark(ss, "mem");
  EXPECT_EQ(back.method, Method::ratio_token);
  EXPECT_EQ(back.embedded_langs, langs);
  ASSERT_EQ(back.items.size(), 2u);
  EXPECT_EQ(back.items[1].switched, bench.items[1].switched);
  EXPECT_EQ(back.items[1].original.fields, bench.items[1].original.fields);
}

TEST(Evaluate, StubAlwaysGold) {
  std::vector<BenchmarkItem> items;
  for (int i = 0; i < 10; ++i) items.push_back(mmlu("m" + std::to_string(i), "Q ?", ""));
  StubAdapter stub("s", StubRule::always_gold);
  const auto recs = evaluate(stub, items);
  ASSERT_EQ(recs.size(), 10u);
  for (const auto& r : recs) EXPECT_TRUE(r.correct);
  EXPECT_DOUBLE_EQ(accuracy(recs), 1.0);
}

TEST(Evaluate, AsciiStubFailsExactlyOnSwitched) {
  std::vector<BenchmarkItem> items;
  for (int i = 0; i < 20; ++i) items.push_back(mmlu("m" + std::to_string(i), "Where ?", i % 3 == 0 ? "أين ؟" : ""));
  // Untranslated items fall back to identity so they stay ASCII.
  class Partial final : public CswGenerator {
   public:
    CswInstance generate(const ParallelPair& p, std::span<const Language> l) const override {
      const std::string* t = p.translation(l.front());
      return CswInstance{p.id, p.matrix_text, t ? *t : p.matrix_text, SwitchPlan{p.id, Method::noun_token, {}, std::nullopt, false}, GenerationMode::deterministic};
    }
  };
  const std::vector<Language> langs{Language::ar};
  const auto bench = build_csw_benchmark(items, Language::en, langs, Method::noun_token, Partial{});
  StubAdapter stub("s", StubRule::ascii_only);
  const auto recs = evaluate(stub, bench.switched());
  for (std::size_t i = 0; i < recs.size(); ++i) {
    const bool switched = bench.items[i].switched.fields != bench.items[i].original.fields;
    EXPECT_EQ(recs[i].correct, !switched) << i;
  }
}

TEST(Evaluate, ScoreTieGoesToLowestLabel) {
  FixedScores model({{"A", 0.1}, {"B", 0.9}, {"C", 0.9}, {"D", 0.2}});
  const auto recs = evaluate(model, std::vector{mmlu("m1", "Q ?", "")});
  EXPECT_EQ(recs[0].predicted, "B");
  EXPECT_TRUE(recs[0].correct);
}

TEST(Evaluate, GenerateParsesFirstLabel) {
  ScriptedGenerate model({"The answer is C, not A."});
  const auto recs = evaluate(model, std::vector{mmlu("m1", "Q ?", "")});
  EXPECT_EQ(recs[0].predicted, "C");
  EXPECT_EQ(model.prompts[0], format_item(mmlu("m1", "Q ?", "")));
}

TEST(Evaluate, InvalidAfterRetries) {
  ScriptedGenerate model({"no idea"});
  EvalOptions o;
  o.retries = 2;
  const auto recs = evaluate(model, std::vector{mmlu("m1", "Q ?", "")}, o);
  EXPECT_EQ(recs[0].predicted, kInvalidPrediction);
  EXPECT_FALSE(recs[0].correct);
  EXPECT_EQ(model.prompts.size(), 3u);
}

TEST(Evaluate, MitigationPrepended) {
  ScriptedGenerate model({"B"});
  EvalOptions o;
  o.mitigation = Language::ar;
  const auto item = mmlu("m1", "Q ?", "");
  evaluate(model, std::vector{item}, o);
  EXPECT_EQ(model.prompts[0], prepend_mitigation(item, Language::ar));
}

TEST(Evaluate, XnliLabels) {
  EXPECT_EQ(parse_prediction("label 2", BenchmarkId::xnli), "2");
  EXPECT_EQ(parse_prediction("A", BenchmarkId::xnli), std::nullopt);
  EXPECT_EQ(parse_prediction("12 then 1", BenchmarkId::xnli), "1");
  EXPECT_EQ(parse_prediction("(D)", BenchmarkId::mmlu), "D");
  EXPECT_EQ(parse_prediction("An answer", BenchmarkId::mmlu), std::nullopt);
}

TEST(Metrics, Accuracy) {
  EXPECT_DOUBLE_EQ(accuracy(records(BenchmarkId::mmlu, 3, 4)), 0.75);
  EXPECT_DOUBLE_EQ(accuracy(records(BenchmarkId::mmlu, 5, 5)), 1.0);
  EXPECT_DOUBLE_EQ(accuracy(records(BenchmarkId::mmlu, 0, 5)), 0.0);
  EXPECT_THROW(accuracy({}), ValidationError);
}

TEST(Metrics, WeightedAccuracy) {
  EXPECT_NEAR(weighted_accuracy(std::vector<BenchmarkScore>{{100, 0.5}, {300, 0.7}}), 0.65, 1e-12);
  EXPECT_DOUBLE_EQ(weighted_accuracy(std::vector<BenchmarkScore>{{42, 0.31}}), 0.31);
  // (900*0.6 + 14042*0.68 + 5010*0.55) / 19952 = 12844.06 / 19952
  EXPECT_NEAR(weighted_accuracy(std::vector<BenchmarkScore>{{900, 0.6}, {14042, 0.68}, {5010, 0.55}}),
              0.6437479951884523, 1e-12);
  EXPECT_THROW(weighted_accuracy({}), ValidationError);
  EXPECT_THROW(weighted_accuracy(std::vector<BenchmarkScore>{{0, 0.5}}), ValidationError);
}

TEST(Metrics, WeightedIsPooledMeanProperty) {
  std::mt19937_64 rng(8);
  for (int iter = 0; iter < 300; ++iter) {
    std::vector<EvalRecord> all;
    std::size_t correct = 0;
    for (BenchmarkId id : {BenchmarkId::belebele, BenchmarkId::mmlu, BenchmarkId::xnli}) {
      const int n = 1 + static_cast<int>(rng() % 50);
      const int c = static_cast<int>(rng() % (n + 1));
      correct += c;
      for (auto& r : records(id, c, n)) all.push_back(r);
    }
    const auto rep = make_report(all);
    EXPECT_NEAR(rep.weighted_accuracy, static_cast<double>(correct) / all.size(), 1e-12);
    double lo = 1, hi = 0;
    for (const auto& [id, s] : rep.per_benchmark) {
      lo = std::min(lo, s.accuracy);
      hi = std::max(hi, s.accuracy);
    }
    EXPECT_GE(rep.weighted_accuracy, lo - 1e-12);
    EXPECT_LE(rep.weighted_accuracy, hi + 1e-12);
  }
}

TEST(Metrics, Deltas) {
  const auto base = make_report(records(BenchmarkId::mmlu, 70, 100));
  const auto csw = make_report(records(BenchmarkId::mmlu, 66, 100));
  const auto d = accuracy_delta(csw, base);
  EXPECT_NEAR(d.weighted, -0.04, 1e-12);
  EXPECT_NEAR(d.per_benchmark.at(BenchmarkId::mmlu), -0.04, 1e-12);
  const auto back = accuracy_delta(base, csw);
  EXPECT_NEAR(back.weighted, 0.04, 1e-12);
  const auto zero = accuracy_delta(base, base);
  EXPECT_EQ(zero.weighted, 0.0);

  const auto b2 = make_report(records(BenchmarkId::xnli, 54, 100));
  const auto c2 = make_report(records(BenchmarkId::xnli, 43, 100));
  EXPECT_NEAR(accuracy_delta(c2, b2).weighted, -0.11, 1e-12);
}

TEST(Metrics, DeltaIdMismatch) {
  const auto a = make_report(records(BenchmarkId::mmlu, 1, 2));
  const auto b = make_report(records(BenchmarkId::xnli, 1, 2));
  try {
    accuracy_delta(a, b);
    FAIL();
  } catch (const ValidationError& e) {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("mmlu"), std::string::npos);
    EXPECT_NE(msg.find("xnli"), std::string::npos);
  }
}

TEST(Metrics, ReportJson) {
  const auto base = make_report(records(BenchmarkId::mmlu, 70, 100));
  auto csw = make_report(records(BenchmarkId::mmlu, 66, 100));
  attach_deltas(csw, base);
  RunMetadata meta{"stub", "noun_token", Language::en, {Language::ar}, 3, false};
  const auto j = nlohmann::json::parse(eval_report_json(base, csw, meta));
  EXPECT_EQ(j["model"], "stub");
  EXPECT_NEAR(j["csw"]["weighted_delta"].get<double>(), -0.04, 1e-12);
  EXPECT_NEAR(j["baseline"]["weighted_accuracy"].get<double>(), 0.70, 1e-12);
  EXPECT_EQ(j["embedded_langs"], nlohmann::json::array({"ar"}));
}
