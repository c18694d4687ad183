#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <random>
#include <sstream>

#include "cswkit/errors.hpp"
#include "cswkit/switchgen.hpp"
#include "support/fixtures.hpp"

using namespace cswkit;

namespace {

std::vector<TaggedToken> tag(std::string_view text, std::vector<Pos> pos) {
  const auto tokens = tokenize(text, Language::en);
  std::vector<TaggedToken> out;
  for (std::size_t i = 0; i < tokens.size(); ++i) out.push_back({tokens[i], pos.at(i)});
  return out;
}

AlignmentSet links(Language lang, std::string_view pharaoh) {
  return AlignmentSet{"p", lang, parse_pharaoh(pharaoh)};
}

std::map<Language, int> counts_by_lang(const SwitchPlan& plan) {
  std::map<Language, int> c;
  for (const auto& p : plan.points) ++c[p.embedded_lang];
  return c;
}

// Four nouns; the translations put each noun at the same index.
struct FourNouns {
  std::vector<TaggedToken> tagged = tag("house tree river book", {Pos::NOUN, Pos::NOUN, Pos::NOUN, Pos::NOUN});
  std::vector<Token> ar = tokenize("بيت شجرة نهر كتاب", Language::ar);
  std::vector<Token> zh = tokenize("房 树 河 书", Language::zh);
};

}  // namespace

TEST(NounSwitch, SingleEligibleNoun) {
  const auto tagged = tag("The house is red", {Pos::DET, Pos::NOUN, Pos::VERB, Pos::ADJ});
  const auto emb = tokenize("La maison est rouge", Language::fr);
  const auto plan = select_noun_switch_points("p", tagged, links(Language::fr, "0-0 1-1 2-2 3-3"), emb,
                                              Stoplist::builtin());
  ASSERT_EQ(plan.points.size(), 1u);
  EXPECT_EQ(plan.points[0], (SwitchPoint{1, Language::fr, {"maison"}}));
  EXPECT_EQ(plan.method, Method::noun_token);
}

TEST(NounSwitch, StoplistedExpression) {
  const auto tagged = tag("piece of cake", {Pos::NOUN, Pos::ADP, Pos::NOUN});
  const auto emb = tokenize("قطعة من الكعك", Language::ar);
  Stoplist stop;
  stop.add("piece of cake");
  const auto plan = select_noun_switch_points("p", tagged, links(Language::ar, "0-0 1-1 2-2"), emb, stop);
  EXPECT_TRUE(plan.points.empty());
  // Without the list both nouns switch.
  EXPECT_EQ(select_noun_switch_points("p", tagged, links(Language::ar, "0-0 1-1 2-2"), emb, Stoplist{})
                .points.size(),
            2u);
}

TEST(NounSwitch, StoplistIsCaseInsensitive) {
  const auto tagged = tag("A Piece of Cake", {Pos::DET, Pos::NOUN, Pos::ADP, Pos::NOUN});
  const auto emb = tokenize("a b c d", Language::fr);
  EXPECT_TRUE(select_noun_switch_points("p", tagged, links(Language::fr, "0-0 1-1 2-2 3-3"), emb,
                                        Stoplist::builtin())
                  .points.empty());
}

TEST(NounSwitch, UnalignedNounExcluded) {
  const auto tagged = tag("The house is red", {Pos::DET, Pos::NOUN, Pos::VERB, Pos::ADJ});
  const auto emb = tokenize("La maison est rouge", Language::fr);
  EXPECT_TRUE(select_noun_switch_points("p", tagged, links(Language::fr, "0-0 2-2 3-3"), emb, Stoplist{})
                  .points.empty());
}

TEST(NounSwitch, ContiguousMultiTokenSpan) {
  const auto tagged = tag("the railway", {Pos::DET, Pos::NOUN});
  const auto emb = tokenize("le chemin de fer", Language::fr);
  const auto plan = select_noun_switch_points("p", tagged, links(Language::fr, "0-0 1-1 1-2 1-3"), emb, Stoplist{});
  ASSERT_EQ(plan.points.size(), 1u);
  EXPECT_EQ(plan.points[0].replacement, (std::vector<std::string>{"chemin", "de", "fer"}));
}

TEST(NounSwitch, GappedSpanExcluded) {
  const auto tagged = tag("the railway", {Pos::DET, Pos::NOUN});
  const auto emb = tokenize("le chemin de fer", Language::fr);
  EXPECT_TRUE(select_noun_switch_points("p", tagged, links(Language::fr, "0-0 1-1 1-3"), emb, Stoplist{})
                  .points.empty());
}

TEST(NounSwitch, SharedTargetExcluded) {
  const auto tagged = tag("house house", {Pos::NOUN, Pos::NOUN});
  const auto emb = tokenize("maison", Language::fr);
  EXPECT_TRUE(select_noun_switch_points("p", tagged, links(Language::fr, "0-0 1-0"), emb, Stoplist{})
                  .points.empty());
}

TEST(NounSwitch, PropnOptional) {
  const auto tagged = tag("Paris", {Pos::PROPN});
  const auto emb = tokenize("باريس", Language::ar);
  EXPECT_EQ(select_noun_switch_points("p", tagged, links(Language::ar, "0-0"), emb, Stoplist{}).points.size(), 1u);
  EXPECT_TRUE(select_noun_switch_points("p", tagged, links(Language::ar, "0-0"), emb, Stoplist{}, {false})
                  .points.empty());
}

TEST(NounSwitch, SizeMismatchThrows) {
  const auto tagged = tag("house", {Pos::NOUN});
  const auto emb = tokenize("maison", Language::fr);
  EXPECT_THROW(select_noun_switch_points("p", tagged, links(Language::fr, "3-0"), emb, Stoplist{}),
               ValidationError);
}

TEST(RatioSwitch, CountRule) {
  EXPECT_EQ(ratio_switch_count(0.2, 10), 2u);
  EXPECT_EQ(ratio_switch_count(0.2, 3), 1u);
  EXPECT_EQ(ratio_switch_count(0.2, 0), 0u);
  EXPECT_EQ(ratio_switch_count(0.2, 1), 1u);
  EXPECT_EQ(ratio_switch_count(1.0, 7), 7u);
}

TEST(RatioSwitch, TenCandidatesTwoPoints) {
  std::vector<std::string> w;
  for (int i = 0; i < 10; ++i) w.push_back("w" + std::to_string(i));
  const auto m = tokenize(fixtures::join_words(w) + " .", Language::en);
  const auto e = tokenize(fixtures::join_words(w), Language::fr);
  const auto a = links(Language::fr, "0-0 1-1 2-2 3-3 4-4 5-5 6-6 7-7 8-8 9-9");
  const auto plan = select_ratio_switch_points("p", m, a, e, 0.2, 11);
  EXPECT_EQ(plan.points.size(), 2u);
  EXPECT_EQ(plan.seed, std::optional<std::uint64_t>(11));
  EXPECT_EQ(plan, select_ratio_switch_points("p", m, a, e, 0.2, 11));
  for (const auto& p : plan.points) EXPECT_LT(p.matrix_index, 10u);
}

TEST(RatioSwitch, ThreeCandidatesOnePoint) {
  const auto m = tokenize("a b c d", Language::en);
  const auto e = tokenize("x y z", Language::fr);
  EXPECT_EQ(select_ratio_switch_points("p", m, links(Language::fr, "0-0 1-1 3-2"), e, 0.2, 1).points.size(), 1u);
}

TEST(RatioSwitch, EmptyCandidatesEmptyPlan) {
  const auto m = tokenize("a b", Language::en);
  const auto e = tokenize("x", Language::fr);
  EXPECT_TRUE(select_ratio_switch_points("p", m, links(Language::fr, ""), e, 0.2, 1).points.empty());
}

TEST(RatioSwitch, RatioBounds) {
  const auto m = tokenize("a", Language::en);
  const auto e = tokenize("x", Language::fr);
  EXPECT_THROW(select_ratio_switch_points("p", m, links(Language::fr, "0-0"), e, 0.0, 1), ValidationError);
  EXPECT_THROW(select_ratio_switch_points("p", m, links(Language::fr, "0-0"), e, 1.5, 1), ValidationError);
  EXPECT_NO_THROW(select_ratio_switch_points("p", m, links(Language::fr, "0-0"), e, 1.0, 1));
}

TEST(RatioSwitch, SeedsSpreadOverCandidates) {
  std::vector<std::string> w;
  std::string ph;
  for (int i = 0; i < 20; ++i) {
    w.push_back("w" + std::to_string(i));
    ph += std::to_string(i) + "-" + std::to_string(i) + " ";
  }
  const auto m = tokenize(fixtures::join_words(w), Language::en);
  const auto e = tokenize(fixtures::join_words(w), Language::fr);
  const auto a = links(Language::fr, ph);
  std::vector<int> hits(20, 0);
  for (std::uint64_t s = 0; s < 400; ++s) {
    for (const auto& p : select_ratio_switch_points("p", m, a, e, 0.2, s).points) ++hits[p.matrix_index];
  }
  // 400 draws x 4 points over 20 slots: 80 expected each.
  for (int h : hits) {
    EXPECT_GT(h, 40);
    EXPECT_LT(h, 130);
  }
}

TEST(ExtremeSwitch, EvenSplitFourNouns) {
  FourNouns f;
  const auto aa = links(Language::ar, "0-0 1-1 2-2 3-3");
  const auto az = links(Language::zh, "0-0 1-1 2-2 3-3");
  const std::vector<EmbeddedSide> sides{{Language::ar, &aa, f.ar}, {Language::zh, &az, f.zh}};
  const auto plan = select_extreme_switch_points("p", f.tagged, sides, Stoplist{});
  ASSERT_EQ(plan.points.size(), 4u);
  EXPECT_EQ(counts_by_lang(plan), (std::map<Language, int>{{Language::ar, 2}, {Language::zh, 2}}));
  EXPECT_EQ(plan.points[0].embedded_lang, Language::ar);
  EXPECT_EQ(plan.points[1].embedded_lang, Language::zh);
  EXPECT_FALSE(plan.evenness_waived);
  EXPECT_EQ(plan.method, Method::extreme);
}

TEST(ExtremeSwitch, ThreeNounsRoundRobin) {
  const auto tagged = tag("house tree river", {Pos::NOUN, Pos::NOUN, Pos::NOUN});
  const auto fr = tokenize("maison arbre fleuve", Language::fr);
  const auto de = tokenize("Haus Baum Fluss", Language::de);
  const auto af = links(Language::fr, "0-0 1-1 2-2");
  const auto ad = links(Language::de, "0-0 1-1 2-2");
  const std::vector<EmbeddedSide> sides{{Language::fr, &af, fr}, {Language::de, &ad, de}};
  const auto plan = select_extreme_switch_points("p", tagged, sides, Stoplist{});
  ASSERT_EQ(plan.points.size(), 3u);
  EXPECT_EQ(plan.points[0].embedded_lang, Language::fr);
  EXPECT_EQ(plan.points[1].embedded_lang, Language::de);
  EXPECT_EQ(plan.points[2].embedded_lang, Language::fr);
  EXPECT_FALSE(plan.evenness_waived);
}

TEST(ExtremeSwitch, OneNounOnlyInArabic) {
  // Noun 1 has no zh link. The possible 2/2 splits put noun 1 in ar plus one
  // of the others; round-robin order picks ar, ar, zh, zh.
  FourNouns f;
  const auto aa = links(Language::ar, "0-0 1-1 2-2 3-3");
  const auto az = links(Language::zh, "0-0 2-2 3-3");
  const std::vector<EmbeddedSide> sides{{Language::ar, &aa, f.ar}, {Language::zh, &az, f.zh}};
  const auto plan = select_extreme_switch_points("p", f.tagged, sides, Stoplist{});
  ASSERT_EQ(plan.points.size(), 4u);
  EXPECT_EQ(plan.points[1].embedded_lang, Language::ar);
  EXPECT_EQ(counts_by_lang(plan), (std::map<Language, int>{{Language::ar, 2}, {Language::zh, 2}}));
  EXPECT_FALSE(plan.evenness_waived);
}

TEST(ExtremeSwitch, TooFewPositionsWaived) {
  const auto tagged = tag("the house", {Pos::DET, Pos::NOUN});
  const auto fr = tokenize("la maison", Language::fr);
  const auto de = tokenize("das Haus", Language::de);
  const auto af = links(Language::fr, "0-0 1-1");
  const auto ad = links(Language::de, "0-0 1-1");
  const std::vector<EmbeddedSide> sides{{Language::fr, &af, fr}, {Language::de, &ad, de}};
  const auto plan = select_extreme_switch_points("p", tagged, sides, Stoplist{});
  EXPECT_EQ(plan.points.size(), 1u);
  EXPECT_TRUE(plan.evenness_waived);
}

TEST(ExtremeSwitch, InfeasibleSplitWaived) {
  FourNouns f;
  const auto aa = links(Language::ar, "0-0 1-1 2-2 3-3");
  const auto az = links(Language::zh, "0-0");
  const std::vector<EmbeddedSide> sides{{Language::ar, &aa, f.ar}, {Language::zh, &az, f.zh}};
  const auto plan = select_extreme_switch_points("p", f.tagged, sides, Stoplist{});
  EXPECT_EQ(plan.points.size(), 4u);
  EXPECT_TRUE(plan.evenness_waived);
}

TEST(ExtremeSwitch, NeedsTwoLanguages) {
  FourNouns f;
  const auto aa = links(Language::ar, "0-0");
  const std::vector<EmbeddedSide> sides{{Language::ar, &aa, f.ar}};
  EXPECT_THROW(select_extreme_switch_points("p", f.tagged, sides, Stoplist{}), ValidationError);
}

// Brute force over every assignment of eligible languages: evenness must be
// waived exactly when no assignment is within 1, and otherwise hold.
TEST(ExtremeSwitch, EvennessMatchesExhaustiveSearch) {
  std::mt19937_64 rng(404);
  for (int iter = 0; iter < 1500; ++iter) {
    auto f = fixtures::random_full_eligibility(rng);
    for (auto& a : f.alignments) {
      std::erase_if(a.links, [&](const AlignmentLink&) { return rng() % 3 == 0; });
    }
    const auto sides = fixtures::sides_of(f);
    const auto plan = select_extreme_switch_points("fx", f.tagged, sides, Stoplist{});
    const std::size_t k = f.langs.size();

    std::vector<std::vector<std::size_t>> options;  // per eligible position
    for (std::size_t i = 0; i < f.tagged.size(); ++i) {
      if (f.tagged[i].pos != Pos::NOUN) continue;
      std::vector<std::size_t> opts;
      for (std::size_t l = 0; l < k; ++l) {
        if (!f.alignments[l].targets_of(i).empty()) opts.push_back(l);
      }
      if (!opts.empty()) options.push_back(opts);
    }
    bool balanced_exists = false;
    std::vector<std::size_t> choice(options.size(), 0);
    for (;;) {
      std::vector<int> c(k, 0);
      for (std::size_t p = 0; p < options.size(); ++p) ++c[options[p][choice[p]]];
      if (*std::max_element(c.begin(), c.end()) - *std::min_element(c.begin(), c.end()) <= 1) {
        balanced_exists = true;
        break;
      }
      std::size_t p = 0;
      while (p < options.size() && ++choice[p] == options[p].size()) choice[p++] = 0;
      if (p == options.size()) break;
    }

    ASSERT_EQ(plan.points.size(), options.size());
    const bool expect_waived = !balanced_exists || options.size() < k;
    ASSERT_EQ(plan.evenness_waived, expect_waived) << f.text;
    if (balanced_exists) {
      std::vector<int> c(k, 0);
      for (const auto& p : plan.points) {
        const auto l = static_cast<std::size_t>(
            std::find(f.langs.begin(), f.langs.end(), p.embedded_lang) - f.langs.begin());
        ASSERT_FALSE(f.alignments[l].targets_of(p.matrix_index).empty());
        ++c[l];
      }
      ASSERT_LE(*std::max_element(c.begin(), c.end()) - *std::min_element(c.begin(), c.end()), 1);
    }
  }
}

TEST(ApplyPlan, ReplacesToken) {
  const std::string src = "The house is red .";
  const auto m = tokenize(src, Language::en);
  const SwitchPlan plan{"p", Method::noun_token, {{1, Language::fr, {"maison"}}}, std::nullopt, false};
  const auto inst = apply_switch_plan(src, m, plan);
  EXPECT_EQ(inst.csw_text, "The maison is red .");
  EXPECT_EQ(inst.original_text, src);
  EXPECT_EQ(inst.mode, GenerationMode::deterministic);
}

TEST(ApplyPlan, EmptyPlanIdentity) {
  const std::string src = "Hello,  world!";
  const auto m = tokenize(src, Language::en);
  EXPECT_EQ(apply_switch_plan(src, m, SwitchPlan{"p", Method::noun_token, {}, std::nullopt, false}).csw_text, src);
}

TEST(ApplyPlan, ArabicReplacement) {
  const std::string src = "The tree fell .";
  const auto m = tokenize(src, Language::en);
  const SwitchPlan plan{"p", Method::noun_token, {{1, Language::ar, {"شجرة"}}}, std::nullopt, false};
  // String substitution oracle: the token's bytes swapped in place.
  std::string expect = src;
  expect.replace(m[1].span.begin, m[1].span.end - m[1].span.begin, "شجرة");
  EXPECT_EQ(apply_switch_plan(src, m, plan).csw_text, expect);
  EXPECT_EQ(expect, "The شجرة fell .");
}

TEST(ApplyPlan, HanJoinsWithoutSpaces) {
  EXPECT_EQ(join_replacement(std::vector<std::string>{"火", "车"}, Language::zh), "火车");
  EXPECT_EQ(join_replacement(std::vector<std::string>{"chemin", "de", "fer"}, Language::fr), "chemin de fer");
}

TEST(ApplyPlan, OutOfRangeThrows) {
  const auto m = tokenize("a b", Language::en);
  const SwitchPlan plan{"p", Method::noun_token, {{5, Language::fr, {"x"}}}, std::nullopt, false};
  EXPECT_THROW(apply_switch_plan("a b", m, plan), ValidationError);
  EXPECT_THROW(mask_placeholders("a b", m, plan), ValidationError);
}

TEST(PlanValidate, Invariants) {
  SwitchPlan unsorted{"p", Method::noun_token, {{1, Language::fr, {"x"}}, {0, Language::fr, {"y"}}}, std::nullopt, false};
  EXPECT_THROW(unsorted.validate(3), ValidationError);
  SwitchPlan empty_repl{"p", Method::noun_token, {{0, Language::fr, {}}}, std::nullopt, false};
  EXPECT_THROW(empty_repl.validate(3), ValidationError);
}

TEST(Masking, Examples) {
  const std::string src = "The house is red .";
  const auto m = tokenize(src, Language::en);
  const SwitchPlan one{"p", Method::noun_token, {{1, Language::fr, {"maison"}}}, std::nullopt, false};
  EXPECT_EQ(mask_placeholders(src, m, one), "The ####### is red .");
  EXPECT_EQ(mask_placeholders(src, m, SwitchPlan{"p", Method::noun_token, {}, std::nullopt, false}), src);
  EXPECT_EQ(count_masks(src), 0u);
  const SwitchPlan two{"p", Method::noun_token, {{1, Language::fr, {"maison"}}, {3, Language::fr, {"rouge"}}},
                       std::nullopt, false};
  EXPECT_EQ(count_masks(mask_placeholders(src, m, two)), 2u);
  EXPECT_EQ(count_masks("##############"), 2u);
  EXPECT_EQ(count_masks("######"), 0u);
}

TEST(Masking, CountEqualsPointsProperty) {
  std::mt19937_64 rng(91);
  for (int iter = 0; iter < 500; ++iter) {
    const auto f = fixtures::random_tagged(rng);
    const auto plan = select_noun_switch_points("fx", f.tagged, f.alignment, f.embedded, Stoplist::builtin());
    EXPECT_EQ(count_masks(mask_placeholders(f.text, f.tokens, plan)), plan.points.size());
  }
}

TEST(CswJsonl, Shape) {
  const std::string src = "The house is red .";
  const SwitchPlan plan{"p1", Method::noun_token, {{1, Language::fr, {"maison"}}}, std::nullopt, false};
  const auto line = to_jsonl(apply_switch_plan(src, tokenize(src, Language::en), plan));
  EXPECT_NE(line.find(R"("points":[{"i":1,"lang":"fr","repl":"maison"}])"), std::string::npos) << line;
  EXPECT_NE(line.find(R"("mode":"deterministic")"), std::string::npos);
  EXPECT_NE(line.find(R"("csw_text":"The maison is red .")"), std::string::npos);
}

TEST(Stoplist, FromStream) {
  std::istringstream in("# comment\n\nBreak a leg\n");
  const auto s = Stoplist::from_stream(in);
  EXPECT_EQ(s.size(), 1u);
  const auto cov = s.covered(tokenize("please break a leg now", Language::en));
  EXPECT_EQ(cov, (std::vector<bool>{false, true, true, true, false}));
}

TEST(MethodNames, Roundtrip) {
  for (Method m : {Method::noun_token, Method::ratio_token, Method::extreme}) {
    EXPECT_EQ(parse_method(to_string(m)), m);
  }
  EXPECT_THROW(parse_method("nope"), Error);
}
