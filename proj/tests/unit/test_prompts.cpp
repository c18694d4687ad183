#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "cswkit/errors.hpp"
#include "cswkit/ift.hpp"
#include "cswkit/prompts.hpp"

using namespace cswkit;

namespace {

// Reference copies of the prompt texts live in tests/data/prompts.
std::string reference(const std::string& name) {
  std::ifstream in(std::string(CSWKIT_TEST_DATA_DIR) + "/prompts/" + name + ".txt", std::ios::binary);
  EXPECT_TRUE(in) << name;
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  for (std::size_t pos = 0; (pos = s.find(from, pos)) != std::string::npos; pos += to.size()) {
    s.replace(pos, from.size(), to);
  }
  return s;
}

}  // namespace

TEST(Prompts, BodiesMatchReference) {
  EXPECT_EQ(template_body(TemplateId::identify_nouns), reference("identify_nouns"));
  EXPECT_EQ(template_body(TemplateId::fill_placeholders), reference("fill_placeholders"));
  EXPECT_EQ(template_body(TemplateId::fill_ratio), reference("fill_ratio"));
  EXPECT_EQ(template_body(TemplateId::judge_pairwise), reference("judge_pairwise"));
}

TEST(Prompts, MitigationRendersReference) {
  const std::map<std::string, std::string> ar{{"language", "Arabic"}};
  EXPECT_EQ(render(TemplateId::mitigate_belebele, ar), reference("mitigate_belebele_ar"));
  EXPECT_EQ(render(TemplateId::mitigate_mmlu, ar), reference("mitigate_mmlu_ar"));
  EXPECT_EQ(render(TemplateId::mitigate_xnli, ar), reference("mitigate_xnli_ar"));
}

TEST(Prompts, Slots) {
  EXPECT_EQ(template_slots(TemplateId::identify_nouns), std::vector<std::string>{"text"});
  EXPECT_EQ(template_slots(TemplateId::fill_placeholders),
            (std::vector<std::string>{"target_language", "placeholder_text", "target_text"}));
  EXPECT_EQ(template_slots(TemplateId::fill_ratio),
            (std::vector<std::string>{"target_language", "placeholder_text", "target_text"}));
  EXPECT_EQ(template_slots(TemplateId::judge_pairwise),
            (std::vector<std::string>{"second_language", "sentence_one", "sentence_two"}));
  EXPECT_EQ(template_slots(TemplateId::mitigate_xnli), std::vector<std::string>{"language"});
}

TEST(Prompts, RenderSubstitutesEverySlot) {
  const auto out = render(TemplateId::fill_placeholders, {{"target_language", "French"},
                                                          {"placeholder_text", "The ####### is red."},
                                                          {"target_text", "La maison est rouge."}});
  auto expect = reference("fill_placeholders");
  expect = replace_all(expect, "{target_language}", "French");
  expect = replace_all(expect, "{placeholder_text}", "The ####### is red.");
  expect = replace_all(expect, "{target_text}", "La maison est rouge.");
  EXPECT_EQ(out, expect);
  EXPECT_EQ(out.find('{'), std::string::npos);
}

TEST(Prompts, ValuesAreNotRescanned) {
  const auto out = render(TemplateId::identify_nouns, {{"text", "a {text} b"}});
  EXPECT_NE(out.find("[English text]\na {text} b"), std::string::npos);
}

TEST(Prompts, MissingSlotNamed) {
  try {
    render(TemplateId::judge_pairwise, {{"second_language", "German"}, {"sentence_one", "x"}});
    FAIL();
  } catch (const ValidationError& e) {
    EXPECT_NE(std::string(e.what()).find("sentence_two"), std::string::npos);
  }
}

TEST(Prompts, LiteralLines) {
  const std::string judge(template_body(TemplateId::judge_pairwise));
  EXPECT_NE(judge.find("\nSentences:\nA: {sentence_one}\nB: {sentence_two}\n\nOutput:"), std::string::npos);
  const std::string step1(template_body(TemplateId::identify_nouns));
  EXPECT_NE(step1.find("with \"#######\"."), std::string::npos);
}

TEST(IftTemplates, BodiesMatchReference) {
  for (int i = 1; i <= kIftTemplateCount; ++i) {
    EXPECT_EQ(ift_template(i), reference("ift_" + std::to_string(i))) << i;
  }
  EXPECT_THROW(ift_template(0), ValidationError);
  EXPECT_THROW(ift_template(6), ValidationError);
}

TEST(IftTemplates, Render) {
  const auto out = render_ift_instruction(3, Language::de, "The house is red.", "Das Haus ist rot.");
  auto expect = reference("ift_3");
  expect = replace_all(expect, "<LANGUAGE>", "German");
  expect = replace_all(expect, "<ENGLISH_SENTENCE>", "The house is red.");
  expect = replace_all(expect, "<TRANSLATION_SENTENCE>", "Das Haus ist rot.");
  EXPECT_EQ(out, expect);
}
