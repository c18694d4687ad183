#include "cswkit/prompts.hpp"

#include <algorithm>

#include "cswkit/errors.hpp"

namespace cswkit {
namespace {

constexpr std::string_view kIdentifyNouns =
    R"(You are an expert linguist and code-switching analyst. Based on the Equivalence
Constraint Theory and the Matrix Language Frame model, identify nouns in the
input English sentence that would serve as appropriate code-switching points.

- Input variable: text (a single English sentence)
- Task: Find every noun (as a free content morpheme) that can be switched under
  the theories above.
- Transformation: Replace each identified noun in the sentence with "#######".
- Output: Return only the transformed sentence with nouns replaced by "#######".
- The substituted words blend seamlessly into the text, following natural
  bilingual speech patterns.
- Adjust the target language words as needed (e.g., inflection, gender,
  number) so that the text remains syntactically correct.
- Ensure that nouns in common expressions are not code-switched.
- Don't return any summary or introduction, just the processed text

[English text]
{text})";

constexpr std::string_view kFillPlaceholders =
    R"(You will be given a pair of parallel texts in English and {target_language}.

Your goal is to produce a code-switched version of the English text by replacing
each of the hashtag-sequences (#######) in the English text with their
{target_language} counterparts from the {target_language} text, ensuring that:
- The substituted words blend seamlessly into the text, following natural
  bilingual speech patterns.
- The text should be grounded with the principles of the Equivalence Constraint
  Theory and the Matrix Language Frame model.
- Adjust the target language words as needed (e.g., inflection, gender, number)
  so that the text remains syntactically correct.
- The original meaning and flow of the text are maintained.
- All the hashtag-sequences (#######) have to be replaced with text from the
  {target_language} text.
- Use only the words from the {target_language} text.
- Return only the code-switched text, without any additions or explanations.

[English text with placeholders]
{placeholder_text}

[{target_language} text]
{target_text}

[Code-switched English and {target_language}])";

constexpr std::string_view kFillRatio =
    R"(You will be given an English sentence with placeholders (#######) and its
parallel sentence in {target_language}.
Replace each placeholder with the corresponding segment from the
{target_language} text, ensuring:
- The inserted text matches the target-language phrasing (inflections, gender,
  number).
- The final sentence reads naturally as mixed English and {target_language}.
- Preserve the original sentence order.
Return only the filled sentence, no extra comments.

[English with placeholders]
{placeholder_text}

[{target_language} parallel text]
{target_text}

[Mixed code-switched result])";

constexpr std::string_view kJudgePairwise =
    R"(You have two code-switched sentences, A and B, each blending English (matrix language) with {second_language}. Follow these steps and then choose the better sentence (A or B):

1. Assess Fluency: check which sentence flows most naturally, like plausible bilingual speech.
2. Assess Depth of Mixing: check which sentence meaningfully integrates both languages rather than inserting isolated tokens.
3. Assess Switch Grammar: check which sentence has grammatically valid switch points under Equivalence Constraint Theory.
4. Assess Consistency: check which sentence uses English as its grammatical frame and embeds {second_language} elements appropriately under the Matrix Language Frame model.
5. Assess Overall Coherence: check which sentence remains clear and plausible as a whole despite the language mixing.

After evaluating all five criteria, return A or B with no further explanation.

Sentences:
A: {sentence_one}
B: {sentence_two}

Output:)";

constexpr std::string_view kMitigateBelebele =
    "You are an expert in understanding code-switched text. You will be given a passage and a "
    "question in code-switched English and {language}. You have to understand them and respond "
    "to the given question with best answer: A, B, C, or D.";

constexpr std::string_view kMitigateMmlu =
    "You are an expert in understanding code-switched text. You will be given a question in "
    "code-switched English and {language}. You have to understand it and respond to the given "
    "question with best answer: A, B, C, or D.";

constexpr std::string_view kMitigateXnli =
    "You are an expert in understanding code-switched text. You will be given two code-switched "
    "passages that correspond to a premise and a hypothesis in code-switched English and "
    "{language} text. You have to understand them and respond with the best answer: 0, 1, or 2.";

bool is_slot_char(char c) { return (c >= 'a' && c <= 'z') || c == '_'; }

// Slot at `pos` ('{' position): returns the name length, 0 if not a slot.
std::size_t slot_length(std::string_view body, std::size_t pos) {
  std::size_t end = pos + 1;
  while (end < body.size() && is_slot_char(body[end])) ++end;
  if (end == pos + 1 || end >= body.size() || body[end] != '}') return 0;
  return end - pos - 1;
}

}  // namespace

std::string_view to_string(TemplateId id) noexcept {
  switch (id) {
    case TemplateId::identify_nouns: return "identify_nouns";
    case TemplateId::fill_placeholders: return "fill_placeholders";
    case TemplateId::fill_ratio: return "fill_ratio";
    case TemplateId::judge_pairwise: return "judge_pairwise";
    case TemplateId::mitigate_belebele: return "mitigate_belebele";
    case TemplateId::mitigate_mmlu: return "mitigate_mmlu";
    case TemplateId::mitigate_xnli: return "mitigate_xnli";
  }
  return "?";
}

std::string_view template_body(TemplateId id) noexcept {
  switch (id) {
    case TemplateId::identify_nouns: return kIdentifyNouns;
    case TemplateId::fill_placeholders: return kFillPlaceholders;
    case TemplateId::fill_ratio: return kFillRatio;
    case TemplateId::judge_pairwise: return kJudgePairwise;
    case TemplateId::mitigate_belebele: return kMitigateBelebele;
    case TemplateId::mitigate_mmlu: return kMitigateMmlu;
    case TemplateId::mitigate_xnli: return kMitigateXnli;
  }
  return {};
}

std::vector<std::string> template_slots(TemplateId id) {
  const auto body = template_body(id);
  std::vector<std::string> slots;
  for (std::size_t pos = body.find('{'); pos != std::string_view::npos;
       pos = body.find('{', pos + 1)) {
    if (auto n = slot_length(body, pos)) {
      std::string name(body.substr(pos + 1, n));
      if (std::find(slots.begin(), slots.end(), name) == slots.end()) slots.push_back(name);
    }
  }
  return slots;
}

std::string render(TemplateId id, const std::map<std::string, std::string>& slots) {
  const auto body = template_body(id);
  std::string out;
  out.reserve(body.size() + 256);
  std::size_t cursor = 0;
  for (std::size_t pos = body.find('{'); pos != std::string_view::npos;
       pos = body.find('{', pos + 1)) {
    const auto n = slot_length(body, pos);
    if (!n) continue;
    const std::string name(body.substr(pos + 1, n));
    auto it = slots.find(name);
    if (it == slots.end()) {
      throw ValidationError("prompt " + std::string(to_string(id)) + ": missing slot '" + name + "'");
    }
    out.append(body.substr(cursor, pos - cursor));
    out.append(it->second);
    cursor = pos + n + 2;
    pos = cursor - 1;
  }
  out.append(body.substr(cursor));
  return out;
}

}  // namespace cswkit
