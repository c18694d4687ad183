#pragma once

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cswkit {

enum class TemplateId {
  identify_nouns,
  fill_placeholders,
  fill_ratio,
  judge_pairwise,
  mitigate_belebele,
  mitigate_mmlu,
  mitigate_xnli,
};

std::string_view to_string(TemplateId id) noexcept;

/// Raw template text; slots are written `{name}`.
std::string_view template_body(TemplateId id) noexcept;

/// Slot names in order of first appearance.
std::vector<std::string> template_slots(TemplateId id);

/// Substitutes every slot in one pass (substituted values are not rescanned).
/// Throws ValidationError naming the first missing slot.
std::string render(TemplateId id, const std::map<std::string, std::string>& slots);

}  // namespace cswkit
