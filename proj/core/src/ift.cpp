#include "cswkit/ift.hpp"

#include <algorithm>
#include <array>

#include "cswkit/parallel.hpp"
#include "cswkit/rng.hpp"
#include "jsonl.hpp"

namespace cswkit {

namespace {

constexpr std::array<std::string_view, kIftTemplateCount> kTemplates{
    R"(Take this English sentence and infuse it with <LANGUAGE> code-switching:
English: "<ENGLISH_SENTENCE>"
<LANGUAGE>: "<TRANSLATION_SENTENCE>")",
    R"(Convert the following English line into a code-switched mix with <LANGUAGE>:
English: "<ENGLISH_SENTENCE>"
<LANGUAGE>: "<TRANSLATION_SENTENCE>")",
    R"(Blend English and <LANGUAGE> in the sentence below:
English text: "<ENGLISH_SENTENCE>"
<LANGUAGE> equivalent: "<TRANSLATION_SENTENCE>")",
    R"(Generate a code-switched rendition by swapping in <LANGUAGE>:
English original: "<ENGLISH_SENTENCE>"
<LANGUAGE> snippet: "<TRANSLATION_SENTENCE>")",
    R"(Switch parts of this English sentence into <LANGUAGE>:
English: "<ENGLISH_SENTENCE>"
<LANGUAGE>: "<TRANSLATION_SENTENCE>")",
};

constexpr std::array<std::string_view, kIftTemplateCount> kStyles{
    "infusion", "conversion", "blending", "rendition", "switching"};

void check_id(int template_id) {
  if (template_id < 1 || template_id > kIftTemplateCount) {
    throw ValidationError("IFT template id must be 1..5, got " + std::to_string(template_id));
  }
}

}  // namespace

std::size_t whitespace_word_count(std::string_view text) noexcept {
  std::size_t count = 0;
  bool in_word = false;
  for (char c : text) {
    const bool space = c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
    if (!space && !in_word) ++count;
    in_word = !space;
  }
  return count;
}

std::vector<ParallelPair> filter_long(std::span<const ParallelPair> pairs, std::size_t min_words) {
  if (min_words < 1) throw ValidationError("filter_long: min_words must be >= 1");
  std::vector<ParallelPair> out;
  for (const auto& p : pairs) {
    if (whitespace_word_count(p.matrix_text) > min_words) out.push_back(p);
  }
  return out;
}

std::string_view ift_template(int template_id) {
  check_id(template_id);
  return kTemplates[template_id - 1];
}

std::string_view ift_template_style(int template_id) {
  check_id(template_id);
  return kStyles[template_id - 1];
}

std::string render_ift_instruction(int template_id, Language embedded_lang,
                                   std::string_view english, std::string_view translation) {
  const std::string_view body = ift_template(template_id);
  const std::array<std::pair<std::string_view, std::string_view>, 3> slots{{
      {"<LANGUAGE>", display_name(embedded_lang)},
      {"<ENGLISH_SENTENCE>", english},
      {"<TRANSLATION_SENTENCE>", translation},
  }};
  // Single left-to-right pass so slot-like text inside the sentences is
  // never substituted again.
  std::string out;
  std::size_t i = 0;
  while (i < body.size()) {
    bool replaced = false;
    for (const auto& [marker, value] : slots) {
      if (body.compare(i, marker.size(), marker) == 0) {
        out += value;
        i += marker.size();
        replaced = true;
        break;
      }
    }
    if (!replaced) out.push_back(body[i++]);
  }
  return out;
}

IftDataset build_ift_dataset(std::span<const ParallelPair> pairs, std::span<const Language> langs,
                             const CswGenerator& generator, std::uint64_t seed, int concurrency) {
  for (Language l : langs) {
    if (l == Language::en) throw ValidationError("IFT embedded languages must not include en");
  }
  std::vector<std::pair<const ParallelPair*, Language>> jobs;
  for (const auto& p : pairs) {
    if (p.matrix_lang != Language::en) {
      throw ValidationError("pair '" + p.id + "': IFT needs English matrix text");
    }
    for (Language l : langs) jobs.emplace_back(&p, l);
  }
  std::sort(jobs.begin(), jobs.end(), [](const auto& a, const auto& b) {
    if (a.first->id != b.first->id) return a.first->id < b.first->id;
    return code_of(a.second) < code_of(b.second);
  });

  struct Result {
    std::optional<IftExample> example;
    std::string reason;
  };
  auto results = parallel_map(jobs.size(), concurrency, [&](std::size_t i) {
    const auto& [pair, lang] = jobs[i];
    Result r;
    const std::string* translation = pair->translation(lang);
    if (!translation) {
      r.reason = "no " + std::string(code_of(lang)) + " translation";
      return r;
    }
    try {
      const Language one[] = {lang};
      const CswInstance inst = generator.generate(*pair, one);
      r.example = IftExample{pair->id, 0, {}, inst.csw_text, pair->matrix_lang, lang};
    } catch (const Error& e) {
      r.reason = e.what();
    }
    return r;
  });

  IftDataset out;
  SeededRng rng(seed);
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (!results[i].example) {
      out.skipped.push_back({jobs[i].first->id, jobs[i].second, results[i].reason});
      continue;
    }
    IftExample ex = std::move(*results[i].example);
    ex.template_id = static_cast<int>(rng.below(kIftTemplateCount)) + 1;
    ex.instruction = render_ift_instruction(ex.template_id, ex.embedded_lang,
                                            jobs[i].first->matrix_text,
                                            *jobs[i].first->translation(ex.embedded_lang));
    out.examples.push_back(std::move(ex));
  }
  rng.shuffle(out.examples);
  return out;
}

std::string to_jsonl(const IftExample& example) {
  nlohmann::ordered_json j;
  j["template_id"] = example.template_id;
  j["instruction"] = example.instruction;
  j["response"] = example.response;
  j["matrix_lang"] = code_of(example.matrix_lang);
  j["embedded_lang"] = code_of(example.embedded_lang);
  j["pair_id"] = example.pair_id;
  return j.dump(-1, ' ', false, nlohmann::ordered_json::error_handler_t::replace);
}

std::string training_recipe_json() {
  nlohmann::ordered_json j;
  j["learning_rate"] = 2e-6;
  j["lr_schedule"] = "linear_decay";
  j["warmup_fraction"] = 0.05;
  j["precision"] = "bf16";
  j["sequence_packing"] = "dynamic";
  j["max_sequence_length"] = 4096;
  j["batch_size"] = 4;
  j["epochs"] = 1;
  j["full_finetune"] = true;
  return j.dump(2);
}

}  // namespace cswkit
