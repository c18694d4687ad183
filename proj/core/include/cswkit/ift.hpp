#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cswkit/corpus.hpp"
#include "cswkit/generator.hpp"
#include "cswkit/language.hpp"

namespace cswkit {

inline constexpr int kIftTemplateCount = 5;

std::size_t whitespace_word_count(std::string_view text) noexcept;

/// Pairs whose matrix text has strictly more than `min_words` words.
std::vector<ParallelPair> filter_long(std::span<const ParallelPair> pairs, std::size_t min_words);

/// Template body 1..5 with <LANGUAGE>, <ENGLISH_SENTENCE> and
/// <TRANSLATION_SENTENCE> slots.
std::string_view ift_template(int template_id);
std::string_view ift_template_style(int template_id);

std::string render_ift_instruction(int template_id, Language embedded_lang,
                                   std::string_view english, std::string_view translation);

struct IftExample {
  std::string pair_id;
  int template_id = 1;
  std::string instruction;
  std::string response;
  Language matrix_lang = Language::en;
  Language embedded_lang = Language::en;
};

struct IftSkip {
  std::string pair_id;
  Language embedded_lang = Language::en;
  std::string reason;
};

struct IftDataset {
  std::vector<IftExample> examples;
  std::vector<IftSkip> skipped;
};

/// One example per (pair, language), sorted by (pair_id, language), each
/// drawing its template from a generator seeded with `seed`; the list is
/// then shuffled with the same generator. Pairs lacking a translation, or
/// for which generation fails, are skipped and recorded.
IftDataset build_ift_dataset(std::span<const ParallelPair> pairs, std::span<const Language> langs,
                             const CswGenerator& generator, std::uint64_t seed,
                             int concurrency = 1);

std::string to_jsonl(const IftExample& example);

/// Fine-tuning recipe written next to the dataset; not executed here.
std::string training_recipe_json();

}  // namespace cswkit
