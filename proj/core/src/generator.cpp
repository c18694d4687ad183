#include "cswkit/generator.hpp"

#include "cswkit/rng.hpp"
#include "cswkit/tokenizer.hpp"

namespace cswkit {

namespace {

const std::string& require_translation(const ParallelPair& pair, Language lang) {
  const std::string* text = pair.translation(lang);
  if (!text) {
    throw GenerationUnavailable("pair '" + pair.id + "': no " + std::string(code_of(lang)) +
                                " translation");
  }
  return *text;
}

void check_language_count(Method method, std::span<const Language> langs) {
  if (method == Method::extreme) {
    if (langs.size() < 2) throw ValidationError("extreme switching needs at least two languages");
  } else if (langs.size() != 1) {
    throw ValidationError(std::string(to_string(method)) + " takes exactly one embedded language");
  }
}

}  // namespace

AlignmentCswGenerator::AlignmentCswGenerator(AlignmentGeneratorOptions options, Stoplist stoplist)
    : options_(options), stoplist_(std::move(stoplist)) {
  if (options_.method == Method::ratio_token && !(options_.ratio > 0.0 && options_.ratio <= 1.0)) {
    throw ValidationError("ratio must be in (0, 1]");
  }
}

void AlignmentCswGenerator::set_scorer(Language lang, std::shared_ptr<const LexicalScorer> scorer) {
  scorers_[lang] = std::move(scorer);
}

void AlignmentCswGenerator::add_alignment(AlignmentSet alignment) {
  auto key = std::make_pair(alignment.pair_id, alignment.embedded_lang);
  alignments_.insert_or_assign(std::move(key), std::move(alignment));
}

void AlignmentCswGenerator::add_alignments(std::vector<AlignmentSet> alignments) {
  for (auto& a : alignments) add_alignment(std::move(a));
}

void AlignmentCswGenerator::set_tags(std::map<std::string, std::vector<Pos>> tags_by_pair) {
  tags_ = std::move(tags_by_pair);
}

AlignmentSet AlignmentCswGenerator::alignment_for(const ParallelPair& pair, Language lang,
                                                  std::span<const Token> matrix,
                                                  std::span<const Token> embedded) const {
  if (auto it = alignments_.find({pair.id, lang}); it != alignments_.end()) {
    it->second.validate(matrix.size(), embedded.size());
    return it->second;
  }
  if (auto it = scorers_.find(lang); it != scorers_.end() && it->second) {
    const auto m = surfaces(matrix);
    const auto e = surfaces(embedded);
    return align_pair(pair.id, lang, m, e, *it->second, options_.align);
  }
  throw GenerationUnavailable("pair '" + pair.id + "': no alignment for " +
                              std::string(code_of(lang)));
}

std::vector<TaggedToken> AlignmentCswGenerator::tags_for(const ParallelPair& pair,
                                                         std::span<const Token> matrix) const {
  if (auto it = tags_.find(pair.id); it != tags_.end()) {
    return attach_tags(pair.id, matrix, it->second);
  }
  if (!tagger_) throw GenerationUnavailable("pair '" + pair.id + "': no POS tags");
  try {
    return tagger_->tag(matrix, pair.matrix_lang);
  } catch (const UnsupportedLanguageError& e) {
    throw GenerationUnavailable("pair '" + pair.id + "': " + e.what());
  }
}

CswInstance AlignmentCswGenerator::generate(const ParallelPair& pair,
                                            std::span<const Language> langs) const {
  check_language_count(options_.method, langs);
  const auto matrix = tokenize(pair.matrix_text, pair.matrix_lang);

  std::vector<std::vector<Token>> embedded;
  std::vector<AlignmentSet> alignments;
  embedded.reserve(langs.size());
  alignments.reserve(langs.size());
  for (Language lang : langs) {
    embedded.push_back(tokenize(require_translation(pair, lang), lang));
    alignments.push_back(alignment_for(pair, lang, matrix, embedded.back()));
  }

  SwitchPlan plan;
  switch (options_.method) {
    case Method::noun_token:
      plan = select_noun_switch_points(pair.id, tags_for(pair, matrix), alignments[0], embedded[0],
                                       stoplist_, options_.nouns);
      break;
    case Method::ratio_token:
      plan = select_ratio_switch_points(
          pair.id, matrix, alignments[0], embedded[0], options_.ratio,
          derive_seed(options_.seed, pair.id + "/" + std::string(code_of(langs[0]))));
      break;
    case Method::extreme: {
      std::vector<EmbeddedSide> sides;
      for (std::size_t k = 0; k < langs.size(); ++k) {
        sides.push_back({langs[k], &alignments[k], embedded[k]});
      }
      plan = select_extreme_switch_points(pair.id, tags_for(pair, matrix), sides, stoplist_,
                                          options_.nouns);
      break;
    }
  }
  return apply_switch_plan(pair.matrix_text, matrix, plan);
}

CswInstance LlmCswGenerator::generate(const ParallelPair& pair,
                                      std::span<const Language> langs) const {
  check_language_count(options_.method, langs);
  require_translation(pair, langs[0]);
  return llm_generate_csw(pair, langs[0], gateway_, options_);
}

std::vector<TokenizedPair> tokenized_pairs(std::span<const ParallelPair> pairs, Language lang) {
  std::vector<TokenizedPair> out;
  for (const auto& pair : pairs) {
    const std::string* text = pair.translation(lang);
    if (!text) continue;
    out.push_back({pair.id, surfaces(tokenize(pair.matrix_text, pair.matrix_lang)),
                   surfaces(tokenize(*text, lang))});
  }
  return out;
}

std::map<Language, std::shared_ptr<const LexicalScorer>> train_scorers(
    std::span<const ParallelPair> pairs, std::span<const Language> langs, int iterations) {
  std::map<Language, std::shared_ptr<const LexicalScorer>> out;
  for (Language lang : langs) {
    const auto corpus = tokenized_pairs(pairs, lang);
    if (corpus.empty()) continue;
    auto model = train_ibm1(corpus, iterations);
    out[lang] = std::make_shared<TranslationTable>(std::move(model.table));
  }
  return out;
}

}  // namespace cswkit
