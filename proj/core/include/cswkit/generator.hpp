#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cswkit/align.hpp"
#include "cswkit/corpus.hpp"
#include "cswkit/errors.hpp"
#include "cswkit/llm_gateway.hpp"
#include "cswkit/switchgen.hpp"
#include "cswkit/tagger.hpp"

namespace cswkit {

/// Raised when a pair lacks what a generator needs (translation, alignment,
/// tags). Callers skip the pair and record the reason.
class GenerationUnavailable : public Error {
 public:
  using Error::Error;
};

/// Produces one code-switched instance for a pair and a list of embedded
/// languages. noun_token and ratio_token take exactly one language, extreme
/// at least two. Implementations must be safe to call concurrently.
class CswGenerator {
 public:
  virtual ~CswGenerator() = default;
  virtual CswInstance generate(const ParallelPair& pair, std::span<const Language> langs) const = 0;
};

struct AlignmentGeneratorOptions {
  Method method = Method::noun_token;
  double ratio = 0.2;
  std::uint64_t seed = 0;
  NounOptions nouns;
  AlignOptions align;
};

/// Deterministic generation from alignments and POS tags. Alignments come
/// from an external file when one covers the pair, otherwise from a scorer
/// registered for the language. Tags come from external annotations when
/// present, otherwise from `tagger` (English matrix text only).
class AlignmentCswGenerator final : public CswGenerator {
 public:
  explicit AlignmentCswGenerator(AlignmentGeneratorOptions options,
                                 Stoplist stoplist = Stoplist::builtin());

  void set_scorer(Language lang, std::shared_ptr<const LexicalScorer> scorer);
  void add_alignment(AlignmentSet alignment);
  void add_alignments(std::vector<AlignmentSet> alignments);
  void set_tags(std::map<std::string, std::vector<Pos>> tags_by_pair);
  void set_tagger(const Tagger* tagger) { tagger_ = tagger; }

  const AlignmentGeneratorOptions& options() const noexcept { return options_; }

  CswInstance generate(const ParallelPair& pair, std::span<const Language> langs) const override;

  /// The alignment used for (pair, lang); throws GenerationUnavailable.
  AlignmentSet alignment_for(const ParallelPair& pair, Language lang,
                             std::span<const Token> matrix, std::span<const Token> embedded) const;

 private:
  std::vector<TaggedToken> tags_for(const ParallelPair& pair, std::span<const Token> matrix) const;

  AlignmentGeneratorOptions options_;
  Stoplist stoplist_;
  std::map<Language, std::shared_ptr<const LexicalScorer>> scorers_;
  std::map<std::pair<std::string, Language>, AlignmentSet> alignments_;
  std::map<std::string, std::vector<Pos>> tags_;
  const Tagger* tagger_ = &EnglishLexiconTagger::builtin();
};

/// Two-step LLM generation through the gateway (one embedded language).
class LlmCswGenerator final : public CswGenerator {
 public:
  LlmCswGenerator(LlmGateway& gateway, LlmCswOptions options)
      : gateway_(gateway), options_(options) {}

  CswInstance generate(const ParallelPair& pair, std::span<const Language> langs) const override;

 private:
  LlmGateway& gateway_;
  LlmCswOptions options_;
};

/// Tokenized (matrix, embedded) pairs for every pair translated into `lang`.
std::vector<TokenizedPair> tokenized_pairs(std::span<const ParallelPair> pairs, Language lang);

/// Trains an IBM Model 1 table per language on `pairs`.
std::map<Language, std::shared_ptr<const LexicalScorer>> train_scorers(
    std::span<const ParallelPair> pairs, std::span<const Language> langs, int iterations = 10);

}  // namespace cswkit
