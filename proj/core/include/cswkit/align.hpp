#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "cswkit/language.hpp"

namespace cswkit {

/// Token surfaces of one sentence pair, as fed to the aligners.
struct TokenizedPair {
  std::string id;
  std::vector<std::string> matrix;
  std::vector<std::string> embedded;
};

/// Lexical association score between a matrix word and an embedded word.
/// Words are compared after ASCII lower-casing.
class LexicalScorer {
 public:
  virtual ~LexicalScorer() = default;
  virtual double score(std::string_view matrix_word, std::string_view embedded_word) const = 0;
};

/// t(embedded | matrix), normalised over embedded words for every matrix word.
class TranslationTable final : public LexicalScorer {
 public:
  using Row = std::unordered_map<std::string, double>;

  double score(std::string_view matrix_word, std::string_view embedded_word) const override {
    return prob(matrix_word, embedded_word);
  }
  double prob(std::string_view matrix_word, std::string_view embedded_word) const;

  /// nullptr when the word never appeared on the matrix side.
  const Row* row(std::string_view matrix_word) const;
  const std::unordered_map<std::string, Row>& rows() const noexcept { return rows_; }
  std::unordered_map<std::string, Row>& mutable_rows() noexcept { return rows_; }

 private:
  std::unordered_map<std::string, Row> rows_;
};

struct Ibm1Model {
  TranslationTable table;
  /// Corpus log-likelihood before training (index 0) and after each EM
  /// iteration (index k).
  std::vector<double> log_likelihood;
};

/// IBM Model 1 trained by EM from a uniform start. No NULL word; each
/// embedded token aligns to exactly one matrix token.
///
/// Throws ValidationError for an empty corpus, `iterations < 1`, or a pair
/// with an empty side (the message names the pair).
Ibm1Model train_ibm1(std::span<const TokenizedPair> corpus, int iterations);

/// Corpus log-likelihood sum_s sum_j log((1/|m_s|) sum_i t(e_j | m_i)).
double ibm1_log_likelihood(std::span<const TokenizedPair> corpus, const TranslationTable& table);

/// Sentence-level Dice coefficients 2*cooc(x,y) / (count(x) + count(y)),
/// where counts are numbers of sentences containing the word.
class DiceTable final : public LexicalScorer {
 public:
  double score(std::string_view matrix_word, std::string_view embedded_word) const override;
  std::size_t size() const noexcept { return scores_.size(); }

 private:
  friend DiceTable dice_scores(std::span<const TokenizedPair> corpus);
  std::map<std::pair<std::string, std::string>, double, std::less<>> scores_;
};

/// Throws ValidationError on an empty corpus.
DiceTable dice_scores(std::span<const TokenizedPair> corpus);

struct AlignmentLink {
  std::size_t matrix_index = 0;
  std::size_t embedded_index = 0;
  double score = 1.0;

  friend bool operator==(const AlignmentLink&, const AlignmentLink&) = default;
};

struct AlignmentSet {
  std::string pair_id;
  Language embedded_lang = Language::en;
  /// Sorted by (matrix_index, embedded_index); no duplicate index pairs.
  std::vector<AlignmentLink> links;

  /// Embedded indices linked to `matrix_index`, ascending.
  std::vector<std::size_t> targets_of(std::size_t matrix_index) const;
  /// Throws ValidationError naming the pair when an index is out of range.
  void validate(std::size_t matrix_tokens, std::size_t embedded_tokens) const;

  friend bool operator==(const AlignmentSet&, const AlignmentSet&) = default;
};

struct AlignOptions {
  /// A link is kept only when its score is strictly above this.
  double threshold = 0.3;
};

/// Links each matrix token to its best-scoring embedded token, ties to the
/// lowest embedded index; links at or below the threshold are dropped.
AlignmentSet align_pair(std::string pair_id, Language embedded_lang,
                        std::span<const std::string> matrix,
                        std::span<const std::string> embedded,
                        const LexicalScorer& scorer, const AlignOptions& options = {});

/// (matrix token count, embedded token count) keyed by (pair id, language).
using TokenCounts = std::map<std::pair<std::string, Language>, std::pair<std::size_t, std::size_t>>;

/// Reads Pharaoh-format alignment JSONL. When `counts` is given, each set
/// whose pair is listed is range-checked against it.
std::vector<AlignmentSet> parse_external_alignments(std::istream& in,
                                                    const std::string& source_name,
                                                    const TokenCounts* counts = nullptr);
std::vector<AlignmentSet> load_external_alignments(const std::filesystem::path& path,
                                                   const TokenCounts* counts = nullptr);

/// Parses "0-0 1-2 ..." into links with score 1, sorted and de-duplicated.
std::vector<AlignmentLink> parse_pharaoh(std::string_view links);
std::string to_pharaoh(std::span<const AlignmentLink> links);
std::string to_jsonl(const AlignmentSet& set);

}  // namespace cswkit
