#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cswkit/language.hpp"
#include "cswkit/tokenizer.hpp"

namespace cswkit {

enum class Pos { NOUN, PROPN, VERB, ADJ, DET, PRON, ADP, PUNCT, NUM, OTHER };

std::string_view to_string(Pos pos) noexcept;
std::optional<Pos> parse_pos(std::string_view name) noexcept;

/// NOUN, plus PROPN when `include_propn`.
inline bool is_noun(Pos pos, bool include_propn = true) noexcept {
  return pos == Pos::NOUN || (include_propn && pos == Pos::PROPN);
}

struct TaggedToken {
  Token token;
  Pos pos = Pos::OTHER;

  friend bool operator==(const TaggedToken&, const TaggedToken&) = default;
};

class Tagger {
 public:
  virtual ~Tagger() = default;
  /// One tag per token, in order.
  virtual std::vector<TaggedToken> tag(std::span<const Token> tokens, Language lang) const = 0;
};

/// Rule-based English tagger: a word -> POS lexicon (closed classes, common
/// verbs and adjectives, frequent ambiguous words), light inflection
/// stripping, suffix rules, and capitalisation for proper nouns. Unknown
/// lower-case words default to NOUN. Other languages raise
/// UnsupportedLanguageError.
class EnglishLexiconTagger final : public Tagger {
 public:
  /// The compiled-in lexicon (core/data/en_lexicon.tsv).
  static const EnglishLexiconTagger& builtin();

  /// Lexicon lines are "word<TAB>POS"; a repeated word adds an alternative
  /// reading, the first line being the default. '#' starts a comment line.
  static EnglishLexiconTagger from_stream(std::istream& in, const std::string& source_name);
  static EnglishLexiconTagger from_file(const std::filesystem::path& path);

  std::vector<TaggedToken> tag(std::span<const Token> tokens, Language lang) const override;

  std::size_t lexicon_size() const noexcept { return lexicon_.size(); }

 private:
  EnglishLexiconTagger() = default;

  const std::vector<Pos>* lookup(const std::string& lower) const;
  std::optional<std::vector<Pos>> inflected_readings(const std::string& lower) const;

  std::unordered_map<std::string, std::vector<Pos>> lexicon_;
};

/// Tags with `tagger` (the built-in English tagger by default).
std::vector<TaggedToken> tag_tokens(std::span<const Token> tokens, Language lang,
                                    const Tagger& tagger = EnglishLexiconTagger::builtin());

/// Pairs externally supplied tags with tokens; throws ValidationError naming
/// the pair when the lengths differ.
std::vector<TaggedToken> attach_tags(const std::string& pair_id, std::span<const Token> tokens,
                                     std::span<const Pos> tags);

struct ExternalTags {
  std::map<std::string, std::vector<Pos>> by_pair;
  /// Tag strings outside the closed set, mapped to OTHER.
  std::size_t unknown_tag_count = 0;
};

/// Reads {"pair_id","pos":[...]} JSONL. `token_counts`, when given, maps pair
/// ids to token counts and each listed pair is length-checked.
ExternalTags parse_external_tags(std::istream& in, const std::string& source_name,
                                 const std::map<std::string, std::size_t>* token_counts = nullptr);
ExternalTags load_external_tags(const std::filesystem::path& path,
                                const std::map<std::string, std::size_t>* token_counts = nullptr);

}  // namespace cswkit
