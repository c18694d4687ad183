#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cswkit/align.hpp"
#include "cswkit/language.hpp"
#include "cswkit/tagger.hpp"
#include "cswkit/tokenizer.hpp"

namespace cswkit {

enum class Method { noun_token, ratio_token, extreme };
enum class GenerationMode { deterministic, llm_filled };

std::string_view to_string(Method method) noexcept;
Method parse_method(std::string_view name);
std::string_view to_string(GenerationMode mode) noexcept;
GenerationMode parse_generation_mode(std::string_view name);

/// The placeholder written at every switch point before LLM filling.
inline constexpr std::string_view kMask = "#######";

/// Non-overlapping occurrences of kMask.
std::size_t count_masks(std::string_view text) noexcept;

struct SwitchPoint {
  std::size_t matrix_index = 0;
  Language embedded_lang = Language::en;
  std::vector<std::string> replacement;

  friend bool operator==(const SwitchPoint&, const SwitchPoint&) = default;
};

struct SwitchPlan {
  std::string pair_id;
  Method method = Method::noun_token;
  /// Sorted by matrix_index, indices unique, replacements non-empty.
  std::vector<SwitchPoint> points;
  std::optional<std::uint64_t> seed;
  /// Extreme mode: even borrowing across languages was not achievable.
  bool evenness_waived = false;

  /// Throws ValidationError when the invariants above do not hold or an
  /// index is outside [0, matrix_tokens).
  void validate(std::size_t matrix_tokens) const;

  friend bool operator==(const SwitchPlan&, const SwitchPlan&) = default;
};

struct CswInstance {
  std::string pair_id;
  std::string original_text;
  std::string csw_text;
  SwitchPlan plan;
  GenerationMode mode = GenerationMode::deterministic;

  friend bool operator==(const CswInstance&, const CswInstance&) = default;
};

std::string to_jsonl(const CswInstance& instance);

/// Multiword expressions whose tokens never switch. Matching is on
/// lower-cased token sequences.
class Stoplist {
 public:
  Stoplist() = default;
  /// The compiled-in list (core/data/default_stoplist.txt).
  static const Stoplist& builtin();
  /// One expression per line; '#' comment lines and blank lines ignored.
  static Stoplist from_stream(std::istream& in);
  static Stoplist from_file(const std::filesystem::path& path);

  void add(std::string_view expression);
  void merge(const Stoplist& other);
  std::size_t size() const noexcept { return expressions_.size(); }

  /// covered[i] is true when token i lies inside a listed expression.
  std::vector<bool> covered(std::span<const Token> tokens) const;

 private:
  std::vector<std::vector<std::string>> expressions_;
};

struct NounOptions {
  /// Count PROPN as a noun.
  bool include_propn = true;
};

/// A matrix token switches when it is a noun, is aligned, its aligned
/// embedded tokens form one contiguous span that no other matrix token links
/// into and that is not pure punctuation, and it lies outside every
/// stoplisted expression. Function words never switch, so the matrix frame
/// stays intact.
///
/// Throws ValidationError when tagged tokens and the alignment disagree on
/// sizes.
SwitchPlan select_noun_switch_points(const std::string& pair_id,
                                     std::span<const TaggedToken> matrix,
                                     const AlignmentSet& alignment,
                                     std::span<const Token> embedded, const Stoplist& stoplist,
                                     const NounOptions& options = {});

/// max(1, round(ratio * candidates)) for candidates >= 1, else 0.
std::size_t ratio_switch_count(double ratio, std::size_t candidates);

/// Draws ratio_switch_count(ratio, |candidates|) aligned, non-punctuation
/// matrix tokens without replacement. Throws ValidationError unless
/// 0 < ratio <= 1.
SwitchPlan select_ratio_switch_points(const std::string& pair_id,
                                      std::span<const Token> matrix,
                                      const AlignmentSet& alignment,
                                      std::span<const Token> embedded, double ratio,
                                      std::uint64_t seed);

/// One embedded language's resources for extreme switching.
struct EmbeddedSide {
  Language lang = Language::en;
  const AlignmentSet* alignment = nullptr;
  std::span<const Token> tokens;
};

/// Switches every noun eligible (per the noun rule) in at least one
/// language, assigning languages round-robin over ascending positions and
/// skipping a language where it is not eligible or where taking it would
/// make an even split unreachable. When no assignment has per-language counts
/// within 1 of each other, or there are fewer eligible positions than
/// languages, the plan sets evenness_waived. Throws ValidationError for
/// fewer than two languages.
SwitchPlan select_extreme_switch_points(const std::string& pair_id,
                                        std::span<const TaggedToken> matrix,
                                        std::span<const EmbeddedSide> sides,
                                        const Stoplist& stoplist,
                                        const NounOptions& options = {});

/// Replacement tokens as inserted text: concatenated for Han script, space
/// separated otherwise.
std::string join_replacement(std::span<const std::string> tokens, Language lang);

/// Replaces the planned tokens; all other bytes of `source` are kept.
/// Throws ValidationError for indices outside `matrix`.
CswInstance apply_switch_plan(std::string_view source, std::span<const Token> matrix,
                              const SwitchPlan& plan);

/// Writes kMask in place of every planned token.
std::string mask_placeholders(std::string_view source, std::span<const Token> matrix,
                              const SwitchPlan& plan);

}  // namespace cswkit
