#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cswkit/language.hpp"

namespace cswkit {

/// A matrix-language sentence with its embedded-language translations.
struct ParallelPair {
  std::string id;
  Language matrix_lang = Language::en;
  std::string matrix_text;
  std::map<Language, std::string> translations;

  /// Throws ValidationError if the matrix language also appears among the
  /// translations or any text is empty.
  void validate() const;

  /// nullptr when there is no translation for `lang`.
  const std::string* translation(Language lang) const;

  friend bool operator==(const ParallelPair&, const ParallelPair&) = default;
};

/// Reads parallel-corpus JSONL. Blank lines are skipped; line numbers in
/// errors are 1-based. Throws ParseError on malformed lines, schema
/// violations and duplicate ids.
std::vector<ParallelPair> parse_parallel_corpus(std::istream& in,
                                                const std::string& source_name);
std::vector<ParallelPair> load_parallel_corpus(const std::filesystem::path& path);

std::string to_jsonl(const ParallelPair& pair);

enum class BenchmarkId { belebele, mmlu, xnli };

std::string_view to_string(BenchmarkId id) noexcept;
BenchmarkId parse_benchmark_id(std::string_view name);

/// A task instance. `fields` holds the text fields by name:
///   belebele  passage, question, option_a..option_d   gold A-D
///   mmlu      question, option_a..option_d            gold A-D
///   xnli      premise, hypothesis                     gold 0-2
/// `translations` optionally carries the same fields in other languages and
/// is what the code-switching generators draw replacements from.
struct BenchmarkItem {
  BenchmarkId benchmark_id = BenchmarkId::mmlu;
  std::string item_id;
  std::map<std::string, std::string> fields;
  std::string gold;
  std::map<Language, std::map<std::string, std::string>> translations;

  void validate() const;
  const std::string& field(const std::string& name) const;

  friend bool operator==(const BenchmarkItem&, const BenchmarkItem&) = default;
};

std::span<const std::string_view> required_fields(BenchmarkId id) noexcept;
std::span<const std::string_view> option_fields(BenchmarkId id) noexcept;
/// Valid gold/prediction labels in order: A-D, or 0-2 for xnli.
std::span<const std::string_view> label_set(BenchmarkId id) noexcept;

/// Reads benchmark JSONL. Each line's benchmark_id must equal `id`.
std::vector<BenchmarkItem> parse_benchmark(std::istream& in,
                                           const std::string& source_name,
                                           BenchmarkId id);
std::vector<BenchmarkItem> load_benchmark(const std::filesystem::path& path,
                                          BenchmarkId id);

std::string to_jsonl(const BenchmarkItem& item);

/// Formats an item as a zero-shot prompt ending in "Answer:".
std::string format_item(const BenchmarkItem& item);

}  // namespace cswkit
