#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cswkit/language.hpp"
#include "cswkit/llm_gateway.hpp"

namespace cswkit {

enum class Outcome { A, B, tie };

std::string_view to_string(Outcome outcome) noexcept;

struct JudgedPair {
  std::string pair_id;
  Outcome outcome = Outcome::tie;
};

struct PreferenceReport {
  std::string config_a_name;
  std::string config_b_name;
  Language embedded_lang = Language::en;
  std::size_t n_total = 0;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  std::size_t n_tie = 0;
  /// Percentages over decided pairs; empty when every pair tied.
  std::optional<double> rate_a;
  std::optional<double> rate_b;

  bool rates_undefined() const noexcept { return !rate_a.has_value(); }
};

struct ComparisonNames {
  std::string config_a = "A";
  std::string config_b = "B";
};

/// Throws ValidationError on an empty list.
PreferenceReport aggregate_verdicts(std::span<const JudgedPair> verdicts, Language embedded_lang,
                                    const ComparisonNames& names = {});

/// A preference only when both presentation orders agree; otherwise a tie.
Outcome combine_flipped(Verdict original_order, Verdict flipped_order);

struct ComparisonPair {
  std::string pair_id;
  std::string sentence_a;
  std::string sentence_b;
};

/// Judges the first `sample_size` pairs in both orders and aggregates.
/// Gateway errors are rethrown as Error naming the pair. Per-pair outcomes
/// are written to `details` when given.
PreferenceReport run_comparison(std::span<const ComparisonPair> pairs, Language embedded_lang,
                                LlmGateway& gateway, std::size_t sample_size,
                                const ComparisonNames& names = {},
                                std::vector<JudgedPair>* details = nullptr);

std::string to_json(const PreferenceReport& report, std::string_view config_hash);

}  // namespace cswkit
