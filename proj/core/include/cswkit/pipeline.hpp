#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cswkit/corpus.hpp"
#include "cswkit/evalbench.hpp"
#include "cswkit/language.hpp"
#include "cswkit/switchgen.hpp"

namespace cswkit {

std::string_view library_version() noexcept;

struct PathsConfig {
  std::optional<std::filesystem::path> corpus;
  std::map<BenchmarkId, std::filesystem::path> benchmarks;
  /// External alignment JSONL; pairs it does not cover are aligned with
  /// IBM Model 1 trained on the available text.
  std::optional<std::filesystem::path> alignments;
  std::optional<std::filesystem::path> tags;
  std::optional<std::filesystem::path> stoplist;
  /// Judge input: JSONL {"pair_id","sentence_a","sentence_b"}.
  std::optional<std::filesystem::path> judge_pairs;
  std::filesystem::path output_dir = "out";
};

struct LlmConfig {
  /// http(s) URL of a chat-completion endpoint, or "stub:<reply>" for a
  /// client that always answers <reply>.
  std::string endpoint;
  std::string generator_model = "generator";
  std::string judge_model = "judge";
  int max_retries = 2;
  int concurrency = 4;
  std::optional<std::filesystem::path> audit_log;
};

struct ModelConfig {
  std::string name = "stub";
  AdapterKind adapter = AdapterKind::stub;
  StubRule stub_rule = StubRule::always_gold;
};

struct RunConfig {
  Language matrix_lang = Language::en;
  std::vector<Language> embedded_langs;
  Method method = Method::noun_token;
  GenerationMode mode = GenerationMode::deterministic;
  double ratio = 0.2;
  std::uint64_t seed = 0;
  bool include_propn = true;
  double align_threshold = 0.3;
  int ibm1_iterations = 10;
  bool mitigation = false;
  std::size_t ift_min_words = 70;
  std::size_t judge_sample_size = 300;
  std::string judge_config_a = "A";
  std::string judge_config_b = "B";
  PathsConfig paths;
  LlmConfig llm;
  ModelConfig model;

  /// Throws ConfigError naming the first offending field.
  void validate() const;
};

/// Parses and validates a JSON config. Unknown keys are rejected.
RunConfig parse_run_config(std::string_view json_text);
RunConfig load_run_config(const std::filesystem::path& path);

/// Canonical JSON (sorted keys, every field present); stable across runs.
std::string to_json(const RunConfig& config);
std::string config_hash(const RunConfig& config);

struct CommandResult {
  std::vector<std::filesystem::path> outputs;
  std::size_t skipped = 0;
  /// 0 on success, 3 when some inputs were skipped.
  int exit_code() const noexcept { return skipped == 0 ? 0 : 3; }
};

CommandResult cmd_align(const RunConfig& config);
CommandResult cmd_generate(const RunConfig& config);
CommandResult cmd_bench(const RunConfig& config);
CommandResult cmd_eval(const RunConfig& config);
CommandResult cmd_judge(const RunConfig& config);
CommandResult cmd_ift(const RunConfig& config);

/// Language-set tag used in output file names, e.g. "ar" or "ar-zh".
std::string language_tag(const std::vector<Language>& langs);

}  // namespace cswkit
