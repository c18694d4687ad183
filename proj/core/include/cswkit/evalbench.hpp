#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cswkit/corpus.hpp"
#include "cswkit/generator.hpp"
#include "cswkit/llm_gateway.hpp"
#include "cswkit/switchgen.hpp"

namespace cswkit {

/// Fields that are code-switched for each benchmark; options stay monolingual.
std::span<const std::string_view> switched_fields(BenchmarkId id) noexcept;

/// One parallel pair per switched field, id "<item_id>:<field>", built from
/// the item's field and its translations of that field.
std::vector<ParallelPair> field_pairs(const BenchmarkItem& item, Language matrix_lang);

struct SwitchedItem {
  BenchmarkItem original;
  BenchmarkItem switched;
};

struct SkipRecord {
  std::string item_id;
  std::string reason;
};

struct CswBenchmark {
  BenchmarkId benchmark_id = BenchmarkId::mmlu;
  Language matrix_lang = Language::en;
  std::vector<Language> embedded_langs;
  Method method = Method::noun_token;
  std::vector<SwitchedItem> items;
  std::vector<SkipRecord> skipped;

  std::vector<BenchmarkItem> originals() const;
  std::vector<BenchmarkItem> switched() const;
};

/// Switches the designated fields of every item. Items whose fields cannot
/// be generated (GenerationUnavailable, invalid LLM output) are skipped and
/// listed with the reason. All items must share one benchmark id.
CswBenchmark build_csw_benchmark(std::span<const BenchmarkItem> items, Language matrix_lang,
                                 std::vector<Language> embedded_langs, Method method,
                                 const CswGenerator& generator, int concurrency = 1);

/// One JSON line per switched item: the item with switched fields plus
/// "original_fields", "matrix_lang", "embedded_langs" and "method".
void write_csw_benchmark(std::ostream& out, const CswBenchmark& bench);
CswBenchmark read_csw_benchmark(std::istream& in, const std::string& source_name);
CswBenchmark load_csw_benchmark(const std::filesystem::path& path);
std::string skip_report_json(std::span<const SkipRecord> skipped);

enum class AdapterKind { generate, score_choices, stub };

std::string_view to_string(AdapterKind kind) noexcept;
AdapterKind parse_adapter_kind(std::string_view name);

struct ModelRef {
  std::string name;
  AdapterKind kind = AdapterKind::stub;
};

class ModelAdapter {
 public:
  explicit ModelAdapter(ModelRef ref) : ref_(std::move(ref)) {}
  virtual ~ModelAdapter() = default;
  const ModelRef& ref() const noexcept { return ref_; }

 private:
  ModelRef ref_;
};

/// Free-text completion; the first standalone label in the reply is the
/// prediction.
class GenerateAdapter : public ModelAdapter {
 public:
  explicit GenerateAdapter(std::string name) : ModelAdapter({std::move(name), AdapterKind::generate}) {}
  virtual std::string generate(const std::string& prompt) = 0;
};

/// Scores each choice; the argmax wins, ties go to the earliest label.
class ScoreChoicesAdapter : public ModelAdapter {
 public:
  explicit ScoreChoicesAdapter(std::string name)
      : ModelAdapter({std::move(name), AdapterKind::score_choices}) {}
  virtual double score(const std::string& prompt, std::string_view label,
                       std::string_view choice) = 0;
};

enum class StubRule {
  always_gold,
  /// Correct iff every text field of the item is ASCII.
  ascii_only,
  first_label,
};

std::string_view to_string(StubRule rule) noexcept;
StubRule parse_stub_rule(std::string_view name);

class StubAdapter final : public ModelAdapter {
 public:
  StubAdapter(std::string name, StubRule rule)
      : ModelAdapter({std::move(name), AdapterKind::stub}), rule_(rule) {}
  StubRule rule() const noexcept { return rule_; }
  std::string predict(const BenchmarkItem& item) const;

 private:
  StubRule rule_;
};

/// Generate adapter backed by the LLM gateway's generator model.
class GatewayGenerateAdapter final : public GenerateAdapter {
 public:
  GatewayGenerateAdapter(LlmGateway& gateway, std::string model)
      : GenerateAdapter(model), gateway_(gateway), model_(std::move(model)) {}
  std::string generate(const std::string& prompt) override;

 private:
  LlmGateway& gateway_;
  std::string model_;
};

inline constexpr std::string_view kInvalidPrediction = "invalid";

struct EvalRecord {
  BenchmarkId benchmark_id = BenchmarkId::mmlu;
  std::string item_id;
  std::string predicted;
  std::string gold;
  bool correct = false;
};

/// First standalone label of the benchmark's label set, or nullopt.
std::optional<std::string> parse_prediction(std::string_view reply, BenchmarkId id);

struct EvalOptions {
  /// Prepends the mitigation instruction for this embedded language.
  std::optional<Language> mitigation;
  /// Extra generate calls when a reply has no label.
  int retries = 2;
  int concurrency = 1;
};

std::vector<EvalRecord> evaluate(ModelAdapter& model, std::span<const BenchmarkItem> items,
                                 const EvalOptions& options = {});

/// Throws ValidationError on an empty list.
double accuracy(std::span<const EvalRecord> records);

struct BenchmarkScore {
  std::size_t n = 0;
  double accuracy = 0.0;
};

/// Sum of n*acc over sum of n. Throws on an empty list or n == 0.
double weighted_accuracy(std::span<const BenchmarkScore> per_benchmark);

struct AccuracyReport {
  std::map<BenchmarkId, BenchmarkScore> per_benchmark;
  double weighted_accuracy = 0.0;
  /// Filled by attach_deltas: this report minus a baseline.
  std::map<BenchmarkId, double> deltas;
  std::optional<double> weighted_delta;
};

AccuracyReport make_report(std::span<const EvalRecord> records);

struct DeltaReport {
  std::map<BenchmarkId, double> per_benchmark;
  double weighted = 0.0;
};

/// csw minus baseline. Throws ValidationError listing ids present in only
/// one of the two reports.
DeltaReport accuracy_delta(const AccuracyReport& csw, const AccuracyReport& baseline);

void attach_deltas(AccuracyReport& csw, const AccuracyReport& baseline);

struct RunMetadata {
  std::string model;
  std::string method;
  Language matrix_lang = Language::en;
  std::vector<Language> embedded_langs;
  std::uint64_t seed = 0;
  bool mitigation = false;
};

std::string to_json(const AccuracyReport& report);
std::string eval_report_json(const AccuracyReport& baseline, const AccuracyReport& csw,
                             const RunMetadata& meta);
std::string to_jsonl(const EvalRecord& record);

}  // namespace cswkit
