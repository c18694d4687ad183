#include "cswkit/evalbench.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <limits>
#include <set>

#include "cswkit/parallel.hpp"
#include "jsonl.hpp"
#include "utf8.hpp"

namespace cswkit {

using detail::json;
using ojson = nlohmann::ordered_json;

namespace {

constexpr std::array<std::string_view, 2> kBelebeleSwitched{"passage", "question"};
constexpr std::array<std::string_view, 1> kMmluSwitched{"question"};
constexpr std::array<std::string_view, 2> kXnliSwitched{"premise", "hypothesis"};
constexpr std::array<std::string_view, 3> kNliChoiceNames{"entailment", "neutral", "contradiction"};

std::vector<std::string> language_codes(std::span<const Language> langs) {
  std::vector<std::string> out;
  for (Language l : langs) out.emplace_back(code_of(l));
  return out;
}

}  // namespace

std::span<const std::string_view> switched_fields(BenchmarkId id) noexcept {
  switch (id) {
    case BenchmarkId::belebele: return kBelebeleSwitched;
    case BenchmarkId::mmlu: return kMmluSwitched;
    case BenchmarkId::xnli: return kXnliSwitched;
  }
  return {};
}

std::vector<ParallelPair> field_pairs(const BenchmarkItem& item, Language matrix_lang) {
  std::vector<ParallelPair> out;
  for (std::string_view f : switched_fields(item.benchmark_id)) {
    const std::string name(f);
    ParallelPair pair;
    pair.id = item.item_id + ":" + name;
    pair.matrix_lang = matrix_lang;
    pair.matrix_text = item.field(name);
    for (const auto& [lang, fields] : item.translations) {
      if (lang == matrix_lang) continue;
      if (auto it = fields.find(name); it != fields.end() && !it->second.empty()) {
        pair.translations.emplace(lang, it->second);
      }
    }
    out.push_back(std::move(pair));
  }
  return out;
}

std::vector<BenchmarkItem> CswBenchmark::originals() const {
  std::vector<BenchmarkItem> out;
  out.reserve(items.size());
  for (const auto& i : items) out.push_back(i.original);
  return out;
}

std::vector<BenchmarkItem> CswBenchmark::switched() const {
  std::vector<BenchmarkItem> out;
  out.reserve(items.size());
  for (const auto& i : items) out.push_back(i.switched);
  return out;
}

CswBenchmark build_csw_benchmark(std::span<const BenchmarkItem> items, Language matrix_lang,
                                 std::vector<Language> embedded_langs, Method method,
                                 const CswGenerator& generator, int concurrency) {
  if (items.empty()) throw ValidationError("build_csw_benchmark: no items");
  if (method == Method::extreme ? embedded_langs.size() < 2 : embedded_langs.size() != 1) {
    throw ValidationError(std::string(to_string(method)) + ": wrong number of embedded languages (" +
                          std::to_string(embedded_langs.size()) + ")");
  }
  CswBenchmark bench;
  bench.benchmark_id = items.front().benchmark_id;
  bench.matrix_lang = matrix_lang;
  bench.embedded_langs = embedded_langs;
  bench.method = method;
  for (const auto& item : items) {
    if (item.benchmark_id != bench.benchmark_id) {
      throw ValidationError("build_csw_benchmark: mixed benchmark ids");
    }
  }

  struct Outcome {
    std::optional<SwitchedItem> item;
    std::string reason;
  };
  const auto outcomes = parallel_map(items.size(), concurrency, [&](std::size_t i) {
    const BenchmarkItem& original = items[i];
    Outcome o;
    try {
      BenchmarkItem switched = original;
      for (const auto& pair : field_pairs(original, matrix_lang)) {
        const auto field = pair.id.substr(original.item_id.size() + 1);
        switched.fields[field] = generator.generate(pair, embedded_langs).csw_text;
      }
      o.item = SwitchedItem{original, std::move(switched)};
    } catch (const Error& e) {
      o.reason = e.what();
    }
    return o;
  });
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].item) {
      bench.items.push_back(*outcomes[i].item);
    } else {
      bench.skipped.push_back({items[i].item_id, outcomes[i].reason});
    }
  }
  return bench;
}

void write_csw_benchmark(std::ostream& out, const CswBenchmark& bench) {
  for (const auto& it : bench.items) {
    json obj = detail::benchmark_item_to_json(it.switched);
    obj["original_fields"] = it.original.fields;
    obj["matrix_lang"] = code_of(bench.matrix_lang);
    obj["embedded_langs"] = language_codes(bench.embedded_langs);
    obj["method"] = to_string(bench.method);
    out << detail::dump_line(obj) << '\n';
  }
}

CswBenchmark read_csw_benchmark(std::istream& in, const std::string& source_name) {
  CswBenchmark bench;
  bool first = true;
  detail::for_each_jsonl(in, source_name, [&](const json& obj, std::size_t) {
    SwitchedItem entry;
    entry.switched = detail::benchmark_item_from_json(obj);
    entry.original = entry.switched;
    auto orig = obj.find("original_fields");
    if (orig == obj.end() || !orig->is_object()) {
      throw ValidationError("missing object field 'original_fields'");
    }
    entry.original.fields = orig->get<std::map<std::string, std::string>>();
    entry.original.validate();
    const Language matrix = parse_language(detail::require_string(obj, "matrix_lang"));
    const Method method = parse_method(detail::require_string(obj, "method"));
    std::vector<Language> langs;
    for (const auto& code : obj.at("embedded_langs")) langs.push_back(parse_language(code.get<std::string>()));
    if (first) {
      bench.benchmark_id = entry.switched.benchmark_id;
      bench.matrix_lang = matrix;
      bench.method = method;
      bench.embedded_langs = langs;
      first = false;
    } else if (bench.benchmark_id != entry.switched.benchmark_id || bench.matrix_lang != matrix ||
               bench.method != method || bench.embedded_langs != langs) {
      throw ValidationError("line metadata differs from the first line");
    }
    bench.items.push_back(std::move(entry));
  });
  return bench;
}

CswBenchmark load_csw_benchmark(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  return read_csw_benchmark(in, path.string());
}

std::string skip_report_json(std::span<const SkipRecord> skipped) {
  ojson j;
  j["count"] = skipped.size();
  j["skipped"] = ojson::array();
  for (const auto& s : skipped) j["skipped"].push_back({{"item_id", s.item_id}, {"reason", s.reason}});
  return j.dump(2);
}

std::string_view to_string(AdapterKind kind) noexcept {
  switch (kind) {
    case AdapterKind::generate: return "generate";
    case AdapterKind::score_choices: return "score_choices";
    case AdapterKind::stub: return "stub";
  }
  return "stub";
}

AdapterKind parse_adapter_kind(std::string_view name) {
  if (name == "generate") return AdapterKind::generate;
  if (name == "score_choices") return AdapterKind::score_choices;
  if (name == "stub") return AdapterKind::stub;
  throw ValidationError("unknown adapter kind '" + std::string(name) + "'");
}

std::string_view to_string(StubRule rule) noexcept {
  switch (rule) {
    case StubRule::always_gold: return "always_gold";
    case StubRule::ascii_only: return "ascii_only";
    case StubRule::first_label: return "first_label";
  }
  return "always_gold";
}

StubRule parse_stub_rule(std::string_view name) {
  if (name == "always_gold") return StubRule::always_gold;
  if (name == "ascii_only") return StubRule::ascii_only;
  if (name == "first_label") return StubRule::first_label;
  throw ValidationError("unknown stub rule '" + std::string(name) + "'");
}

std::string StubAdapter::predict(const BenchmarkItem& item) const {
  const auto labels = label_set(item.benchmark_id);
  switch (rule_) {
    case StubRule::always_gold: return item.gold;
    case StubRule::first_label: return std::string(labels.front());
    case StubRule::ascii_only: {
      const bool ascii = std::all_of(item.fields.begin(), item.fields.end(),
                                     [](const auto& kv) { return utf8::is_ascii(kv.second); });
      if (ascii) return item.gold;
      for (auto l : labels) {
        if (l != item.gold) return std::string(l);
      }
      return std::string(kInvalidPrediction);
    }
  }
  return std::string(kInvalidPrediction);
}

std::string GatewayGenerateAdapter::generate(const std::string& prompt) {
  return gateway_.send(model_, prompt, "evaluate").text;
}

std::optional<std::string> parse_prediction(std::string_view reply, BenchmarkId id) {
  const auto labels = label_set(id);
  auto is_word = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
  };
  for (std::size_t i = 0; i < reply.size(); ++i) {
    if (is_word(reply[i]) && (i == 0 || !is_word(reply[i - 1]))) {
      std::size_t j = i;
      while (j < reply.size() && is_word(reply[j])) ++j;
      const auto word = reply.substr(i, j - i);
      for (auto l : labels) {
        if (word == l) return std::string(l);
      }
      i = j;
    }
  }
  return std::nullopt;
}

namespace {

std::string predict_generate(GenerateAdapter& model, const BenchmarkItem& item,
                             const std::string& prompt, int retries) {
  for (int attempt = 0; attempt <= std::max(0, retries); ++attempt) {
    if (auto p = parse_prediction(model.generate(prompt), item.benchmark_id)) return *p;
  }
  return std::string(kInvalidPrediction);
}

std::string predict_scores(ScoreChoicesAdapter& model, const BenchmarkItem& item,
                           const std::string& prompt) {
  const auto labels = label_set(item.benchmark_id);
  const auto options = option_fields(item.benchmark_id);
  double best = -std::numeric_limits<double>::infinity();
  std::string winner(kInvalidPrediction);
  for (std::size_t k = 0; k < labels.size(); ++k) {
    const std::string_view choice =
        options.empty() ? kNliChoiceNames[k] : std::string_view(item.field(std::string(options[k])));
    const double s = model.score(prompt, labels[k], choice);
    if (s > best) {
      best = s;
      winner = std::string(labels[k]);
    }
  }
  return winner;
}

}  // namespace

std::vector<EvalRecord> evaluate(ModelAdapter& model, std::span<const BenchmarkItem> items,
                                 const EvalOptions& options) {
  if (items.empty()) throw ValidationError("evaluate: no items");
  auto* generate = dynamic_cast<GenerateAdapter*>(&model);
  auto* score = dynamic_cast<ScoreChoicesAdapter*>(&model);
  auto* stub = dynamic_cast<StubAdapter*>(&model);
  if (!generate && !score && !stub) throw ValidationError("evaluate: unsupported adapter");
  return parallel_map(items.size(), options.concurrency, [&](std::size_t i) {
    const BenchmarkItem& item = items[i];
    EvalRecord r{item.benchmark_id, item.item_id, {}, item.gold, false};
    if (stub) {
      r.predicted = stub->predict(item);
    } else {
      const std::string prompt =
          options.mitigation ? prepend_mitigation(item, *options.mitigation) : format_item(item);
      try {
        r.predicted = generate ? predict_generate(*generate, item, prompt, options.retries)
                               : predict_scores(*score, item, prompt);
      } catch (const InvalidOutputError&) {
        r.predicted = std::string(kInvalidPrediction);
      }
    }
    r.correct = r.predicted == r.gold;
    return r;
  });
}

double accuracy(std::span<const EvalRecord> records) {
  if (records.empty()) throw ValidationError("accuracy: no records");
  const auto hits = std::count_if(records.begin(), records.end(), [](const auto& r) { return r.correct; });
  return static_cast<double>(hits) / static_cast<double>(records.size());
}

double weighted_accuracy(std::span<const BenchmarkScore> per_benchmark) {
  if (per_benchmark.empty()) throw ValidationError("weighted_accuracy: no benchmarks");
  double num = 0.0;
  double den = 0.0;
  for (const auto& b : per_benchmark) {
    if (b.n == 0) throw ValidationError("weighted_accuracy: benchmark with n = 0");
    num += static_cast<double>(b.n) * b.accuracy;
    den += static_cast<double>(b.n);
  }
  return num / den;
}

AccuracyReport make_report(std::span<const EvalRecord> records) {
  if (records.empty()) throw ValidationError("make_report: no records");
  std::map<BenchmarkId, std::vector<EvalRecord>> groups;
  for (const auto& r : records) groups[r.benchmark_id].push_back(r);
  AccuracyReport report;
  std::vector<BenchmarkScore> scores;
  for (const auto& [id, rs] : groups) {
    BenchmarkScore s{rs.size(), accuracy(rs)};
    report.per_benchmark[id] = s;
    scores.push_back(s);
  }
  report.weighted_accuracy = weighted_accuracy(scores);
  return report;
}

DeltaReport accuracy_delta(const AccuracyReport& csw, const AccuracyReport& baseline) {
  std::vector<std::string> only_csw, only_base;
  for (const auto& [id, _] : csw.per_benchmark) {
    if (!baseline.per_benchmark.contains(id)) only_csw.emplace_back(to_string(id));
  }
  for (const auto& [id, _] : baseline.per_benchmark) {
    if (!csw.per_benchmark.contains(id)) only_base.emplace_back(to_string(id));
  }
  if (!only_csw.empty() || !only_base.empty()) {
    std::string msg = "accuracy_delta: benchmark ids differ;";
    auto list = [&](const char* what, const std::vector<std::string>& ids) {
      if (ids.empty()) return;
      msg += std::string(" missing from ") + what + ":";
      for (const auto& id : ids) msg += " " + id;
    };
    list("baseline", only_csw);
    list("csw report", only_base);
    throw ValidationError(msg);
  }
  DeltaReport d;
  for (const auto& [id, s] : csw.per_benchmark) {
    d.per_benchmark[id] = s.accuracy - baseline.per_benchmark.at(id).accuracy;
  }
  d.weighted = csw.weighted_accuracy - baseline.weighted_accuracy;
  return d;
}

void attach_deltas(AccuracyReport& csw, const AccuracyReport& baseline) {
  const auto d = accuracy_delta(csw, baseline);
  csw.deltas = d.per_benchmark;
  csw.weighted_delta = d.weighted;
}

namespace {

ojson report_object(const AccuracyReport& report) {
  ojson j;
  j["per_benchmark"] = ojson::object();
  for (const auto& [id, s] : report.per_benchmark) {
    j["per_benchmark"][std::string(to_string(id))] = {{"n", s.n}, {"accuracy", s.accuracy}};
  }
  j["weighted_accuracy"] = report.weighted_accuracy;
  j["deltas"] = ojson::object();
  for (const auto& [id, d] : report.deltas) j["deltas"][std::string(to_string(id))] = d;
  j["weighted_delta"] = report.weighted_delta ? ojson(*report.weighted_delta) : ojson(nullptr);
  return j;
}

}  // namespace

std::string to_json(const AccuracyReport& report) { return report_object(report).dump(2); }

std::string eval_report_json(const AccuracyReport& baseline, const AccuracyReport& csw,
                             const RunMetadata& meta) {
  ojson j;
  j["model"] = meta.model;
  j["method"] = meta.method;
  j["matrix_lang"] = code_of(meta.matrix_lang);
  j["embedded_langs"] = language_codes(meta.embedded_langs);
  j["seed"] = meta.seed;
  j["mitigation"] = meta.mitigation;
  j["baseline"] = report_object(baseline);
  j["csw"] = report_object(csw);
  return j.dump(2);
}

std::string to_jsonl(const EvalRecord& record) {
  ojson j;
  j["benchmark_id"] = to_string(record.benchmark_id);
  j["item_id"] = record.item_id;
  j["predicted"] = record.predicted;
  j["gold"] = record.gold;
  j["correct"] = record.correct;
  return j.dump();
}

}  // namespace cswkit
