#include "cswkit/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <memory>
#include <set>
#include <sstream>
#include <thread>

#include "cswkit/align.hpp"
#include "cswkit/generator.hpp"
#include "cswkit/hashing.hpp"
#include "cswkit/ift.hpp"
#include "cswkit/judge_report.hpp"
#include "cswkit/llm_gateway.hpp"
#include "cswkit/parallel.hpp"
#include "cswkit/tagger.hpp"
#include "cswkit/tokenizer.hpp"
#include "jsonl.hpp"

#ifndef CSWKIT_VERSION
#define CSWKIT_VERSION "0.0.0"
#endif

namespace cswkit {

using detail::json;
namespace fs = std::filesystem;

std::string_view library_version() noexcept { return CSWKIT_VERSION; }

// --- config -----------------------------------------------------------------

namespace {

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed,
                    const std::string& prefix) {
  for (const auto& [key, _] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      throw ConfigError(prefix + key, "unknown key");
    }
  }
}

const json* member(const json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

std::string get_string(const json& v, const std::string& field) {
  if (!v.is_string()) throw ConfigError(field, "expected a string");
  return v.get<std::string>();
}

double get_number(const json& v, const std::string& field) {
  if (!v.is_number()) throw ConfigError(field, "expected a number");
  return v.get<double>();
}

long long get_int(const json& v, const std::string& field) {
  if (!v.is_number_integer()) throw ConfigError(field, "expected an integer");
  return v.get<long long>();
}

std::size_t get_count(const json& v, const std::string& field) {
  const long long n = get_int(v, field);
  if (n < 0) throw ConfigError(field, "must be >= 0");
  return static_cast<std::size_t>(n);
}

bool get_bool(const json& v, const std::string& field) {
  if (!v.is_boolean()) throw ConfigError(field, "expected true or false");
  return v.get<bool>();
}

template <class F>
auto as_config(const std::string& field, F&& parse) {
  try {
    return parse();
  } catch (const ValidationError& e) {
    throw ConfigError(field, e.what());
  }
}

}  // namespace

void RunConfig::validate() const {
  if (embedded_langs.empty()) throw ConfigError("embedded_langs", "at least one language required");
  std::set<Language> seen;
  for (Language l : embedded_langs) {
    if (l == matrix_lang) throw ConfigError("embedded_langs", "contains the matrix language");
    if (!seen.insert(l).second) throw ConfigError("embedded_langs", "duplicate language");
  }
  if (method == Method::extreme && embedded_langs.size() < 2) {
    throw ConfigError("embedded_langs", "extreme switching needs at least two languages");
  }
  if (!(ratio > 0.0 && ratio <= 1.0)) throw ConfigError("ratio", "must be in (0, 1]");
  if (mode == GenerationMode::llm_filled && method == Method::extreme) {
    throw ConfigError("mode", "llm_filled supports noun_token and ratio_token only");
  }
  if (!(align_threshold >= 0.0 && align_threshold < 1.0)) {
    throw ConfigError("align_threshold", "must be in [0, 1)");
  }
  if (ibm1_iterations < 1) throw ConfigError("ibm1_iterations", "must be >= 1");
  if (ift_min_words < 1) throw ConfigError("ift_min_words", "must be >= 1");
  if (judge_sample_size < 1) throw ConfigError("judge.sample_size", "must be >= 1");
  if (llm.max_retries < 0) throw ConfigError("llm.max_retries", "must be >= 0");
  if (llm.concurrency < 1) throw ConfigError("llm.concurrency", "must be >= 1");
  if (paths.output_dir.empty()) throw ConfigError("paths.output_dir", "must not be empty");
}

RunConfig parse_run_config(std::string_view json_text) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError("<root>", std::string("malformed JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("<root>", "expected a JSON object");
  reject_unknown(root,
                 {"matrix_lang", "embedded_langs", "method", "mode", "ratio", "seed",
                  "include_propn", "align_threshold", "ibm1_iterations", "mitigation",
                  "ift_min_words", "judge", "paths", "llm", "model"},
                 "");
  RunConfig c;
  if (auto v = member(root, "matrix_lang")) {
    c.matrix_lang = as_config("matrix_lang", [&] { return parse_language(get_string(*v, "matrix_lang")); });
  }
  if (auto v = member(root, "embedded_langs")) {
    if (!v->is_array()) throw ConfigError("embedded_langs", "expected an array of language codes");
    for (const auto& e : *v) {
      c.embedded_langs.push_back(
          as_config("embedded_langs", [&] { return parse_language(get_string(e, "embedded_langs")); }));
    }
  }
  if (auto v = member(root, "method")) {
    c.method = as_config("method", [&] { return parse_method(get_string(*v, "method")); });
  }
  if (auto v = member(root, "mode")) {
    c.mode = as_config("mode", [&] { return parse_generation_mode(get_string(*v, "mode")); });
  }
  if (auto v = member(root, "ratio")) c.ratio = get_number(*v, "ratio");
  if (auto v = member(root, "seed")) {
    if (!v->is_number_unsigned() && !(v->is_number_integer() && v->get<long long>() >= 0)) {
      throw ConfigError("seed", "expected a non-negative integer");
    }
    c.seed = v->get<std::uint64_t>();
  }
  if (auto v = member(root, "include_propn")) c.include_propn = get_bool(*v, "include_propn");
  if (auto v = member(root, "align_threshold")) c.align_threshold = get_number(*v, "align_threshold");
  if (auto v = member(root, "ibm1_iterations")) {
    c.ibm1_iterations = static_cast<int>(get_int(*v, "ibm1_iterations"));
  }
  if (auto v = member(root, "mitigation")) c.mitigation = get_bool(*v, "mitigation");
  if (auto v = member(root, "ift_min_words")) c.ift_min_words = get_count(*v, "ift_min_words");

  if (auto j = member(root, "judge")) {
    if (!j->is_object()) throw ConfigError("judge", "expected an object");
    reject_unknown(*j, {"sample_size", "config_a", "config_b"}, "judge.");
    if (auto v = member(*j, "sample_size")) c.judge_sample_size = get_count(*v, "judge.sample_size");
    if (auto v = member(*j, "config_a")) c.judge_config_a = get_string(*v, "judge.config_a");
    if (auto v = member(*j, "config_b")) c.judge_config_b = get_string(*v, "judge.config_b");
  }
  if (auto p = member(root, "paths")) {
    if (!p->is_object()) throw ConfigError("paths", "expected an object");
    reject_unknown(*p,
                   {"corpus", "benchmarks", "alignments", "tags", "stoplist", "judge_pairs",
                    "output_dir"},
                   "paths.");
    if (auto v = member(*p, "corpus")) c.paths.corpus = get_string(*v, "paths.corpus");
    if (auto v = member(*p, "alignments")) c.paths.alignments = get_string(*v, "paths.alignments");
    if (auto v = member(*p, "tags")) c.paths.tags = get_string(*v, "paths.tags");
    if (auto v = member(*p, "stoplist")) c.paths.stoplist = get_string(*v, "paths.stoplist");
    if (auto v = member(*p, "judge_pairs")) c.paths.judge_pairs = get_string(*v, "paths.judge_pairs");
    if (auto v = member(*p, "output_dir")) c.paths.output_dir = get_string(*v, "paths.output_dir");
    if (auto b = member(*p, "benchmarks")) {
      if (!b->is_object()) throw ConfigError("paths.benchmarks", "expected an object id -> path");
      for (const auto& [id, path] : b->items()) {
        const std::string field = "paths.benchmarks." + id;
        c.paths.benchmarks[as_config(field, [&] { return parse_benchmark_id(id); })] =
            get_string(path, field);
      }
    }
  }
  if (auto l = member(root, "llm")) {
    if (!l->is_object()) throw ConfigError("llm", "expected an object");
    reject_unknown(*l,
                   {"endpoint", "generator_model", "judge_model", "max_retries", "concurrency",
                    "audit_log"},
                   "llm.");
    if (auto v = member(*l, "endpoint")) c.llm.endpoint = get_string(*v, "llm.endpoint");
    if (auto v = member(*l, "generator_model")) c.llm.generator_model = get_string(*v, "llm.generator_model");
    if (auto v = member(*l, "judge_model")) c.llm.judge_model = get_string(*v, "llm.judge_model");
    if (auto v = member(*l, "max_retries")) c.llm.max_retries = static_cast<int>(get_int(*v, "llm.max_retries"));
    if (auto v = member(*l, "concurrency")) c.llm.concurrency = static_cast<int>(get_int(*v, "llm.concurrency"));
    if (auto v = member(*l, "audit_log")) c.llm.audit_log = get_string(*v, "llm.audit_log");
  }
  if (auto m = member(root, "model")) {
    if (!m->is_object()) throw ConfigError("model", "expected an object");
    reject_unknown(*m, {"name", "adapter", "stub_rule"}, "model.");
    if (auto v = member(*m, "name")) c.model.name = get_string(*v, "model.name");
    if (auto v = member(*m, "adapter")) {
      c.model.adapter = as_config("model.adapter", [&] { return parse_adapter_kind(get_string(*v, "model.adapter")); });
    }
    if (auto v = member(*m, "stub_rule")) {
      c.model.stub_rule = as_config("model.stub_rule", [&] { return parse_stub_rule(get_string(*v, "model.stub_rule")); });
    }
  }
  c.validate();
  return c;
}

RunConfig load_run_config(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("--config", "cannot open " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_run_config(text.str());
}

namespace {

json optional_path(const std::optional<fs::path>& p) {
  return p ? json(p->generic_string()) : json(nullptr);
}

std::vector<std::string> codes(const std::vector<Language>& langs) {
  std::vector<std::string> out;
  for (Language l : langs) out.emplace_back(code_of(l));
  return out;
}

}  // namespace

std::string to_json(const RunConfig& c) {
  json benchmarks = json::object();
  for (const auto& [id, path] : c.paths.benchmarks) {
    benchmarks[std::string(to_string(id))] = path.generic_string();
  }
  json j = {
      {"matrix_lang", code_of(c.matrix_lang)},
      {"embedded_langs", codes(c.embedded_langs)},
      {"method", to_string(c.method)},
      {"mode", to_string(c.mode)},
      {"ratio", c.ratio},
      {"seed", c.seed},
      {"include_propn", c.include_propn},
      {"align_threshold", c.align_threshold},
      {"ibm1_iterations", c.ibm1_iterations},
      {"mitigation", c.mitigation},
      {"ift_min_words", c.ift_min_words},
      {"judge",
       {{"sample_size", c.judge_sample_size},
        {"config_a", c.judge_config_a},
        {"config_b", c.judge_config_b}}},
      {"paths",
       {{"corpus", optional_path(c.paths.corpus)},
        {"benchmarks", benchmarks},
        {"alignments", optional_path(c.paths.alignments)},
        {"tags", optional_path(c.paths.tags)},
        {"stoplist", optional_path(c.paths.stoplist)},
        {"judge_pairs", optional_path(c.paths.judge_pairs)},
        {"output_dir", c.paths.output_dir.generic_string()}}},
      {"llm",
       {{"endpoint", c.llm.endpoint},
        {"generator_model", c.llm.generator_model},
        {"judge_model", c.llm.judge_model},
        {"max_retries", c.llm.max_retries},
        {"concurrency", c.llm.concurrency},
        {"audit_log", optional_path(c.llm.audit_log)}}},
      {"model",
       {{"name", c.model.name},
        {"adapter", to_string(c.model.adapter)},
        {"stub_rule", to_string(c.model.stub_rule)}}},
  };
  return j.dump(2);
}

std::string config_hash(const RunConfig& config) { return sha256_hex(to_json(config)); }

std::string language_tag(const std::vector<Language>& langs) {
  std::string tag;
  for (Language l : langs) {
    if (!tag.empty()) tag += '-';
    tag += code_of(l);
  }
  return tag;
}

// --- shared command plumbing --------------------------------------------------

namespace {

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  std::ostringstream out;
  out << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return out.str();
}

class OutputDir {
 public:
  OutputDir(const RunConfig& config, std::string command)
      : config_(config), command_(std::move(command)) {
    std::error_code ec;
    fs::create_directories(config.paths.output_dir, ec);
    if (ec) throw Error("cannot create " + config.paths.output_dir.string() + ": " + ec.message());
  }

  fs::path write(const std::string& name, const std::string& content) {
    const fs::path path = config_.paths.output_dir / name;
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << content;
    if (!content.empty() && content.back() != '\n') out << '\n';
    out.close();
    if (!out) throw Error("write failed: " + path.string());
    result_.outputs.push_back(path);
    return path;
  }

  void add_skipped(std::size_t n) { result_.skipped += n; }

  CommandResult finish() {
    json manifest = {{"command", command_},
                     {"config_hash", config_hash(config_)},
                     {"seed", config_.seed},
                     {"version", library_version()},
                     {"timestamp", utc_timestamp()},
                     {"skipped", result_.skipped}};
    json outputs = json::array();
    for (const auto& p : result_.outputs) outputs.push_back(p.filename().generic_string());
    manifest["outputs"] = outputs;
    manifest["config"] = json::parse(to_json(config_));
    const fs::path path = config_.paths.output_dir / ("manifest_" + command_ + ".json");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out << manifest.dump(2) << '\n';
    return result_;
  }

 private:
  const RunConfig& config_;
  std::string command_;
  CommandResult result_;
};

std::string jsonl_of(const auto& values) {
  std::string out;
  for (const auto& v : values) {
    out += to_jsonl(v);
    out += '\n';
  }
  return out;
}

std::vector<std::vector<Language>> language_sets(const RunConfig& config) {
  if (config.method == Method::extreme) return {config.embedded_langs};
  std::vector<std::vector<Language>> sets;
  for (Language l : config.embedded_langs) sets.push_back({l});
  return sets;
}

std::vector<ParallelPair> load_corpus_required(const RunConfig& config) {
  if (!config.paths.corpus) throw ConfigError("paths.corpus", "required by this command");
  auto pairs = load_parallel_corpus(*config.paths.corpus);
  for (const auto& p : pairs) {
    if (p.matrix_lang != config.matrix_lang) {
      throw ConfigError("matrix_lang", "corpus pair '" + p.id + "' has matrix language " +
                                           std::string(code_of(p.matrix_lang)));
    }
  }
  return pairs;
}

std::map<BenchmarkId, std::vector<BenchmarkItem>> load_benchmarks_required(const RunConfig& config) {
  if (config.paths.benchmarks.empty()) throw ConfigError("paths.benchmarks", "required by this command");
  std::map<BenchmarkId, std::vector<BenchmarkItem>> out;
  for (const auto& [id, path] : config.paths.benchmarks) out[id] = load_benchmark(path, id);
  return out;
}

std::vector<ParallelPair> benchmark_field_pairs(
    const std::map<BenchmarkId, std::vector<BenchmarkItem>>& benchmarks, Language matrix_lang) {
  std::vector<ParallelPair> out;
  for (const auto& [_, items] : benchmarks) {
    for (const auto& item : items) {
      for (auto& p : field_pairs(item, matrix_lang)) out.push_back(std::move(p));
    }
  }
  return out;
}

std::unique_ptr<LlmGateway> make_gateway(const RunConfig& config) {
  const std::string& endpoint = config.llm.endpoint;
  std::shared_ptr<ChatClient> client;
  if (endpoint.empty()) throw ConfigError("llm.endpoint", "required by this command");
  if (endpoint.starts_with("stub:")) {
    const std::string reply = endpoint.substr(5);
    client = std::make_shared<StubChatClient>([reply](const LlmRequest&) { return reply; });
  } else {
    try {
      client = std::make_shared<HttpChatClient>(http_config_from_env(endpoint));
    } catch (const ConfigError& e) {
      throw ConfigError("llm.endpoint", e.what());
    }
  }
  GatewayOptions options;
  options.generator_model = config.llm.generator_model;
  options.judge_model = config.llm.judge_model;
  options.retry.max_retries = config.llm.max_retries;
  options.concurrency = config.llm.concurrency;
  options.audit_log = config.llm.audit_log;
  return std::make_unique<LlmGateway>(std::move(client), options);
}

struct GeneratorBundle {
  std::unique_ptr<LlmGateway> gateway;
  std::unique_ptr<CswGenerator> generator;
  int concurrency = 1;
};

int local_concurrency() {
  return static_cast<int>(std::clamp(std::thread::hardware_concurrency(), 1u, 8u));
}

GeneratorBundle make_generator(const RunConfig& config, std::span<const ParallelPair> training) {
  GeneratorBundle bundle;
  if (config.mode == GenerationMode::llm_filled) {
    bundle.gateway = make_gateway(config);
    bundle.generator = std::make_unique<LlmCswGenerator>(
        *bundle.gateway, LlmCswOptions{config.method, config.ratio, config.seed});
    bundle.concurrency = config.llm.concurrency;
    return bundle;
  }
  AlignmentGeneratorOptions options;
  options.method = config.method;
  options.ratio = config.ratio;
  options.seed = config.seed;
  options.nouns.include_propn = config.include_propn;
  options.align.threshold = config.align_threshold;
  Stoplist stoplist = Stoplist::builtin();
  if (config.paths.stoplist) stoplist.merge(Stoplist::from_file(*config.paths.stoplist));
  auto gen = std::make_unique<AlignmentCswGenerator>(options, std::move(stoplist));
  if (config.paths.alignments) gen->add_alignments(load_external_alignments(*config.paths.alignments));
  if (config.paths.tags) gen->set_tags(load_external_tags(*config.paths.tags).by_pair);
  for (auto& [lang, scorer] : train_scorers(training, config.embedded_langs, config.ibm1_iterations)) {
    gen->set_scorer(lang, scorer);
  }
  bundle.generator = std::move(gen);
  bundle.concurrency = local_concurrency();
  return bundle;
}

}  // namespace

// --- commands -----------------------------------------------------------------

CommandResult cmd_align(const RunConfig& config) {
  std::vector<ParallelPair> pairs;
  if (config.paths.corpus) pairs = load_corpus_required(config);
  if (!config.paths.benchmarks.empty()) {
    for (auto& p : benchmark_field_pairs(load_benchmarks_required(config), config.matrix_lang)) {
      pairs.push_back(std::move(p));
    }
  }
  if (pairs.empty()) {
    throw ConfigError("paths.corpus", "cmd_align needs a corpus or benchmarks");
  }
  OutputDir out(config, "align");
  std::string lines;
  AlignOptions opts{config.align_threshold};
  for (Language lang : config.embedded_langs) {
    const auto corpus = tokenized_pairs(pairs, lang);
    if (corpus.empty()) continue;
    const auto model = train_ibm1(corpus, config.ibm1_iterations);
    for (const auto& tp : corpus) {
      lines += to_jsonl(align_pair(tp.id, lang, tp.matrix, tp.embedded, model.table, opts));
      lines += '\n';
    }
  }
  out.write("alignments.jsonl", lines);
  return out.finish();
}

CommandResult cmd_generate(const RunConfig& config) {
  const auto pairs = load_corpus_required(config);
  auto bundle = make_generator(config, pairs);
  const auto sets = language_sets(config);
  struct Job {
    const ParallelPair* pair;
    const std::vector<Language>* langs;
  };
  std::vector<Job> jobs;
  for (const auto& p : pairs) {
    for (const auto& s : sets) jobs.push_back({&p, &s});
  }
  struct Result {
    std::optional<CswInstance> instance;
    std::string reason;
  };
  const auto results = parallel_map(jobs.size(), bundle.concurrency, [&](std::size_t i) {
    Result r;
    try {
      r.instance = bundle.generator->generate(*jobs[i].pair, *jobs[i].langs);
    } catch (const Error& e) {
      r.reason = e.what();
    }
    return r;
  });

  OutputDir out(config, "generate");
  std::string lines;
  json skipped = json::array();
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    if (results[i].instance) {
      lines += to_jsonl(*results[i].instance);
      lines += '\n';
    } else {
      skipped.push_back({{"pair_id", jobs[i].pair->id},
                         {"embedded_langs", codes(*jobs[i].langs)},
                         {"reason", results[i].reason}});
    }
  }
  out.write("csw.jsonl", lines);
  out.write("csw_skipped.json", json{{"count", skipped.size()}, {"skipped", skipped}}.dump(2));
  out.add_skipped(skipped.size());
  return out.finish();
}

namespace {

std::string bench_file(BenchmarkId id, const std::vector<Language>& langs) {
  return "bench_" + std::string(to_string(id)) + "_" + language_tag(langs) + ".jsonl";
}

}  // namespace

CommandResult cmd_bench(const RunConfig& config) {
  const auto benchmarks = load_benchmarks_required(config);
  std::vector<ParallelPair> training;
  if (config.paths.corpus) training = load_corpus_required(config);
  for (auto& p : benchmark_field_pairs(benchmarks, config.matrix_lang)) training.push_back(std::move(p));
  auto bundle = make_generator(config, training);

  OutputDir out(config, "bench");
  for (const auto& langs : language_sets(config)) {
    for (const auto& [id, items] : benchmarks) {
      if (items.empty()) continue;
      const CswBenchmark bench = build_csw_benchmark(items, config.matrix_lang, langs, config.method,
                                                     *bundle.generator, bundle.concurrency);
      std::ostringstream lines;
      write_csw_benchmark(lines, bench);
      const std::string name = bench_file(id, langs);
      out.write(name, lines.str());
      out.write(name.substr(0, name.size() - 6) + "_skipped.json", skip_report_json(bench.skipped));
      out.add_skipped(bench.skipped.size());
    }
  }
  return out.finish();
}

CommandResult cmd_eval(const RunConfig& config) {
  if (config.paths.benchmarks.empty()) throw ConfigError("paths.benchmarks", "required by this command");
  std::unique_ptr<LlmGateway> gateway;
  std::unique_ptr<ModelAdapter> adapter;
  switch (config.model.adapter) {
    case AdapterKind::stub:
      adapter = std::make_unique<StubAdapter>(config.model.name, config.model.stub_rule);
      break;
    case AdapterKind::generate:
      gateway = make_gateway(config);
      adapter = std::make_unique<GatewayGenerateAdapter>(*gateway, config.model.name);
      break;
    case AdapterKind::score_choices:
      throw ConfigError("model.adapter",
                        "score_choices adapters are available through the library API only");
  }
  EvalOptions options;
  options.retries = config.llm.max_retries;
  options.concurrency = gateway ? config.llm.concurrency : 1;

  OutputDir out(config, "eval");
  for (const auto& langs : language_sets(config)) {
    if (config.mitigation) options.mitigation = langs.front();
    std::vector<EvalRecord> baseline_records, csw_records;
    for (const auto& [id, _] : config.paths.benchmarks) {
      const auto bench = load_csw_benchmark(config.paths.output_dir / bench_file(id, langs));
      if (bench.items.empty()) continue;
      // The baseline is the monolingual original, never mitigation-prefixed.
      EvalOptions base_options = options;
      base_options.mitigation.reset();
      for (auto& r : evaluate(*adapter, bench.originals(), base_options)) baseline_records.push_back(r);
      for (auto& r : evaluate(*adapter, bench.switched(), options)) csw_records.push_back(r);
    }
    if (csw_records.empty()) {
      throw Error("no benchmark items to evaluate for " + language_tag(langs));
    }
    const AccuracyReport baseline = make_report(baseline_records);
    AccuracyReport csw = make_report(csw_records);
    attach_deltas(csw, baseline);
    RunMetadata meta{config.model.name, std::string(to_string(config.method)), config.matrix_lang,
                     langs, config.seed, config.mitigation};
    const std::string tag = language_tag(langs);
    out.write("eval_" + tag + ".json", eval_report_json(baseline, csw, meta));
    out.write("eval_" + tag + "_baseline_records.jsonl", jsonl_of(baseline_records));
    out.write("eval_" + tag + "_csw_records.jsonl", jsonl_of(csw_records));
  }
  return out.finish();
}

CommandResult cmd_judge(const RunConfig& config) {
  if (!config.paths.judge_pairs) throw ConfigError("paths.judge_pairs", "required by this command");
  std::vector<ComparisonPair> pairs;
  {
    auto in = detail::open_input(*config.paths.judge_pairs);
    detail::for_each_jsonl(in, config.paths.judge_pairs->string(), [&](const json& obj, std::size_t) {
      pairs.push_back({detail::require_string(obj, "pair_id"), detail::require_string(obj, "sentence_a"),
                       detail::require_string(obj, "sentence_b")});
    });
  }
  if (pairs.size() < config.judge_sample_size) {
    throw ConfigError("judge.sample_size", std::to_string(config.judge_sample_size) +
                                               " requested, " + std::to_string(pairs.size()) +
                                               " pairs available");
  }
  auto gateway = make_gateway(config);
  const Language lang = config.embedded_langs.front();
  std::vector<JudgedPair> details;
  const auto report = run_comparison(pairs, lang, *gateway, config.judge_sample_size,
                                     {config.judge_config_a, config.judge_config_b}, &details);
  OutputDir out(config, "judge");
  const std::string tag(code_of(lang));
  out.write("judge_" + tag + ".json", to_json(report, config_hash(config)));
  std::string lines;
  for (const auto& d : details) {
    lines += json{{"pair_id", d.pair_id}, {"outcome", to_string(d.outcome)}}.dump() + "\n";
  }
  out.write("judge_" + tag + "_verdicts.jsonl", lines);
  return out.finish();
}

CommandResult cmd_ift(const RunConfig& config) {
  if (config.method == Method::extreme) {
    throw ConfigError("method", "IFT examples take one embedded language each");
  }
  if (config.matrix_lang != Language::en) throw ConfigError("matrix_lang", "IFT needs English matrix text");
  const auto all = load_corpus_required(config);
  const auto pairs = filter_long(all, config.ift_min_words);
  auto bundle = make_generator(config, all);
  const auto dataset =
      build_ift_dataset(pairs, config.embedded_langs, *bundle.generator, config.seed, bundle.concurrency);

  OutputDir out(config, "ift");
  out.write("ift.jsonl", jsonl_of(dataset.examples));
  out.write("ift_recipe.json", training_recipe_json());
  json skipped = json::array();
  for (const auto& s : dataset.skipped) {
    skipped.push_back({{"pair_id", s.pair_id}, {"embedded_lang", code_of(s.embedded_lang)}, {"reason", s.reason}});
  }
  out.write("ift_skipped.json",
            json{{"count", skipped.size()},
                 {"filtered_out", all.size() - pairs.size()},
                 {"skipped", skipped}}
                .dump(2));
  out.add_skipped(dataset.skipped.size());
  return out.finish();
}

}  // namespace cswkit
