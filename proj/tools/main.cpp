// cswkit command-line driver: align | generate | bench | eval | judge | ift.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cswkit/errors.hpp"
#include "cswkit/pipeline.hpp"

namespace {

using json = nlohmann::json;

constexpr int kExitError = 1;
constexpr int kExitConfig = 2;

struct Flags {
  std::string config_path;
  std::optional<std::string> matrix_lang;
  std::vector<std::string> embedded_langs;
  std::optional<std::string> method;
  std::optional<std::string> mode;
  std::optional<double> ratio;
  std::optional<long long> seed;
  std::optional<bool> include_propn;
  std::optional<double> align_threshold;
  std::optional<long long> ibm1_iterations;
  bool mitigation = false;
  std::optional<long long> ift_min_words;
  std::optional<std::string> corpus;
  std::vector<std::string> benchmarks;
  std::optional<std::string> alignments;
  std::optional<std::string> tags;
  std::optional<std::string> stoplist;
  std::optional<std::string> judge_pairs;
  std::optional<std::string> output_dir;
  std::optional<std::string> endpoint;
  std::optional<std::string> generator_model;
  std::optional<std::string> judge_model;
  std::optional<long long> max_retries;
  std::optional<long long> concurrency;
  std::optional<std::string> audit_log;
  std::optional<std::string> model_name;
  std::optional<std::string> adapter;
  std::optional<std::string> stub_rule;
  std::optional<long long> sample_size;
};

void add_flags(CLI::App& cmd, Flags& f) {
  cmd.add_option("--config", f.config_path, "JSON run config supplying defaults");
  cmd.add_option("--matrix-lang", f.matrix_lang, "matrix language code");
  cmd.add_option("--embedded-langs", f.embedded_langs, "embedded language codes")->delimiter(',');
  cmd.add_option("--method", f.method, "noun_token | ratio_token | extreme");
  cmd.add_option("--mode", f.mode, "deterministic | llm_filled");
  cmd.add_option("--ratio", f.ratio, "fraction of tokens switched by ratio_token");
  cmd.add_option("--seed", f.seed, "run seed");
  cmd.add_option("--include-propn", f.include_propn, "treat proper nouns as nouns");
  cmd.add_option("--align-threshold", f.align_threshold, "alignment link threshold");
  cmd.add_option("--ibm1-iterations", f.ibm1_iterations, "EM iterations");
  cmd.add_flag("--mitigation", f.mitigation, "prepend the mitigation instruction");
  cmd.add_option("--ift-min-words", f.ift_min_words, "keep sentences longer than this");
  cmd.add_option("--corpus", f.corpus, "parallel corpus JSONL");
  cmd.add_option("--benchmark", f.benchmarks, "benchmark as id=path (repeatable)");
  cmd.add_option("--alignments", f.alignments, "external alignment JSONL");
  cmd.add_option("--tags", f.tags, "external POS tags JSONL");
  cmd.add_option("--stoplist", f.stoplist, "extra multiword expressions, one per line");
  cmd.add_option("--judge-pairs", f.judge_pairs, "judge input JSONL");
  cmd.add_option("--output-dir", f.output_dir, "output directory");
  cmd.add_option("--endpoint", f.endpoint, "chat-completion URL or stub:<reply>");
  cmd.add_option("--generator-model", f.generator_model, "generator model name");
  cmd.add_option("--judge-model", f.judge_model, "judge model name");
  cmd.add_option("--max-retries", f.max_retries, "retries per LLM request");
  cmd.add_option("--concurrency", f.concurrency, "LLM requests in flight");
  cmd.add_option("--audit-log", f.audit_log, "JSONL request audit file");
  cmd.add_option("--model-name", f.model_name, "evaluated model name");
  cmd.add_option("--adapter", f.adapter, "stub | generate");
  cmd.add_option("--stub-rule", f.stub_rule, "always_gold | ascii_only | first_label");
  cmd.add_option("--sample-size", f.sample_size, "judged pairs");
}

template <class T>
void set_if(json& obj, const char* key, const std::optional<T>& value) {
  if (value) obj[key] = *value;
}

json merged_config(const Flags& f) {
  json root = json::object();
  if (!f.config_path.empty()) {
    std::ifstream in(f.config_path, std::ios::binary);
    if (!in) throw cswkit::ConfigError("--config", "cannot open " + f.config_path);
    try {
      root = json::parse(in);
    } catch (const json::exception& e) {
      throw cswkit::ConfigError("--config", std::string("malformed JSON: ") + e.what());
    }
    if (!root.is_object()) throw cswkit::ConfigError("--config", "expected a JSON object");
  }
  auto section = [&](const char* key) -> json& {
    json& s = root[key];
    if (s.is_null()) s = json::object();
    if (!s.is_object()) throw cswkit::ConfigError(key, "expected an object");
    return s;
  };
  set_if(root, "matrix_lang", f.matrix_lang);
  if (!f.embedded_langs.empty()) root["embedded_langs"] = f.embedded_langs;
  set_if(root, "method", f.method);
  set_if(root, "mode", f.mode);
  set_if(root, "ratio", f.ratio);
  set_if(root, "seed", f.seed);
  set_if(root, "include_propn", f.include_propn);
  set_if(root, "align_threshold", f.align_threshold);
  set_if(root, "ibm1_iterations", f.ibm1_iterations);
  if (f.mitigation) root["mitigation"] = true;
  set_if(root, "ift_min_words", f.ift_min_words);

  json& paths = section("paths");
  set_if(paths, "corpus", f.corpus);
  set_if(paths, "alignments", f.alignments);
  set_if(paths, "tags", f.tags);
  set_if(paths, "stoplist", f.stoplist);
  set_if(paths, "judge_pairs", f.judge_pairs);
  set_if(paths, "output_dir", f.output_dir);
  for (const auto& b : f.benchmarks) {
    const auto eq = b.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == b.size()) {
      throw cswkit::ConfigError("--benchmark", "expected id=path, got '" + b + "'");
    }
    json& bm = paths["benchmarks"];
    if (bm.is_null()) bm = json::object();
    bm[b.substr(0, eq)] = b.substr(eq + 1);
  }

  json& llm = section("llm");
  set_if(llm, "endpoint", f.endpoint);
  set_if(llm, "generator_model", f.generator_model);
  set_if(llm, "judge_model", f.judge_model);
  set_if(llm, "max_retries", f.max_retries);
  set_if(llm, "concurrency", f.concurrency);
  set_if(llm, "audit_log", f.audit_log);

  json& model = section("model");
  set_if(model, "name", f.model_name);
  set_if(model, "adapter", f.adapter);
  set_if(model, "stub_rule", f.stub_rule);

  json& judge = section("judge");
  set_if(judge, "sample_size", f.sample_size);
  return root;
}

int run(const std::string& command, const Flags& flags) {
  const cswkit::RunConfig config = cswkit::parse_run_config(merged_config(flags).dump());
  cswkit::CommandResult result;
  if (command == "align") result = cswkit::cmd_align(config);
  else if (command == "generate") result = cswkit::cmd_generate(config);
  else if (command == "bench") result = cswkit::cmd_bench(config);
  else if (command == "eval") result = cswkit::cmd_eval(config);
  else if (command == "judge") result = cswkit::cmd_judge(config);
  else result = cswkit::cmd_ift(config);
  for (const auto& p : result.outputs) std::cout << p.string() << '\n';
  if (result.skipped > 0) {
    std::cerr << "cswkit " << command << ": " << result.skipped
              << " input(s) skipped; see the skip report in " << config.paths.output_dir.string()
              << '\n';
  }
  return result.exit_code();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cswkit: code-switched text generation and evaluation"};
  app.set_version_flag("--version", std::string(cswkit::library_version()));
  app.require_subcommand(1);

  Flags flags;
  const std::vector<std::pair<const char*, const char*>> commands = {
      {"align", "train the aligner and write alignments"},
      {"generate", "generate code-switched text from the corpus"},
      {"bench", "build code-switched benchmark variants"},
      {"eval", "evaluate a model on baseline and code-switched benchmarks"},
      {"judge", "pairwise LLM judging of two generation configurations"},
      {"ift", "build the instruction-tuning dataset"},
  };
  for (const auto& [name, help] : commands) add_flags(*app.add_subcommand(name, help), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return run(command, flags);
  } catch (const cswkit::ConfigError& e) {
    std::cerr << "cswkit " << command << ": " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "cswkit " << command << ": error: " << e.what() << '\n';
    return kExitError;
  }
}
