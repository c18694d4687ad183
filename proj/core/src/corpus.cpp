#include "cswkit/corpus.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <sstream>

#include "cswkit/errors.hpp"
#include "jsonl.hpp"

namespace cswkit {

using detail::json;

void ParallelPair::validate() const {
  if (id.empty()) throw ValidationError("parallel pair: empty id");
  if (matrix_text.empty()) throw ValidationError("pair " + id + ": empty matrix_text");
  for (const auto& [lang, text] : translations) {
    if (lang == matrix_lang) {
      throw ValidationError("pair " + id + ": translation in the matrix language " +
                            std::string(code_of(lang)));
    }
    if (text.empty()) {
      throw ValidationError("pair " + id + ": empty " + std::string(code_of(lang)) +
                            " translation");
    }
  }
}

const std::string* ParallelPair::translation(Language lang) const {
  auto it = translations.find(lang);
  return it == translations.end() ? nullptr : &it->second;
}

std::vector<ParallelPair> parse_parallel_corpus(std::istream& in,
                                                const std::string& source_name) {
  std::vector<ParallelPair> pairs;
  std::set<std::string> seen;
  detail::for_each_jsonl(in, source_name, [&](const json& obj, std::size_t line) {
    ParallelPair pair;
    pair.id = detail::require_string(obj, "id");
    pair.matrix_lang = parse_language(detail::require_string(obj, "matrix_lang"));
    pair.matrix_text = detail::require_string(obj, "matrix_text");
    auto tr = obj.find("translations");
    if (tr == obj.end() || !tr->is_object()) {
      throw ValidationError("missing object field 'translations'");
    }
    for (const auto& [code, text] : tr->items()) {
      if (!text.is_string()) throw ValidationError("translation '" + code + "' must be a string");
      pair.translations.emplace(parse_language(code), text.get<std::string>());
    }
    pair.validate();
    if (!seen.insert(pair.id).second) {
      throw ParseError(source_name, line, "duplicate id '" + pair.id + "'");
    }
    pairs.push_back(std::move(pair));
  });
  return pairs;
}

std::vector<ParallelPair> load_parallel_corpus(const std::filesystem::path& path) {
  auto in = detail::open_input(path);
  return parse_parallel_corpus(in, path.string());
}

std::string to_jsonl(const ParallelPair& pair) {
  json tr = json::object();
  for (const auto& [lang, text] : pair.translations) tr[std::string(code_of(lang))] = text;
  return detail::dump_line({{"id", pair.id},
                            {"matrix_lang", code_of(pair.matrix_lang)},
                            {"matrix_text", pair.matrix_text},
                            {"translations", tr}});
}

// --- benchmarks -------------------------------------------------------------

namespace {

constexpr std::array<std::string_view, 6> kBelebeleFields = {
    "passage", "question", "option_a", "option_b", "option_c", "option_d"};
constexpr std::array<std::string_view, 5> kMmluFields = {
    "question", "option_a", "option_b", "option_c", "option_d"};
constexpr std::array<std::string_view, 2> kXnliFields = {"premise", "hypothesis"};
constexpr std::array<std::string_view, 4> kOptionFields = {"option_a", "option_b",
                                                           "option_c", "option_d"};
constexpr std::array<std::string_view, 4> kLetterLabels = {"A", "B", "C", "D"};
constexpr std::array<std::string_view, 3> kNliLabels = {"0", "1", "2"};

}  // namespace

std::string_view to_string(BenchmarkId id) noexcept {
  switch (id) {
    case BenchmarkId::belebele: return "belebele";
    case BenchmarkId::mmlu: return "mmlu";
    case BenchmarkId::xnli: return "xnli";
  }
  return "?";
}

BenchmarkId parse_benchmark_id(std::string_view name) {
  for (auto id : {BenchmarkId::belebele, BenchmarkId::mmlu, BenchmarkId::xnli}) {
    if (to_string(id) == name) return id;
  }
  throw ValidationError("unknown benchmark_id '" + std::string(name) +
                        "' (expected belebele, mmlu or xnli)");
}

std::span<const std::string_view> required_fields(BenchmarkId id) noexcept {
  switch (id) {
    case BenchmarkId::belebele: return kBelebeleFields;
    case BenchmarkId::mmlu: return kMmluFields;
    case BenchmarkId::xnli: return kXnliFields;
  }
  return {};
}

std::span<const std::string_view> option_fields(BenchmarkId id) noexcept {
  if (id == BenchmarkId::xnli) return {};
  return kOptionFields;
}

std::span<const std::string_view> label_set(BenchmarkId id) noexcept {
  if (id == BenchmarkId::xnli) return kNliLabels;
  return kLetterLabels;
}

void BenchmarkItem::validate() const {
  const std::string where =
      std::string(to_string(benchmark_id)) + " item '" + item_id + "'";
  if (item_id.empty()) throw ValidationError(where + ": empty item_id");
  for (std::string_view name : required_fields(benchmark_id)) {
    auto it = fields.find(std::string(name));
    if (it == fields.end()) {
      throw ValidationError(where + ": missing required field '" + std::string(name) + "'");
    }
  }
  const auto labels = label_set(benchmark_id);
  if (std::find(labels.begin(), labels.end(), gold) == labels.end()) {
    throw ValidationError(where + ": invalid gold label '" + gold + "'");
  }
}

const std::string& BenchmarkItem::field(const std::string& name) const {
  auto it = fields.find(name);
  if (it == fields.end()) {
    throw ValidationError("item '" + item_id + "' has no field '" + name + "'");
  }
  return it->second;
}

namespace {

std::map<std::string, std::string> parse_field_map(const json& obj, const std::string& what) {
  if (!obj.is_object()) throw ValidationError("'" + what + "' must be an object");
  std::map<std::string, std::string> out;
  for (const auto& [name, value] : obj.items()) {
    if (!value.is_string()) {
      throw ValidationError("field '" + name + "' in '" + what + "' must be a string");
    }
    out.emplace(name, value.get<std::string>());
  }
  return out;
}

}  // namespace

namespace detail {

BenchmarkItem benchmark_item_from_json(const json& obj) {
  BenchmarkItem item;
  item.benchmark_id = parse_benchmark_id(require_string(obj, "benchmark_id"));
  item.item_id = require_string(obj, "item_id");
  auto fields = obj.find("fields");
  if (fields == obj.end()) throw ValidationError("missing object field 'fields'");
  item.fields = parse_field_map(*fields, "fields");
  auto gold = obj.find("gold");
  if (gold == obj.end()) throw ValidationError("missing field 'gold'");
  if (gold->is_number_integer()) {
    item.gold = std::to_string(gold->get<long long>());
  } else if (gold->is_string()) {
    item.gold = gold->get<std::string>();
  } else {
    throw ValidationError("field 'gold' must be a string or integer");
  }
  if (auto tr = obj.find("translations"); tr != obj.end()) {
    if (!tr->is_object()) throw ValidationError("'translations' must be an object");
    for (const auto& [code, value] : tr->items()) {
      item.translations.emplace(parse_language(code),
                                parse_field_map(value, "translations." + code));
    }
  }
  item.validate();
  return item;
}

json benchmark_item_to_json(const BenchmarkItem& item) {
  json obj = {{"benchmark_id", to_string(item.benchmark_id)},
              {"item_id", item.item_id},
              {"fields", item.fields},
              {"gold", item.gold}};
  if (!item.translations.empty()) {
    json tr = json::object();
    for (const auto& [lang, fields] : item.translations) tr[std::string(code_of(lang))] = fields;
    obj["translations"] = tr;
  }
  return obj;
}

}  // namespace detail

std::vector<BenchmarkItem> parse_benchmark(std::istream& in, const std::string& source_name,
                                           BenchmarkId id) {
  std::vector<BenchmarkItem> items;
  detail::for_each_jsonl(in, source_name, [&](const json& obj, std::size_t) {
    BenchmarkItem item = detail::benchmark_item_from_json(obj);
    if (item.benchmark_id != id) {
      throw ValidationError("benchmark_id '" + std::string(to_string(item.benchmark_id)) +
                            "' where '" + std::string(to_string(id)) + "' was expected");
    }
    items.push_back(std::move(item));
  });
  return items;
}

std::vector<BenchmarkItem> load_benchmark(const std::filesystem::path& path, BenchmarkId id) {
  auto in = detail::open_input(path);
  return parse_benchmark(in, path.string(), id);
}

std::string to_jsonl(const BenchmarkItem& item) {
  return detail::dump_line(detail::benchmark_item_to_json(item));
}

std::string format_item(const BenchmarkItem& item) {
  std::ostringstream out;
  switch (item.benchmark_id) {
    case BenchmarkId::belebele:
      out << "Passage: " << item.field("passage") << "\n";
      [[fallthrough]];
    case BenchmarkId::mmlu: {
      out << "Question: " << item.field("question") << "\n";
      for (std::size_t i = 0; i < kOptionFields.size(); ++i) {
        out << kLetterLabels[i] << ". " << item.field(std::string(kOptionFields[i])) << "\n";
      }
      out << "Answer:";
      break;
    }
    case BenchmarkId::xnli:
      out << "Premise: " << item.field("premise") << "\n"
          << "Hypothesis: " << item.field("hypothesis") << "\n"
          << "Answer (0 = entailment, 1 = neutral, 2 = contradiction):";
      break;
  }
  return out.str();
}

}  // namespace cswkit
