#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <istream>
#include <string>

#include <json.hpp>

#include "cswkit/errors.hpp"

namespace cswkit::detail {

using json = nlohmann::json;

/// Calls `fn(object, line_number)` for every non-blank line. Parse failures
/// and exceptions thrown by `fn` surface as ParseError with the line number.
inline void for_each_jsonl(std::istream& in, const std::string& source,
                           const std::function<void(const json&, std::size_t)>& fn) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    json value;
    try {
      value = json::parse(line);
    } catch (const json::exception& e) {
      throw ParseError(source, line_no, std::string("malformed JSON: ") + e.what());
    }
    if (!value.is_object()) throw ParseError(source, line_no, "expected a JSON object");
    try {
      fn(value, line_no);
    } catch (const ParseError&) {
      throw;
    } catch (const json::exception& e) {
      throw ParseError(source, line_no, e.what());
    } catch (const Error& e) {
      throw ParseError(source, line_no, e.what());
    }
  }
}

inline std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return in;
}

/// Required string member; throws ValidationError naming the key.
inline const std::string& require_string(const json& obj, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ValidationError(std::string("missing field '") + key + "'");
  if (!it->is_string()) throw ValidationError(std::string("field '") + key + "' must be a string");
  return it->get_ref<const std::string&>();
}

/// Compact single-line dump with UTF-8 passed through.
inline std::string dump_line(const json& value) {
  return value.dump(-1, ' ', false, json::error_handler_t::replace);
}

}  // namespace cswkit::detail

namespace cswkit {
struct BenchmarkItem;
}

namespace cswkit::detail {

BenchmarkItem benchmark_item_from_json(const json& obj);
json benchmark_item_to_json(const BenchmarkItem& item);

}  // namespace cswkit::detail
