#include "cswkit/tagger.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <sstream>

#include "cswkit/errors.hpp"
#include "jsonl.hpp"
#include "utf8.hpp"

namespace cswkit {

namespace detail {
std::string_view embedded_english_lexicon();
}

namespace {

constexpr std::array<std::pair<Pos, std::string_view>, 10> kPosNames = {{
    {Pos::NOUN, "NOUN"}, {Pos::PROPN, "PROPN"}, {Pos::VERB, "VERB"}, {Pos::ADJ, "ADJ"},
    {Pos::DET, "DET"}, {Pos::PRON, "PRON"}, {Pos::ADP, "ADP"}, {Pos::PUNCT, "PUNCT"},
    {Pos::NUM, "NUM"}, {Pos::OTHER, "OTHER"},
}};

bool has(const std::vector<Pos>& readings, Pos pos) {
  return std::find(readings.begin(), readings.end(), pos) != readings.end();
}

bool ends_with(std::string_view word, std::string_view suffix) {
  return word.size() > suffix.size() + 1 && word.ends_with(suffix);
}

bool is_upper_ascii(char c) { return c >= 'A' && c <= 'Z'; }
bool is_digit_ascii(char c) { return c >= '0' && c <= '9'; }

bool is_numeric(std::string_view word) {
  if (word.empty() || !is_digit_ascii(word.front())) return false;
  return std::all_of(word.begin(), word.end(), [](char c) {
    return is_digit_ascii(c) || c == '.' || c == ',' || c == '%';
  });
}

bool is_all_caps(std::string_view word) {
  int letters = 0;
  for (char c : word) {
    if (c >= 'a' && c <= 'z') return false;
    if (is_upper_ascii(c)) ++letters;
  }
  return letters >= 2;
}

bool closed_class(Pos pos) {
  return pos == Pos::DET || pos == Pos::PRON || pos == Pos::ADP || pos == Pos::NUM ||
         pos == Pos::OTHER || pos == Pos::VERB;
}

// Words after which an ambiguous NOUN/VERB reads as a verb.
bool licenses_verb(std::string_view lower) {
  static constexpr std::array<std::string_view, 22> kWords = {
      "to", "will", "would", "shall", "should", "can", "could", "may", "might", "must",
      "do", "does", "did", "i", "you", "we", "they", "he", "she", "it", "not", "n't"};
  return std::find(kWords.begin(), kWords.end(), lower) != kWords.end();
}

std::optional<Pos> suffix_rule(std::string_view lower) {
  static constexpr std::array<std::string_view, 12> kNoun = {
      "tion", "sion", "ness", "ment", "ity", "ance", "ence", "ship", "ism", "ist", "ists", "ers"};
  static constexpr std::array<std::string_view, 5> kAdj = {"ous", "ful", "less", "able", "ible"};
  static constexpr std::array<std::string_view, 4> kVerb = {"ize", "ise", "ify", "ized"};
  for (auto s : kNoun) {
    if (ends_with(lower, s)) return Pos::NOUN;
  }
  for (auto s : {std::string_view("tions"), std::string_view("sions"), std::string_view("ments"),
                 std::string_view("nesses"), std::string_view("ities")}) {
    if (ends_with(lower, s)) return Pos::NOUN;
  }
  if (ends_with(lower, "ly")) return Pos::OTHER;
  for (auto s : kAdj) {
    if (ends_with(lower, s)) return Pos::ADJ;
  }
  for (auto s : kVerb) {
    if (ends_with(lower, s)) return Pos::VERB;
  }
  if (ends_with(lower, "ed")) return Pos::VERB;
  if (ends_with(lower, "ing")) return Pos::VERB;
  return std::nullopt;
}

}  // namespace

std::string_view to_string(Pos pos) noexcept {
  for (const auto& [p, name] : kPosNames) {
    if (p == pos) return name;
  }
  return "OTHER";
}

std::optional<Pos> parse_pos(std::string_view name) noexcept {
  for (const auto& [p, n] : kPosNames) {
    if (n == name) return p;
  }
  return std::nullopt;
}

EnglishLexiconTagger EnglishLexiconTagger::from_stream(std::istream& in,
                                                       const std::string& source_name) {
  EnglishLexiconTagger tagger;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0) {
      throw ParseError(source_name, line_no, "expected word<TAB>POS");
    }
    const auto pos = parse_pos(line.substr(tab + 1));
    if (!pos) throw ParseError(source_name, line_no, "unknown POS '" + line.substr(tab + 1) + "'");
    auto& readings = tagger.lexicon_[utf8::ascii_lower(line.substr(0, tab))];
    if (!has(readings, *pos)) readings.push_back(*pos);
  }
  return tagger;
}

EnglishLexiconTagger EnglishLexiconTagger::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open lexicon");
  return from_stream(in, path.string());
}

const EnglishLexiconTagger& EnglishLexiconTagger::builtin() {
  static const EnglishLexiconTagger tagger = [] {
    std::istringstream in{std::string(detail::embedded_english_lexicon())};
    return from_stream(in, "<builtin en_lexicon.tsv>");
  }();
  return tagger;
}

const std::vector<Pos>* EnglishLexiconTagger::lookup(const std::string& lower) const {
  auto it = lexicon_.find(lower);
  return it == lexicon_.end() ? nullptr : &it->second;
}

// Readings of an inflected form whose base is in the lexicon: -s keeps the
// base's NOUN/VERB readings, -ed and -ing only its VERB reading.
std::optional<std::vector<Pos>> EnglishLexiconTagger::inflected_readings(
    const std::string& lower) const {
  auto base_readings = [&](std::string_view suffix, bool verb_only)
      -> std::optional<std::vector<Pos>> {
    if (!ends_with(lower, suffix)) return std::nullopt;
    const std::string stem = lower.substr(0, lower.size() - suffix.size());
    std::vector<std::string> candidates = {stem, stem + "e"};
    if (stem.size() >= 2 && stem[stem.size() - 1] == stem[stem.size() - 2]) {
      candidates.push_back(stem.substr(0, stem.size() - 1));
    }
    if (suffix == "ied" || suffix == "ies") candidates = {stem + "y"};
    for (const auto& c : candidates) {
      const auto* readings = lookup(c);
      if (!readings) continue;
      std::vector<Pos> out;
      for (Pos p : *readings) {
        if (p == Pos::VERB || (!verb_only && p == Pos::NOUN)) out.push_back(p);
      }
      if (!out.empty()) return out;
    }
    return std::nullopt;
  };
  for (auto [suffix, verb_only] : {std::pair{std::string_view("ied"), true},
                                   std::pair{std::string_view("ies"), false},
                                   std::pair{std::string_view("ing"), true},
                                   std::pair{std::string_view("ed"), true},
                                   std::pair{std::string_view("es"), false},
                                   std::pair{std::string_view("d"), true},
                                   std::pair{std::string_view("s"), false}}) {
    if (auto r = base_readings(suffix, verb_only)) return r;
  }
  return std::nullopt;
}

std::vector<TaggedToken> EnglishLexiconTagger::tag(std::span<const Token> tokens,
                                                   Language lang) const {
  if (lang != Language::en) {
    throw UnsupportedLanguageError(
        "the built-in tagger only supports English; supply external POS annotations "
        "(tags JSONL) for matrix language '" + std::string(code_of(lang)) + "'");
  }
  std::vector<TaggedToken> out;
  out.reserve(tokens.size());
  bool sentence_start = true;
  for (const Token& token : tokens) {
    const std::string& word = token.surface;
    const std::string lower = utf8::ascii_lower(word);
    const Pos* prev = out.empty() ? nullptr : &out.back().pos;
    const std::string prev_lower = out.empty() ? "" : utf8::ascii_lower(out.back().token.surface);
    Pos pos = Pos::NOUN;

    const auto* readings = lookup(lower);
    std::optional<std::vector<Pos>> inflected;
    if (!readings && (inflected = inflected_readings(lower))) readings = &*inflected;
    const bool capitalised = !word.empty() && is_upper_ascii(word.front());
    const bool is_ing = ends_with(lower, "ing");

    if (is_punctuation(word)) {
      pos = Pos::PUNCT;
    } else if (is_numeric(word)) {
      pos = Pos::NUM;
    } else if (capitalised && (!sentence_start || is_all_caps(word)) &&
               !(readings && closed_class(readings->front()) && !is_all_caps(word))) {
      pos = Pos::PROPN;
    } else if (readings) {
      pos = readings->front();
      const bool noun_ok = has(*readings, Pos::NOUN);
      const bool verb_ok = has(*readings, Pos::VERB);
      if (noun_ok && readings->size() > 1) {
        if (licenses_verb(prev_lower) && verb_ok) {
          pos = Pos::VERB;
        } else if (prev && (*prev == Pos::DET || *prev == Pos::ADJ || *prev == Pos::NUM ||
                            *prev == Pos::ADP)) {
          pos = Pos::NOUN;
        } else if (prev && (*prev == Pos::NOUN || *prev == Pos::PROPN) && verb_ok &&
                   inflected && lower.back() == 's') {
          pos = Pos::VERB;
        }
      }
      if (pos == Pos::VERB && is_ing && prev && *prev == Pos::DET) pos = Pos::NOUN;
    } else if (auto s = suffix_rule(lower)) {
      pos = *s;
      if (pos == Pos::VERB && is_ing && prev && (*prev == Pos::DET || *prev == Pos::ADJ)) {
        pos = Pos::NOUN;
      }
    } else if (capitalised) {
      pos = Pos::PROPN;
    }
    out.push_back({token, pos});
    // An opening quote or bracket right at a sentence start keeps it open.
    sentence_start = pos == Pos::PUNCT &&
                     (sentence_start || word == "." || word == "!" || word == "?" || word == ":");
  }
  return out;
}

std::vector<TaggedToken> tag_tokens(std::span<const Token> tokens, Language lang,
                                    const Tagger& tagger) {
  if (tokens.empty()) return {};
  return tagger.tag(tokens, lang);
}

std::vector<TaggedToken> attach_tags(const std::string& pair_id, std::span<const Token> tokens,
                                     std::span<const Pos> tags) {
  if (tokens.size() != tags.size()) {
    throw ValidationError("pair '" + pair_id + "': " + std::to_string(tags.size()) +
                          " tags for " + std::to_string(tokens.size()) + " tokens");
  }
  std::vector<TaggedToken> out;
  out.reserve(tokens.size());
  for (std::size_t i = 0; i < tokens.size(); ++i) out.push_back({tokens[i], tags[i]});
  return out;
}

ExternalTags parse_external_tags(std::istream& in, const std::string& source_name,
                                 const std::map<std::string, std::size_t>* token_counts) {
  ExternalTags result;
  detail::for_each_jsonl(in, source_name, [&](const detail::json& obj, std::size_t) {
    const std::string& pair_id = detail::require_string(obj, "pair_id");
    auto pos = obj.find("pos");
    if (pos == obj.end() || !pos->is_array()) {
      throw ValidationError("pair '" + pair_id + "': 'pos' must be an array");
    }
    std::vector<Pos> tags;
    for (const auto& t : *pos) {
      if (!t.is_string()) throw ValidationError("pair '" + pair_id + "': tags must be strings");
      if (auto p = parse_pos(t.get_ref<const std::string&>())) {
        tags.push_back(*p);
      } else {
        tags.push_back(Pos::OTHER);
        ++result.unknown_tag_count;
      }
    }
    if (token_counts) {
      if (auto it = token_counts->find(pair_id); it != token_counts->end() &&
                                                 it->second != tags.size()) {
        throw ValidationError("pair '" + pair_id + "': " + std::to_string(tags.size()) +
                              " tags for " + std::to_string(it->second) + " tokens");
      }
    }
    result.by_pair[pair_id] = std::move(tags);
  });
  return result;
}

ExternalTags load_external_tags(const std::filesystem::path& path,
                                const std::map<std::string, std::size_t>* token_counts) {
  auto in = detail::open_input(path);
  return parse_external_tags(in, path.string(), token_counts);
}

}  // namespace cswkit
