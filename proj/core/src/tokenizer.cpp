#include "cswkit/tokenizer.hpp"

#include "utf8.hpp"

namespace cswkit {
namespace {

struct CodePoint {
  char32_t value;
  std::size_t begin;
  std::size_t end;
};

std::vector<CodePoint> decode_all(std::string_view text) {
  std::vector<CodePoint> out;
  out.reserve(text.size());
  for (std::size_t pos = 0; pos < text.size();) {
    const auto d = utf8::decode(text, pos);
    out.push_back({d.code_point, pos, pos + d.length});
    pos += d.length;
  }
  return out;
}

enum class Kind { space, punct, han, word };

Kind classify(char32_t cp, bool split_han) {
  if (utf8::is_space(cp)) return Kind::space;
  if (utf8::is_punct(cp)) return Kind::punct;
  if (split_han && utf8::is_han(cp)) return Kind::han;
  return Kind::word;
}

bool is_word_joiner(char32_t cp) {
  return cp == U'\'' || cp == U'-' || cp == 0x2019;
}

bool is_number_joiner(char32_t cp) { return cp == U'.' || cp == U','; }

}  // namespace

std::vector<Token> tokenize(std::string_view text, Language lang) {
  const bool split_han = script_of(lang) == Script::han;
  const auto cps = decode_all(text);
  std::vector<Kind> kinds(cps.size());
  for (std::size_t i = 0; i < cps.size(); ++i) {
    kinds[i] = classify(cps[i].value, split_han);
  }
  // Joiners between word characters are part of the word.
  for (std::size_t i = 1; i + 1 < cps.size(); ++i) {
    if (kinds[i] != Kind::punct) continue;
    if (kinds[i - 1] != Kind::word || kinds[i + 1] != Kind::word) continue;
    const char32_t cp = cps[i].value;
    if (is_word_joiner(cp) ||
        (is_number_joiner(cp) && utf8::is_digit(cps[i - 1].value) &&
         utf8::is_digit(cps[i + 1].value))) {
      kinds[i] = Kind::word;
    }
  }

  std::vector<Token> tokens;
  auto emit = [&](std::size_t first, std::size_t last) {
    const CharSpan span{cps[first].begin, cps[last].end};
    tokens.push_back(Token{std::string(text.substr(span.begin, span.end - span.begin)),
                           tokens.size(), span});
  };

  std::size_t i = 0;
  while (i < cps.size()) {
    switch (kinds[i]) {
      case Kind::space:
        ++i;
        break;
      case Kind::han:
        emit(i, i);
        ++i;
        break;
      case Kind::punct: {
        std::size_t j = i;
        if (cps[i].value == U'#') {
          while (j + 1 < cps.size() && cps[j + 1].value == U'#') ++j;
        }
        emit(i, j);
        i = j + 1;
        break;
      }
      case Kind::word: {
        std::size_t j = i;
        while (j + 1 < cps.size() && kinds[j + 1] == Kind::word) ++j;
        emit(i, j);
        i = j + 1;
        break;
      }
    }
  }
  return tokens;
}

std::string rebuild_text(std::string_view source, std::span<const Token> tokens,
                         const std::map<std::size_t, std::string>& replacements) {
  std::string out;
  out.reserve(source.size());
  std::size_t cursor = 0;
  for (const Token& token : tokens) {
    out.append(source.substr(cursor, token.span.begin - cursor));
    if (auto it = replacements.find(token.index); it != replacements.end()) {
      out.append(it->second);
    } else {
      out.append(token.surface);
    }
    cursor = token.span.end;
  }
  out.append(source.substr(cursor));
  return out;
}

bool is_punctuation(std::string_view surface) {
  if (surface.empty()) return false;
  for (std::size_t pos = 0; pos < surface.size();) {
    const auto d = utf8::decode(surface, pos);
    if (!utf8::is_punct(d.code_point)) return false;
    pos += d.length;
  }
  return true;
}

std::vector<std::string> surfaces(std::span<const Token> tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const Token& t : tokens) out.push_back(t.surface);
  return out;
}

}  // namespace cswkit
