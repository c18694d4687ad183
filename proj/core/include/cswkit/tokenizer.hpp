#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cswkit/language.hpp"

namespace cswkit {

/// Half-open byte range [begin, end) into the UTF-8 source text.
struct CharSpan {
  std::size_t begin = 0;
  std::size_t end = 0;

  friend bool operator==(const CharSpan&, const CharSpan&) = default;
};

struct Token {
  std::string surface;
  std::size_t index = 0;
  CharSpan span;

  friend bool operator==(const Token&, const Token&) = default;
};

/// Splits text into word and punctuation tokens.
///
/// Latin and Arabic script text splits on whitespace and detaches
/// punctuation; apostrophes and hyphens between word characters, and '.' or
/// ',' between digits, stay inside the word. Han script text additionally
/// yields one token per Han character, keeping runs of other word characters
/// (e.g. "NLP") whole. A run of '#' is a single token so placeholder masks
/// survive. Invalid UTF-8 bytes are treated as word characters.
std::vector<Token> tokenize(std::string_view text, Language lang);

/// Rebuilds text from its tokens, keeping the original separators between
/// them. Tokens whose index appears in `replacements` are written as the
/// mapped string instead of their surface.
std::string rebuild_text(std::string_view source, std::span<const Token> tokens,
                         const std::map<std::size_t, std::string>& replacements = {});

/// True when every code point of the token is punctuation.
bool is_punctuation(std::string_view surface);

std::vector<std::string> surfaces(std::span<const Token> tokens);

}  // namespace cswkit
