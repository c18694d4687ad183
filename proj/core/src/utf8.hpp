#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace cswkit::utf8 {

struct Decoded {
  char32_t code_point;
  std::size_t length;  // bytes consumed, >= 1
};

/// Decodes the code point starting at `pos`. Malformed or truncated sequences
/// consume one byte and decode as U+FFFD.
Decoded decode(std::string_view text, std::size_t pos) noexcept;

bool is_space(char32_t cp) noexcept;
bool is_punct(char32_t cp) noexcept;
bool is_han(char32_t cp) noexcept;
bool is_digit(char32_t cp) noexcept;

/// ASCII-only lower-casing; other bytes pass through.
std::string ascii_lower(std::string_view text);

bool is_ascii(std::string_view text) noexcept;

}  // namespace cswkit::utf8
