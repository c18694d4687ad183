#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>

namespace cswkit {

/// The five supported languages.
enum class Language { en, ar, de, fr, zh };

enum class Script { latin, arabic, han };

inline constexpr std::array<Language, 5> kAllLanguages = {
    Language::en, Language::ar, Language::de, Language::fr, Language::zh};

Script script_of(Language lang) noexcept;

/// Two-letter code, e.g. "fr".
std::string_view code_of(Language lang) noexcept;

/// English name used inside prompts, e.g. "French".
std::string_view display_name(Language lang) noexcept;

std::optional<Language> try_parse_language(std::string_view code) noexcept;

/// Throws ValidationError for anything outside the supported set.
Language parse_language(std::string_view code);

}  // namespace cswkit
