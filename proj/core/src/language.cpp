#include "cswkit/language.hpp"

#include "cswkit/errors.hpp"

namespace cswkit {

Script script_of(Language lang) noexcept {
  switch (lang) {
    case Language::ar: return Script::arabic;
    case Language::zh: return Script::han;
    default: return Script::latin;
  }
}

std::string_view code_of(Language lang) noexcept {
  switch (lang) {
    case Language::en: return "en";
    case Language::ar: return "ar";
    case Language::de: return "de";
    case Language::fr: return "fr";
    case Language::zh: return "zh";
  }
  return "??";
}

std::string_view display_name(Language lang) noexcept {
  switch (lang) {
    case Language::en: return "English";
    case Language::ar: return "Arabic";
    case Language::de: return "German";
    case Language::fr: return "French";
    case Language::zh: return "Chinese";
  }
  return "?";
}

std::optional<Language> try_parse_language(std::string_view code) noexcept {
  for (Language lang : kAllLanguages) {
    if (code_of(lang) == code) return lang;
  }
  return std::nullopt;
}

Language parse_language(std::string_view code) {
  if (auto lang = try_parse_language(code)) return *lang;
  throw ValidationError("unsupported language code '" + std::string(code) +
                        "' (expected one of en, ar, de, fr, zh)");
}

}  // namespace cswkit
