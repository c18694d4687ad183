#pragma once

// Random fixture generators shared by the property tests and the acceptance
// runner. All draws go through std::mt19937_64 with explicit seeds.

#include <algorithm>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "cswkit/align.hpp"
#include "cswkit/switchgen.hpp"
#include "cswkit/tagger.hpp"
#include "cswkit/tokenizer.hpp"

namespace fixtures {

inline const std::vector<std::string>& english_words() {
  static const std::vector<std::string> w = {
      "house", "tree", "river", "teacher", "book", "city", "market", "window", "child", "road",
      "the", "a", "of", "in", "is", "was", "quickly", "red", "green", "runs", "Paris", "Maria",
      "and", "with", "old", "new", "sees", "takes", "garden", "table"};
  return w;
}

inline const std::vector<std::string>& embedded_words() {
  static const std::vector<std::string> w = {
      "بيت", "شجرة", "نهر", "معلم", "كتاب", "مدينة", "سوق", "نافذة", "طفل", "طريق",
      "maison", "arbre", "fleuve", "livre", "ville", "Haus", "Baum", "Buch", "Stadt", "在"};
  return w;
}

inline const std::vector<cswkit::Pos>& all_pos() {
  static const std::vector<cswkit::Pos> p = {
      cswkit::Pos::NOUN, cswkit::Pos::PROPN, cswkit::Pos::VERB, cswkit::Pos::ADJ,
      cswkit::Pos::DET,  cswkit::Pos::PRON,  cswkit::Pos::ADP,  cswkit::Pos::NUM,
      cswkit::Pos::OTHER};
  return p;
}

struct TaggedFixture {
  std::string text;
  std::vector<cswkit::Token> tokens;
  std::vector<cswkit::TaggedToken> tagged;
  std::string embedded_text;
  std::vector<cswkit::Token> embedded;
  cswkit::AlignmentSet alignment;
};

template <class T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

inline std::string join_words(const std::vector<std::string>& words) {
  std::string out;
  for (const auto& w : words) {
    if (!out.empty()) out += ' ';
    out += w;
  }
  return out;
}

// A sentence with random tags (punctuation tagged PUNCT) and a random
// alignment that mixes 1:1, 1:many, many:1, non-contiguous and missing links.
inline TaggedFixture random_tagged(std::mt19937_64& rng) {
  TaggedFixture f;
  const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 14)(rng);
  std::vector<std::string> words;
  for (std::size_t i = 0; i < n; ++i) words.push_back(pick(rng, english_words()));
  if (rng() % 2) words.push_back(".");
  f.text = join_words(words);
  f.tokens = cswkit::tokenize(f.text, cswkit::Language::en);
  for (const auto& t : f.tokens) {
    const cswkit::Pos pos =
        cswkit::is_punctuation(t.surface) ? cswkit::Pos::PUNCT : pick(rng, all_pos());
    f.tagged.push_back({t, pos});
  }

  const std::size_t m = std::uniform_int_distribution<std::size_t>(1, 16)(rng);
  std::vector<std::string> emb;
  for (std::size_t j = 0; j < m; ++j) emb.push_back(rng() % 8 == 0 ? "،" : pick(rng, embedded_words()));
  f.embedded_text = join_words(emb);
  f.embedded = cswkit::tokenize(f.embedded_text, cswkit::Language::ar);

  f.alignment.pair_id = "fx";
  f.alignment.embedded_lang = cswkit::Language::ar;
  for (std::size_t i = 0; i < f.tokens.size(); ++i) {
    const auto links = std::uniform_int_distribution<int>(0, 3)(rng);
    for (int l = 0; l < links; ++l) {
      const std::size_t j = std::uniform_int_distribution<std::size_t>(0, f.embedded.size() - 1)(rng);
      f.alignment.links.push_back({i, j, 1.0});
    }
  }
  std::sort(f.alignment.links.begin(), f.alignment.links.end(), [](const auto& a, const auto& b) {
    return std::tie(a.matrix_index, a.embedded_index) < std::tie(b.matrix_index, b.embedded_index);
  });
  f.alignment.links.erase(std::unique(f.alignment.links.begin(), f.alignment.links.end()),
                          f.alignment.links.end());
  return f;
}

struct ExtremeFixture {
  std::string text;
  std::vector<cswkit::TaggedToken> tagged;
  std::vector<cswkit::Language> langs;
  std::vector<std::vector<cswkit::Token>> embedded;
  std::vector<cswkit::AlignmentSet> alignments;
};

// Every noun position is eligible in every language: each language's
// translation has one word per matrix token, linked 1:1.
inline ExtremeFixture random_full_eligibility(std::mt19937_64& rng) {
  static const std::vector<cswkit::Language> pool = {cswkit::Language::ar, cswkit::Language::de,
                                                     cswkit::Language::fr, cswkit::Language::zh};
  ExtremeFixture f;
  std::vector<cswkit::Language> langs = pool;
  std::shuffle(langs.begin(), langs.end(), rng);
  langs.resize(std::uniform_int_distribution<std::size_t>(2, pool.size())(rng));
  f.langs = langs;

  const std::size_t n = std::uniform_int_distribution<std::size_t>(1, 16)(rng);
  std::vector<std::string> words;
  std::vector<cswkit::Pos> tags;
  for (std::size_t i = 0; i < n; ++i) {
    const bool noun = rng() % 3 != 0;
    words.push_back(noun ? "house" : "the");
    tags.push_back(noun ? cswkit::Pos::NOUN : cswkit::Pos::DET);
  }
  f.text = join_words(words);
  const auto tokens = cswkit::tokenize(f.text, cswkit::Language::en);
  for (std::size_t i = 0; i < tokens.size(); ++i) f.tagged.push_back({tokens[i], tags[i]});

  for (cswkit::Language lang : langs) {
    std::vector<std::string> emb;
    for (std::size_t i = 0; i < n; ++i) emb.push_back("w" + std::to_string(i));
    f.embedded.push_back(cswkit::tokenize(join_words(emb), lang));
    cswkit::AlignmentSet a{"fx", lang, {}};
    for (std::size_t i = 0; i < n; ++i) a.links.push_back({i, i, 1.0});
    f.alignments.push_back(a);
  }
  return f;
}

inline std::vector<cswkit::EmbeddedSide> sides_of(const ExtremeFixture& f) {
  std::vector<cswkit::EmbeddedSide> sides;
  for (std::size_t k = 0; k < f.langs.size(); ++k) {
    sides.push_back({f.langs[k], &f.alignments[k], f.embedded[k]});
  }
  return sides;
}

}  // namespace fixtures
