#include "cswkit/align.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>

#include "cswkit/errors.hpp"
#include "jsonl.hpp"
#include "utf8.hpp"

namespace cswkit {

using detail::json;

double TranslationTable::prob(std::string_view matrix_word, std::string_view embedded_word) const {
  const Row* r = row(matrix_word);
  if (!r) return 0.0;
  auto it = r->find(utf8::ascii_lower(embedded_word));
  return it == r->end() ? 0.0 : it->second;
}

const TranslationTable::Row* TranslationTable::row(std::string_view matrix_word) const {
  auto it = rows_.find(utf8::ascii_lower(matrix_word));
  return it == rows_.end() ? nullptr : &it->second;
}

namespace {

struct IndexedCorpus {
  std::vector<std::vector<std::size_t>> matrix;
  std::vector<std::vector<std::size_t>> embedded;
  std::vector<std::string> matrix_vocab;
  std::vector<std::string> embedded_vocab;
};

void check_corpus(std::span<const TokenizedPair> corpus) {
  if (corpus.empty()) throw ValidationError("aligner: empty corpus");
  for (const auto& pair : corpus) {
    if (pair.matrix.empty() || pair.embedded.empty()) {
      throw ValidationError("aligner: pair '" + pair.id + "' has a sentence with zero tokens");
    }
  }
}

IndexedCorpus index_corpus(std::span<const TokenizedPair> corpus) {
  IndexedCorpus out;
  std::unordered_map<std::string, std::size_t> m_ids, e_ids;
  auto intern = [](std::unordered_map<std::string, std::size_t>& ids,
                   std::vector<std::string>& vocab, const std::string& word) {
    auto [it, inserted] = ids.try_emplace(utf8::ascii_lower(word), vocab.size());
    if (inserted) vocab.push_back(it->first);
    return it->second;
  };
  for (const auto& pair : corpus) {
    auto& m = out.matrix.emplace_back();
    for (const auto& w : pair.matrix) m.push_back(intern(m_ids, out.matrix_vocab, w));
    auto& e = out.embedded.emplace_back();
    for (const auto& w : pair.embedded) e.push_back(intern(e_ids, out.embedded_vocab, w));
  }
  return out;
}

// Sparse t(e|m): one hash row per matrix word keyed by embedded word id.
using SparseTable = std::vector<std::unordered_map<std::size_t, double>>;

double log_likelihood(const IndexedCorpus& c, const SparseTable& t) {
  double total = 0.0;
  for (std::size_t s = 0; s < c.matrix.size(); ++s) {
    const auto& m = c.matrix[s];
    for (std::size_t e : c.embedded[s]) {
      double sum = 0.0;
      for (std::size_t mi : m) sum += t[mi].at(e);
      total += std::log(sum / static_cast<double>(m.size()));
    }
  }
  return total;
}

}  // namespace

Ibm1Model train_ibm1(std::span<const TokenizedPair> corpus, int iterations) {
  if (iterations < 1) throw ValidationError("train_ibm1: iterations must be >= 1");
  check_corpus(corpus);
  const IndexedCorpus c = index_corpus(corpus);

  const double uniform = 1.0 / static_cast<double>(c.embedded_vocab.size());
  SparseTable t(c.matrix_vocab.size());
  for (std::size_t s = 0; s < c.matrix.size(); ++s) {
    for (std::size_t mi : c.matrix[s]) {
      for (std::size_t e : c.embedded[s]) t[mi].emplace(e, uniform);
    }
  }

  Ibm1Model model;
  model.log_likelihood.push_back(log_likelihood(c, t));
  SparseTable counts(t.size());
  std::vector<double> totals(t.size());
  for (int it = 0; it < iterations; ++it) {
    for (std::size_t mi = 0; mi < t.size(); ++mi) {
      counts[mi].clear();
      totals[mi] = 0.0;
    }
    // E-step: each embedded token distributes one unit of mass over the
    // matrix tokens of its sentence.
    for (std::size_t s = 0; s < c.matrix.size(); ++s) {
      const auto& m = c.matrix[s];
      for (std::size_t e : c.embedded[s]) {
        double z = 0.0;
        for (std::size_t mi : m) z += t[mi].at(e);
        for (std::size_t mi : m) {
          const double p = t[mi].at(e) / z;
          counts[mi][e] += p;
          totals[mi] += p;
        }
      }
    }
    // M-step
    for (std::size_t mi = 0; mi < t.size(); ++mi) {
      for (auto& [e, value] : t[mi]) value = counts[mi][e] / totals[mi];
    }
    model.log_likelihood.push_back(log_likelihood(c, t));
  }

  auto& rows = model.table.mutable_rows();
  for (std::size_t mi = 0; mi < t.size(); ++mi) {
    auto& row = rows[c.matrix_vocab[mi]];
    for (const auto& [e, value] : t[mi]) row.emplace(c.embedded_vocab[e], value);
  }
  return model;
}

double ibm1_log_likelihood(std::span<const TokenizedPair> corpus, const TranslationTable& table) {
  double total = 0.0;
  for (const auto& pair : corpus) {
    for (const auto& e : pair.embedded) {
      double sum = 0.0;
      for (const auto& m : pair.matrix) sum += table.prob(m, e);
      total += std::log(sum / static_cast<double>(pair.matrix.size()));
    }
  }
  return total;
}

double DiceTable::score(std::string_view matrix_word, std::string_view embedded_word) const {
  auto it = scores_.find(std::pair{utf8::ascii_lower(matrix_word), utf8::ascii_lower(embedded_word)});
  return it == scores_.end() ? 0.0 : it->second;
}

DiceTable dice_scores(std::span<const TokenizedPair> corpus) {
  if (corpus.empty()) throw ValidationError("dice_scores: empty corpus");
  std::map<std::string, std::size_t> m_count, e_count;
  std::map<std::pair<std::string, std::string>, std::size_t> cooc;
  for (const auto& pair : corpus) {
    std::set<std::string> ms, es;
    for (const auto& w : pair.matrix) ms.insert(utf8::ascii_lower(w));
    for (const auto& w : pair.embedded) es.insert(utf8::ascii_lower(w));
    for (const auto& m : ms) ++m_count[m];
    for (const auto& e : es) ++e_count[e];
    for (const auto& m : ms) {
      for (const auto& e : es) ++cooc[{m, e}];
    }
  }
  DiceTable table;
  for (const auto& [key, n] : cooc) {
    table.scores_.emplace(key, 2.0 * static_cast<double>(n) /
                                   static_cast<double>(m_count[key.first] + e_count[key.second]));
  }
  return table;
}

std::vector<std::size_t> AlignmentSet::targets_of(std::size_t matrix_index) const {
  std::vector<std::size_t> out;
  auto lo = std::lower_bound(links.begin(), links.end(), matrix_index,
                             [](const AlignmentLink& l, std::size_t i) { return l.matrix_index < i; });
  for (; lo != links.end() && lo->matrix_index == matrix_index; ++lo) {
    out.push_back(lo->embedded_index);
  }
  return out;
}

void AlignmentSet::validate(std::size_t matrix_tokens, std::size_t embedded_tokens) const {
  for (const auto& link : links) {
    if (link.matrix_index >= matrix_tokens || link.embedded_index >= embedded_tokens) {
      throw ValidationError("alignment for pair '" + pair_id + "': link " +
                            std::to_string(link.matrix_index) + "-" +
                            std::to_string(link.embedded_index) + " out of range for " +
                            std::to_string(matrix_tokens) + "x" +
                            std::to_string(embedded_tokens) + " tokens");
    }
    if (!std::isfinite(link.score)) {
      throw ValidationError("alignment for pair '" + pair_id + "': non-finite score");
    }
  }
}

AlignmentSet align_pair(std::string pair_id, Language embedded_lang,
                        std::span<const std::string> matrix,
                        std::span<const std::string> embedded, const LexicalScorer& scorer,
                        const AlignOptions& options) {
  AlignmentSet set{std::move(pair_id), embedded_lang, {}};
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    double best = -1.0;
    std::size_t best_j = 0;
    for (std::size_t j = 0; j < embedded.size(); ++j) {
      const double s = scorer.score(matrix[i], embedded[j]);
      if (s > best) {
        best = s;
        best_j = j;
      }
    }
    if (best > options.threshold) set.links.push_back({i, best_j, best});
  }
  return set;
}

std::vector<AlignmentLink> parse_pharaoh(std::string_view text) {
  std::vector<AlignmentLink> links;
  std::istringstream in{std::string(text)};
  std::string item;
  while (in >> item) {
    const auto dash = item.find('-');
    std::size_t i = 0, j = 0;
    const char* begin = item.data();
    const char* end = item.data() + item.size();
    bool ok = dash != std::string::npos && dash > 0 && dash + 1 < item.size();
    if (ok) {
      auto r1 = std::from_chars(begin, begin + dash, i);
      auto r2 = std::from_chars(begin + dash + 1, end, j);
      ok = r1.ec == std::errc{} && r1.ptr == begin + dash && r2.ec == std::errc{} && r2.ptr == end;
    }
    if (!ok) throw ValidationError("malformed Pharaoh link '" + item + "'");
    links.push_back({i, j, 1.0});
  }
  std::sort(links.begin(), links.end(), [](const AlignmentLink& a, const AlignmentLink& b) {
    return std::pair(a.matrix_index, a.embedded_index) < std::pair(b.matrix_index, b.embedded_index);
  });
  links.erase(std::unique(links.begin(), links.end(),
                          [](const AlignmentLink& a, const AlignmentLink& b) {
                            return a.matrix_index == b.matrix_index &&
                                   a.embedded_index == b.embedded_index;
                          }),
              links.end());
  return links;
}

std::string to_pharaoh(std::span<const AlignmentLink> links) {
  std::string out;
  for (const auto& link : links) {
    if (!out.empty()) out.push_back(' ');
    out += std::to_string(link.matrix_index) + "-" + std::to_string(link.embedded_index);
  }
  return out;
}

std::vector<AlignmentSet> parse_external_alignments(std::istream& in,
                                                    const std::string& source_name,
                                                    const TokenCounts* counts) {
  std::vector<AlignmentSet> sets;
  detail::for_each_jsonl(in, source_name, [&](const json& obj, std::size_t) {
    AlignmentSet set;
    set.pair_id = detail::require_string(obj, "pair_id");
    set.embedded_lang = parse_language(detail::require_string(obj, "embedded_lang"));
    try {
      set.links = parse_pharaoh(detail::require_string(obj, "links"));
    } catch (const ValidationError& e) {
      throw ValidationError("pair '" + set.pair_id + "': " + e.what());
    }
    if (counts) {
      if (auto it = counts->find({set.pair_id, set.embedded_lang}); it != counts->end()) {
        set.validate(it->second.first, it->second.second);
      }
    }
    sets.push_back(std::move(set));
  });
  return sets;
}

std::vector<AlignmentSet> load_external_alignments(const std::filesystem::path& path,
                                                   const TokenCounts* counts) {
  auto in = detail::open_input(path);
  return parse_external_alignments(in, path.string(), counts);
}

std::string to_jsonl(const AlignmentSet& set) {
  return detail::dump_line({{"pair_id", set.pair_id},
                            {"embedded_lang", code_of(set.embedded_lang)},
                            {"links", to_pharaoh(set.links)}});
}

}  // namespace cswkit
