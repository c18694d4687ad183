#include "cswkit/switchgen.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "cswkit/errors.hpp"
#include "cswkit/rng.hpp"
#include "jsonl.hpp"
#include "utf8.hpp"

namespace cswkit {

namespace detail {
std::string_view embedded_default_stoplist();
}

std::string_view to_string(Method method) noexcept {
  switch (method) {
    case Method::noun_token: return "noun_token";
    case Method::ratio_token: return "ratio_token";
    case Method::extreme: return "extreme";
  }
  return "?";
}

Method parse_method(std::string_view name) {
  for (auto m : {Method::noun_token, Method::ratio_token, Method::extreme}) {
    if (to_string(m) == name) return m;
  }
  throw ValidationError("unknown method '" + std::string(name) +
                        "' (expected noun_token, ratio_token or extreme)");
}

std::string_view to_string(GenerationMode mode) noexcept {
  return mode == GenerationMode::deterministic ? "deterministic" : "llm_filled";
}

GenerationMode parse_generation_mode(std::string_view name) {
  if (name == "deterministic") return GenerationMode::deterministic;
  if (name == "llm_filled") return GenerationMode::llm_filled;
  throw ValidationError("unknown generation mode '" + std::string(name) +
                        "' (expected deterministic or llm_filled)");
}

std::size_t count_masks(std::string_view text) noexcept {
  std::size_t n = 0;
  for (auto pos = text.find(kMask); pos != std::string_view::npos;
       pos = text.find(kMask, pos + kMask.size())) {
    ++n;
  }
  return n;
}

void SwitchPlan::validate(std::size_t matrix_tokens) const {
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto& p = points[k];
    if (p.matrix_index >= matrix_tokens) {
      throw ValidationError("plan '" + pair_id + "': switch index " +
                            std::to_string(p.matrix_index) + " out of range for " +
                            std::to_string(matrix_tokens) + " tokens");
    }
    if (p.replacement.empty()) {
      throw ValidationError("plan '" + pair_id + "': empty replacement at index " +
                            std::to_string(p.matrix_index));
    }
    if (k > 0 && points[k - 1].matrix_index >= p.matrix_index) {
      throw ValidationError("plan '" + pair_id + "': points not strictly ascending");
    }
  }
}

std::string to_jsonl(const CswInstance& instance) {
  detail::json points = detail::json::array();
  for (const auto& p : instance.plan.points) {
    points.push_back({{"i", p.matrix_index},
                      {"lang", code_of(p.embedded_lang)},
                      {"repl", join_replacement(p.replacement, p.embedded_lang)}});
  }
  detail::json obj = {{"pair_id", instance.pair_id},
                      {"method", to_string(instance.plan.method)},
                      {"original_text", instance.original_text},
                      {"csw_text", instance.csw_text},
                      {"points", points},
                      {"seed", nullptr},
                      {"mode", to_string(instance.mode)}};
  if (instance.plan.seed) obj["seed"] = *instance.plan.seed;
  if (instance.plan.evenness_waived) obj["evenness_waived"] = true;
  return detail::dump_line(obj);
}

// --- stoplist ---------------------------------------------------------------

const Stoplist& Stoplist::builtin() {
  static const Stoplist list = [] {
    std::istringstream in{std::string(detail::embedded_default_stoplist())};
    return from_stream(in);
  }();
  return list;
}

Stoplist Stoplist::from_stream(std::istream& in) {
  Stoplist list;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    list.add(line);
  }
  return list;
}

Stoplist Stoplist::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open stoplist");
  return from_stream(in);
}

void Stoplist::add(std::string_view expression) {
  std::vector<std::string> words;
  for (const auto& t : tokenize(expression, Language::en)) {
    words.push_back(utf8::ascii_lower(t.surface));
  }
  if (words.empty()) return;
  if (std::find(expressions_.begin(), expressions_.end(), words) == expressions_.end()) {
    expressions_.push_back(std::move(words));
  }
}

void Stoplist::merge(const Stoplist& other) {
  for (const auto& e : other.expressions_) {
    if (std::find(expressions_.begin(), expressions_.end(), e) == expressions_.end()) {
      expressions_.push_back(e);
    }
  }
}

std::vector<bool> Stoplist::covered(std::span<const Token> tokens) const {
  std::vector<bool> out(tokens.size(), false);
  std::vector<std::string> lower;
  lower.reserve(tokens.size());
  for (const auto& t : tokens) lower.push_back(utf8::ascii_lower(t.surface));
  for (const auto& expr : expressions_) {
    if (expr.size() > lower.size()) continue;
    for (std::size_t start = 0; start + expr.size() <= lower.size(); ++start) {
      if (std::equal(expr.begin(), expr.end(), lower.begin() + static_cast<std::ptrdiff_t>(start))) {
        std::fill(out.begin() + static_cast<std::ptrdiff_t>(start),
                  out.begin() + static_cast<std::ptrdiff_t>(start + expr.size()), true);
      }
    }
  }
  return out;
}

// --- selection --------------------------------------------------------------

namespace {

// Embedded span for `matrix_index` under the noun rule's alignment
// conditions, or nullopt when ineligible.
std::optional<std::vector<std::string>> noun_replacement(std::size_t matrix_index,
                                                         const AlignmentSet& alignment,
                                                         std::span<const Token> embedded,
                                                         const std::vector<std::size_t>& owner) {
  const auto targets = alignment.targets_of(matrix_index);
  if (targets.empty()) return std::nullopt;
  for (std::size_t k = 1; k < targets.size(); ++k) {
    if (targets[k] != targets[k - 1] + 1) return std::nullopt;  // not contiguous
  }
  std::vector<std::string> replacement;
  bool all_punct = true;
  for (std::size_t j : targets) {
    if (owner[j] != matrix_index) return std::nullopt;  // shared with another token
    replacement.push_back(embedded[j].surface);
    all_punct = all_punct && is_punctuation(embedded[j].surface);
  }
  if (all_punct) return std::nullopt;
  return replacement;
}

constexpr std::size_t kNoOwner = static_cast<std::size_t>(-1);
constexpr std::size_t kShared = static_cast<std::size_t>(-2);

// owner[j]: the single matrix index linked to embedded token j, kNoOwner, or
// kShared when several matrix tokens link to it.
std::vector<std::size_t> embedded_owners(const AlignmentSet& alignment, std::size_t embedded_size) {
  std::vector<std::size_t> owner(embedded_size, kNoOwner);
  for (const auto& link : alignment.links) {
    auto& o = owner[link.embedded_index];
    o = (o == kNoOwner || o == link.matrix_index) ? link.matrix_index : kShared;
  }
  return owner;
}

void check_alignment(const std::string& pair_id, const AlignmentSet& alignment,
                     std::size_t matrix_size, std::size_t embedded_size) {
  try {
    alignment.validate(matrix_size, embedded_size);
  } catch (const ValidationError& e) {
    throw ValidationError("plan '" + pair_id + "': " + e.what());
  }
}

// Per-position eligible replacement for each language (nullopt = ineligible).
using Eligibility = std::vector<std::vector<std::optional<std::vector<std::string>>>>;

Eligibility noun_eligibility(const std::string& pair_id, std::span<const TaggedToken> matrix,
                             std::span<const EmbeddedSide> sides, const Stoplist& stoplist,
                             const NounOptions& options) {
  std::vector<Token> tokens;
  tokens.reserve(matrix.size());
  for (const auto& t : matrix) tokens.push_back(t.token);
  const auto stopped = stoplist.covered(tokens);

  Eligibility out(matrix.size());
  for (auto& row : out) row.resize(sides.size());
  for (std::size_t s = 0; s < sides.size(); ++s) {
    const auto& side = sides[s];
    if (!side.alignment) {
      throw ValidationError("plan '" + pair_id + "': no alignment for " +
                            std::string(code_of(side.lang)));
    }
    check_alignment(pair_id, *side.alignment, matrix.size(), side.tokens.size());
    const auto owner = embedded_owners(*side.alignment, side.tokens.size());
    for (std::size_t i = 0; i < matrix.size(); ++i) {
      if (!is_noun(matrix[i].pos, options.include_propn) || stopped[i]) continue;
      out[i][s] = noun_replacement(i, *side.alignment, side.tokens, owner);
    }
  }
  return out;
}

}  // namespace

SwitchPlan select_noun_switch_points(const std::string& pair_id,
                                     std::span<const TaggedToken> matrix,
                                     const AlignmentSet& alignment,
                                     std::span<const Token> embedded, const Stoplist& stoplist,
                                     const NounOptions& options) {
  const EmbeddedSide side{alignment.embedded_lang, &alignment, embedded};
  const auto eligible = noun_eligibility(pair_id, matrix, std::span(&side, 1), stoplist, options);
  SwitchPlan plan{pair_id, Method::noun_token, {}, std::nullopt, false};
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    if (eligible[i][0]) plan.points.push_back({i, alignment.embedded_lang, *eligible[i][0]});
  }
  return plan;
}

std::size_t ratio_switch_count(double ratio, std::size_t candidates) {
  if (candidates == 0) return 0;
  const auto k = static_cast<std::size_t>(std::llround(ratio * static_cast<double>(candidates)));
  return std::clamp<std::size_t>(k, 1, candidates);
}

SwitchPlan select_ratio_switch_points(const std::string& pair_id,
                                      std::span<const Token> matrix,
                                      const AlignmentSet& alignment,
                                      std::span<const Token> embedded, double ratio,
                                      std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio <= 1.0)) {
    throw ValidationError("ratio must be in (0, 1], got " + std::to_string(ratio));
  }
  check_alignment(pair_id, alignment, matrix.size(), embedded.size());
  std::vector<std::size_t> candidates;
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    if (is_punctuation(matrix[i].surface)) continue;
    if (!alignment.targets_of(i).empty()) candidates.push_back(i);
  }
  SwitchPlan plan{pair_id, Method::ratio_token, {}, seed, false};
  SeededRng rng(seed);
  auto chosen = rng.sample_indices(candidates.size(),
                                   ratio_switch_count(ratio, candidates.size()));
  std::sort(chosen.begin(), chosen.end());
  for (std::size_t c : chosen) {
    const std::size_t i = candidates[c];
    std::vector<std::string> replacement;
    for (std::size_t j : alignment.targets_of(i)) replacement.push_back(embedded[j].surface);
    plan.points.push_back({i, alignment.embedded_lang, std::move(replacement)});
  }
  return plan;
}

namespace {

// Hall's condition for assigning every remaining position to one of its
// eligible languages within per-language capacities: for every language
// subset S, positions whose eligible set lies inside S must fit in cap(S).
bool assignable(const std::vector<unsigned>& masks, std::size_t from,
                const std::vector<long>& capacity) {
  const std::size_t k = capacity.size();
  std::vector<long> count_by_mask(std::size_t{1} << k, 0);
  for (std::size_t p = from; p < masks.size(); ++p) ++count_by_mask[masks[p]];
  for (unsigned subset = 1; subset < (1u << k); ++subset) {
    long need = 0, cap = 0;
    for (unsigned m = 1; m < (1u << k); ++m) {
      if ((m & ~subset) == 0) need += count_by_mask[m];
    }
    for (std::size_t l = 0; l < k; ++l) {
      if (subset & (1u << l)) cap += capacity[l];
    }
    if (need > cap) return false;
  }
  return true;
}

// Whether some balanced final count vector (each language gets q or q+1)
// remains reachable from the current counts.
bool balanced_reachable(const std::vector<unsigned>& masks, std::size_t from,
                        const std::vector<long>& assigned) {
  const std::size_t k = assigned.size();
  const long total = static_cast<long>(masks.size());
  const long q = total / static_cast<long>(k);
  const long r = total % static_cast<long>(k);
  for (unsigned extra = 0; extra < (1u << k); ++extra) {
    if (std::popcount(extra) != r) continue;
    std::vector<long> capacity(k);
    bool ok = true;
    for (std::size_t l = 0; l < k && ok; ++l) {
      capacity[l] = q + ((extra >> l) & 1u) - assigned[l];
      ok = capacity[l] >= 0;
    }
    if (ok && assignable(masks, from, capacity)) return true;
  }
  return false;
}

}  // namespace

SwitchPlan select_extreme_switch_points(const std::string& pair_id,
                                        std::span<const TaggedToken> matrix,
                                        std::span<const EmbeddedSide> sides,
                                        const Stoplist& stoplist, const NounOptions& options) {
  if (sides.size() < 2) {
    throw ValidationError("extreme switching needs at least two embedded languages");
  }
  if (sides.size() > 16) throw ValidationError("extreme switching supports at most 16 languages");
  const auto eligible = noun_eligibility(pair_id, matrix, sides, stoplist, options);
  const std::size_t k = sides.size();

  std::vector<std::size_t> positions;
  std::vector<unsigned> masks;
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    unsigned mask = 0;
    for (std::size_t l = 0; l < k; ++l) {
      if (eligible[i][l]) mask |= 1u << l;
    }
    if (mask) {
      positions.push_back(i);
      masks.push_back(mask);
    }
  }

  SwitchPlan plan{pair_id, Method::extreme, {}, std::nullopt, false};
  std::vector<long> assigned(k, 0);
  const bool balanceable = balanced_reachable(masks, 0, assigned);
  plan.evenness_waived = !balanceable || positions.size() < k;

  std::size_t next = 0;  // round-robin pointer
  for (std::size_t p = 0; p < positions.size(); ++p) {
    std::optional<std::size_t> pick;
    for (std::size_t step = 0; step < k && !pick; ++step) {
      const std::size_t l = (next + step) % k;
      if (!(masks[p] & (1u << l))) continue;
      if (balanceable) {
        ++assigned[l];
        const bool ok = balanced_reachable(masks, p + 1, assigned);
        --assigned[l];
        if (!ok) continue;
      }
      pick = l;
    }
    // Unreachable when balanceable; kept so the loop is total.
    if (!pick) continue;
    ++assigned[*pick];
    next = (*pick + 1) % k;
    const std::size_t i = positions[p];
    plan.points.push_back({i, sides[*pick].lang, *eligible[i][*pick]});
  }
  return plan;
}

// --- application ------------------------------------------------------------

std::string join_replacement(std::span<const std::string> tokens, Language lang) {
  const char* sep = script_of(lang) == Script::han ? "" : " ";
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += sep;
    out += tokens[i];
  }
  return out;
}

CswInstance apply_switch_plan(std::string_view source, std::span<const Token> matrix,
                              const SwitchPlan& plan) {
  plan.validate(matrix.size());
  std::map<std::size_t, std::string> replacements;
  for (const auto& p : plan.points) {
    replacements.emplace(p.matrix_index, join_replacement(p.replacement, p.embedded_lang));
  }
  return CswInstance{plan.pair_id, std::string(source), rebuild_text(source, matrix, replacements),
                     plan, GenerationMode::deterministic};
}

std::string mask_placeholders(std::string_view source, std::span<const Token> matrix,
                              const SwitchPlan& plan) {
  std::map<std::size_t, std::string> replacements;
  for (const auto& p : plan.points) {
    if (p.matrix_index >= matrix.size()) {
      throw ValidationError("plan '" + plan.pair_id + "': switch index out of range");
    }
    replacements.emplace(p.matrix_index, std::string(kMask));
  }
  return rebuild_text(source, matrix, replacements);
}

}  // namespace cswkit
