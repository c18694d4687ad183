#include "cswkit/llm_gateway.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <thread>

#include "cswkit/hashing.hpp"
#include "cswkit/prompts.hpp"
#include "cswkit/rng.hpp"
#include "cswkit/tokenizer.hpp"
#include "jsonl.hpp"
#include "utf8.hpp"

namespace cswkit {

std::chrono::milliseconds RetryPolicy::delay_before(int attempt) const {
  if (attempt <= 1) return std::chrono::milliseconds{0};
  auto delay = base_delay;
  for (int i = 2; i < attempt && delay < max_delay; ++i) delay *= 2;
  return std::min(delay, max_delay);
}

LlmGateway::LlmGateway(std::shared_ptr<ChatClient> client, GatewayOptions options)
    : client_(std::move(client)), options_(std::move(options)) {
  if (!client_) throw ValidationError("LlmGateway: null client");
  if (options_.concurrency < 1) throw ValidationError("LlmGateway: concurrency must be >= 1");
  if (options_.retry.max_retries < 0) throw ValidationError("LlmGateway: max_retries must be >= 0");
  if (options_.audit_log) {
    audit_.open(*options_.audit_log, std::ios::app);
    if (!audit_) throw Error("cannot open audit log " + options_.audit_log->string());
  }
}

void LlmGateway::acquire() {
  std::unique_lock lock(slot_mutex_);
  slot_cv_.wait(lock, [&] { return in_flight_ < options_.concurrency; });
  ++in_flight_;
}

void LlmGateway::release() {
  {
    std::lock_guard lock(slot_mutex_);
    --in_flight_;
  }
  slot_cv_.notify_one();
}

void LlmGateway::backoff(int attempt) const {
  const auto delay = options_.retry.delay_before(attempt);
  if (delay.count() > 0) std::this_thread::sleep_for(delay);
}

void LlmGateway::audit(std::string_view model, std::string_view purpose, const std::string& prompt,
                       double latency_ms, int attempt, std::string_view status) {
  if (!audit_.is_open()) return;
  const std::string line = detail::dump_line({{"model", model},
                                              {"purpose", purpose},
                                              {"prompt_sha256", sha256_hex(prompt)},
                                              {"latency_ms", latency_ms},
                                              {"attempt", attempt},
                                              {"status", status}});
  std::lock_guard lock(audit_mutex_);
  audit_ << line << '\n';
  audit_.flush();
}

LlmResponse LlmGateway::send(const std::string& model, const std::string& prompt,
                             std::string_view purpose, int attempt) {
  const LlmRequest request{model, prompt, options_.temperature, options_.max_tokens};
  acquire();
  ++requests_;
  const auto start = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
        .count();
  };
  try {
    std::string text = client_->complete(request);
    release();
    const double ms = elapsed();
    audit(model, purpose, prompt, ms, attempt, "ok");
    return LlmResponse{std::move(text), ms, attempt};
  } catch (const TransportError& e) {
    release();
    audit(model, purpose, prompt, elapsed(), attempt,
          "transport_error:" + std::to_string(e.status()));
    throw;
  } catch (...) {
    release();
    throw;
  }
}

// --- output normalisation ---------------------------------------------------

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto nl = text.find('\n', start);
    const auto end = nl == std::string_view::npos ? text.size() : nl;
    lines.emplace_back(text.substr(start, end - start));
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  return lines;
}

bool is_fence_or_blank(const std::string& line) {
  const auto t = trim(line);
  return t.empty() || t.starts_with("```");
}

double overlap_fraction(std::string_view line, std::span<const std::string> reference) {
  if (reference.empty()) return 0.0;
  std::map<std::string, int> ref;
  for (const auto& r : reference) ++ref[r];
  std::size_t hits = 0;
  for (const auto& t : tokenize(line, Language::en)) {
    auto it = ref.find(t.surface);
    if (it != ref.end() && it->second > 0) {
      --it->second;
      ++hits;
    }
  }
  return static_cast<double>(hits) / static_cast<double>(reference.size());
}

}  // namespace

std::optional<std::string> normalize_output(std::string_view reply,
                                            std::span<const std::string> reference_tokens) {
  auto lines = split_lines(reply);
  std::size_t first = lines.size();
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (is_fence_or_blank(lines[i])) continue;
    if (count_masks(lines[i]) > 0 || overlap_fraction(lines[i], reference_tokens) >= 0.5) {
      first = i;
      break;
    }
  }
  if (first == lines.size()) {
    // A lone content line is the answer itself, e.g. a fully switched sentence.
    std::optional<std::size_t> only;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      if (is_fence_or_blank(lines[i])) continue;
      if (only) return std::nullopt;
      only = i;
    }
    if (!only) return std::nullopt;
    first = *only;
  }
  std::size_t last = lines.size();
  while (last > first + 1 && is_fence_or_blank(lines[last - 1])) --last;
  std::string out;
  for (std::size_t i = first; i < last; ++i) {
    if (i > first) out.push_back('\n');
    out += lines[i];
  }
  out = trim(out);
  if (out.empty()) return std::nullopt;
  return out;
}

// --- two-step generation ----------------------------------------------------

namespace {

// Alignment anchors between two token sequences, as index pairs (ia, ib) in
// increasing order. Equal tokens score 2 and become anchors; a mask in `a`
// may absorb one token of `b` for a score of 1, which steers repeated words
// toward the alignment that leaves room for every mask.
std::vector<std::pair<std::size_t, std::size_t>> lcs_anchors(const std::vector<std::string>& a,
                                                             const std::vector<std::string>& b) {
  const std::size_t n = a.size(), m = b.size();
  auto exact = [&](std::size_t i, std::size_t j) { return a[i] == b[j] && a[i] != kMask; };
  auto soft = [&](std::size_t i, std::size_t j) { return a[i] == kMask && b[j] != kMask; };
  std::vector<std::vector<std::uint32_t>> dp(n + 1, std::vector<std::uint32_t>(m + 1, 0));
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = m; j-- > 0;) {
      std::uint32_t best = std::max(dp[i + 1][j], dp[i][j + 1]);
      if (exact(i, j)) best = std::max(best, dp[i + 1][j + 1] + 2);
      if (soft(i, j)) best = std::max(best, dp[i + 1][j + 1] + 1);
      dp[i][j] = best;
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> anchors;
  std::size_t i = 0, j = 0;
  while (i < n && j < m) {
    if (exact(i, j) && dp[i][j] == dp[i + 1][j + 1] + 2) {
      anchors.emplace_back(i++, j++);
    } else if (soft(i, j) && dp[i][j] == dp[i + 1][j + 1] + 1) {
      ++i;
      ++j;
    } else if (dp[i + 1][j] >= dp[i][j + 1]) {
      ++i;
    } else {
      ++j;
    }
  }
  return anchors;
}

struct Gap {
  std::size_t a_begin, a_end, b_begin, b_end;
};

std::vector<Gap> gaps_between(const std::vector<std::pair<std::size_t, std::size_t>>& anchors,
                              std::size_t n, std::size_t m) {
  std::vector<Gap> gaps;
  std::size_t pa = 0, pb = 0;
  for (const auto& [ia, ib] : anchors) {
    if (ia > pa || ib > pb) gaps.push_back({pa, ia, pb, ib});
    pa = ia + 1;
    pb = ib + 1;
  }
  if (n > pa || m > pb) gaps.push_back({pa, n, pb, m});
  return gaps;
}

// For each mask in `masked`, the tokens of `other` that stand in its place.
// `other` is the source sentence (step 1) or the filled sentence (step 2).
std::vector<std::vector<std::string>> tokens_under_masks(const std::vector<std::string>& masked,
                                                         const std::vector<std::string>& other,
                                                         std::vector<std::size_t>* other_first) {
  std::vector<std::vector<std::string>> out;
  const auto gaps = gaps_between(lcs_anchors(masked, other), masked.size(), other.size());
  for (const auto& g : gaps) {
    std::vector<std::size_t> masks;
    for (std::size_t i = g.a_begin; i < g.a_end; ++i) {
      if (masked[i] == kMask) masks.push_back(i);
    }
    if (masks.empty()) continue;
    const std::size_t width = g.b_end - g.b_begin;
    std::size_t cursor = g.b_begin;
    for (std::size_t k = 0; k < masks.size(); ++k) {
      std::size_t take;
      if (width == masks.size()) {
        take = 1;
      } else if (k + 1 == masks.size()) {
        take = g.b_end - std::min(cursor, g.b_end);
      } else {
        take = cursor < g.b_end ? 1 : 0;
      }
      std::vector<std::string> span;
      if (other_first) other_first->push_back(cursor);
      for (std::size_t t = 0; t < take && cursor < g.b_end; ++t) span.push_back(other[cursor++]);
      out.push_back(std::move(span));
    }
  }
  return out;
}

}  // namespace

CswInstance llm_generate_csw(const ParallelPair& pair, Language embedded_lang, LlmGateway& gateway,
                             const LlmCswOptions& options) {
  const std::string* translation = pair.translation(embedded_lang);
  if (!translation) {
    throw ValidationError("pair '" + pair.id + "' has no " + std::string(code_of(embedded_lang)) +
                          " translation");
  }
  if (options.method == Method::extreme) {
    throw ValidationError("LLM generation supports noun_token and ratio_token only");
  }
  const auto matrix_tokens = tokenize(pair.matrix_text, pair.matrix_lang);
  const auto reference = surfaces(matrix_tokens);
  const std::string& model = gateway.options().generator_model;

  SwitchPlan plan{pair.id, options.method, {}, std::nullopt, false};
  std::string placeholder_text;
  std::vector<std::size_t> masked_indices;

  if (options.method == Method::noun_token) {
    const std::string step1 = render(TemplateId::identify_nouns, {{"text", pair.matrix_text}});
    placeholder_text = gateway.request<std::string>(
        model, step1, "identify_nouns",
        [&](const std::string& reply) { return normalize_output(reply, reference); },
        [&](const std::string& reply) {
          throw InvalidOutputError("pair '" + pair.id + "': unusable placeholder output", reply);
        });
    const auto masked = surfaces(tokenize(placeholder_text, Language::en));
    std::vector<std::size_t> first;
    tokens_under_masks(masked, reference, &first);
    masked_indices = std::move(first);
  } else {
    const std::uint64_t seed =
        derive_seed(options.seed, pair.id + "/" + std::string(code_of(embedded_lang)));
    std::vector<std::size_t> candidates;
    for (const auto& t : matrix_tokens) {
      if (!is_punctuation(t.surface)) candidates.push_back(t.index);
    }
    if (!(options.ratio > 0.0 && options.ratio <= 1.0)) {
      throw ValidationError("ratio must be in (0, 1]");
    }
    SeededRng rng(seed);
    auto chosen = rng.sample_indices(candidates.size(),
                                     ratio_switch_count(options.ratio, candidates.size()));
    std::sort(chosen.begin(), chosen.end());
    for (std::size_t c : chosen) masked_indices.push_back(candidates[c]);
    std::map<std::size_t, std::string> masks;
    for (std::size_t i : masked_indices) masks.emplace(i, std::string(kMask));
    placeholder_text = rebuild_text(pair.matrix_text, matrix_tokens, masks);
    plan.seed = seed;
  }

  const TemplateId fill_id =
      options.method == Method::noun_token ? TemplateId::fill_placeholders : TemplateId::fill_ratio;
  const std::string step2 = render(fill_id, {{"target_language", std::string(display_name(embedded_lang))},
                                             {"placeholder_text", placeholder_text},
                                             {"target_text", *translation}});
  std::string last_filled;
  const std::string filled = gateway.request<std::string>(
      model, step2, to_string(fill_id),
      [&](const std::string& reply) -> std::optional<std::string> {
        auto text = normalize_output(reply, reference);
        last_filled = text.value_or(reply);
        if (!text || count_masks(*text) > 0) return std::nullopt;
        return text;
      },
      [&](const std::string&) {
        if (count_masks(last_filled) > 0) {
          throw ResidualMaskError("pair '" + pair.id + "': placeholders remain after filling",
                                  placeholder_text, last_filled);
        }
        throw InvalidOutputError("pair '" + pair.id + "': unusable filled output", last_filled);
      });

  const auto masked = surfaces(tokenize(placeholder_text, Language::en));
  const auto fills = tokens_under_masks(masked, surfaces(tokenize(filled, Language::en)), nullptr);
  for (std::size_t k = 0; k < masked_indices.size() && k < fills.size(); ++k) {
    if (fills[k].empty()) continue;
    if (!plan.points.empty() && plan.points.back().matrix_index >= masked_indices[k]) continue;
    plan.points.push_back({masked_indices[k], embedded_lang, fills[k]});
  }
  return CswInstance{pair.id, pair.matrix_text, filled, std::move(plan),
                     GenerationMode::llm_filled};
}

// --- judging ----------------------------------------------------------------

std::string_view to_string(Verdict v) noexcept { return v == Verdict::A ? "A" : "B"; }

std::optional<Verdict> parse_verdict(std::string_view reply) {
  const std::string text = utf8::ascii_lower(trim(reply));
  auto is_word = [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
  };
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (c != 'a' && c != 'b') continue;
    const bool left = i == 0 || !is_word(text[i - 1]);
    const bool right = i + 1 == text.size() || !is_word(text[i + 1]);
    if (left && right) return c == 'a' ? Verdict::A : Verdict::B;
  }
  return std::nullopt;
}

Verdict judge_pair(std::string_view sentence_a, std::string_view sentence_b,
                   Language embedded_lang, LlmGateway& gateway, bool flip) {
  if (sentence_a.empty() || sentence_b.empty()) {
    throw ValidationError("judge_pair: both sentences must be non-empty");
  }
  const std::string_view first = flip ? sentence_b : sentence_a;
  const std::string_view second = flip ? sentence_a : sentence_b;
  const std::string prompt =
      render(TemplateId::judge_pairwise, {{"second_language", std::string(display_name(embedded_lang))},
                                          {"sentence_one", std::string(first)},
                                          {"sentence_two", std::string(second)}});
  const Verdict shown = gateway.request<Verdict>(
      gateway.options().judge_model, prompt, "judge_pairwise",
      [](const std::string& reply) { return parse_verdict(reply); },
      [](const std::string& reply) {
        throw InvalidVerdictError("judge reply contains neither A nor B", reply);
      });
  if (!flip) return shown;
  return shown == Verdict::A ? Verdict::B : Verdict::A;
}

std::string prepend_mitigation(const BenchmarkItem& item, Language embedded_lang) {
  TemplateId id;
  switch (item.benchmark_id) {
    case BenchmarkId::belebele: id = TemplateId::mitigate_belebele; break;
    case BenchmarkId::mmlu: id = TemplateId::mitigate_mmlu; break;
    case BenchmarkId::xnli: id = TemplateId::mitigate_xnli; break;
    default: throw ValidationError("no mitigation prompt for this benchmark");
  }
  return render(id, {{"language", std::string(display_name(embedded_lang))}}) + "\n" +
         format_item(item);
}

}  // namespace cswkit
