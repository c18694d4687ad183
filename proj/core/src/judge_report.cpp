#include "cswkit/judge_report.hpp"

#include <json.hpp>

#include "cswkit/parallel.hpp"

namespace cswkit {

std::string_view to_string(Outcome outcome) noexcept {
  switch (outcome) {
    case Outcome::A: return "A";
    case Outcome::B: return "B";
    case Outcome::tie: return "tie";
  }
  return "tie";
}

PreferenceReport aggregate_verdicts(std::span<const JudgedPair> verdicts, Language embedded_lang,
                                    const ComparisonNames& names) {
  if (verdicts.empty()) throw ValidationError("aggregate_verdicts: no verdicts");
  PreferenceReport report;
  report.config_a_name = names.config_a;
  report.config_b_name = names.config_b;
  report.embedded_lang = embedded_lang;
  for (const auto& v : verdicts) {
    ++report.n_total;
    switch (v.outcome) {
      case Outcome::A: ++report.n_a; break;
      case Outcome::B: ++report.n_b; break;
      case Outcome::tie: ++report.n_tie; break;
    }
  }
  const std::size_t decided = report.n_a + report.n_b;
  if (decided > 0) {
    report.rate_a = 100.0 * static_cast<double>(report.n_a) / static_cast<double>(decided);
    report.rate_b = 100.0 * static_cast<double>(report.n_b) / static_cast<double>(decided);
  }
  return report;
}

Outcome combine_flipped(Verdict original_order, Verdict flipped_order) {
  if (original_order != flipped_order) return Outcome::tie;
  return original_order == Verdict::A ? Outcome::A : Outcome::B;
}

PreferenceReport run_comparison(std::span<const ComparisonPair> pairs, Language embedded_lang,
                                LlmGateway& gateway, std::size_t sample_size,
                                const ComparisonNames& names, std::vector<JudgedPair>* details) {
  if (sample_size == 0) throw ValidationError("run_comparison: sample_size must be >= 1");
  if (pairs.size() < sample_size) {
    throw ValidationError("run_comparison: " + std::to_string(pairs.size()) +
                          " pairs available, sample_size is " + std::to_string(sample_size));
  }
  // Each pair issues two requests; the gateway bounds what is actually in flight.
  const auto judged = parallel_map(
      sample_size, gateway.options().concurrency, [&](std::size_t i) {
        const auto& p = pairs[i];
        try {
          const Verdict original = judge_pair(p.sentence_a, p.sentence_b, embedded_lang, gateway, false);
          const Verdict flipped = judge_pair(p.sentence_a, p.sentence_b, embedded_lang, gateway, true);
          return JudgedPair{p.pair_id, combine_flipped(original, flipped)};
        } catch (const Error& e) {
          throw Error("judging pair '" + p.pair_id + "': " + e.what());
        }
      });
  if (details) *details = judged;
  return aggregate_verdicts(judged, embedded_lang, names);
}

std::string to_json(const PreferenceReport& report, std::string_view config_hash) {
  nlohmann::ordered_json j;
  j["config_a_name"] = report.config_a_name;
  j["config_b_name"] = report.config_b_name;
  j["embedded_lang"] = code_of(report.embedded_lang);
  j["n_total"] = report.n_total;
  j["n_a"] = report.n_a;
  j["n_b"] = report.n_b;
  j["n_tie"] = report.n_tie;
  j["rate_a"] = report.rate_a ? nlohmann::ordered_json(*report.rate_a) : nullptr;
  j["rate_b"] = report.rate_b ? nlohmann::ordered_json(*report.rate_b) : nullptr;
  j["rates_undefined"] = report.rates_undefined();
  j["config_hash"] = config_hash;
  return j.dump(2);
}

}  // namespace cswkit
