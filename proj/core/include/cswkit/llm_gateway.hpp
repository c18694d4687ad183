#pragma once

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cswkit/corpus.hpp"
#include "cswkit/errors.hpp"
#include "cswkit/language.hpp"
#include "cswkit/switchgen.hpp"

namespace cswkit {

struct LlmRequest {
  std::string model;
  std::string prompt;
  double temperature = 0.0;
  int max_tokens = 1024;
};

struct LlmResponse {
  std::string text;
  double latency_ms = 0.0;
  /// 1-based attempt number that produced this response.
  int attempts = 1;
};

/// A single request/response exchange with a chat-completion service.
/// Implementations throw TransportError on failure and must be safe to call
/// from several threads.
class ChatClient {
 public:
  virtual ~ChatClient() = default;
  virtual std::string complete(const LlmRequest& request) = 0;
};

/// Test double answering through a callback.
class StubChatClient final : public ChatClient {
 public:
  using Handler = std::function<std::string(const LlmRequest&)>;
  explicit StubChatClient(Handler handler) : handler_(std::move(handler)) {}

  std::string complete(const LlmRequest& request) override {
    std::lock_guard lock(mutex_);
    requests_.push_back(request);
    return handler_(request);
  }

  std::vector<LlmRequest> requests() const {
    std::lock_guard lock(mutex_);
    return requests_;
  }

 private:
  Handler handler_;
  mutable std::mutex mutex_;
  std::vector<LlmRequest> requests_;
};

struct HttpClientConfig {
  /// e.g. "https://llm.example.com/v1/chat/completions"
  std::string endpoint;
  /// Sent as "Authorization: Bearer <key>" when non-empty.
  std::string api_key;
  std::chrono::seconds timeout{120};
};

/// Reads the bearer token from CSW_LLM_API_KEY.
HttpClientConfig http_config_from_env(std::string endpoint);

/// JSON request body: {"model","messages":[{"role":"user","content"}],
/// "temperature","max_tokens"}.
std::string build_chat_request_body(const LlmRequest& request);

/// Extracts choices[0].message.content; throws TransportError (not
/// retryable) when the body has another shape.
std::string parse_chat_response_body(std::string_view body);

/// Chat-completion client over HTTP(S). 429, 5xx and connection failures are
/// retryable TransportErrors; other non-200 statuses are not.
class HttpChatClient final : public ChatClient {
 public:
  explicit HttpChatClient(HttpClientConfig config);
  std::string complete(const LlmRequest& request) override;

 private:
  HttpClientConfig config_;
  std::string scheme_host_port_;
  std::string path_;
};

struct RetryPolicy {
  int max_retries = 2;
  std::chrono::milliseconds base_delay{500};
  std::chrono::milliseconds max_delay{8000};

  /// Delay before attempt `attempt` (2-based): base * 2^(attempt-2), capped.
  std::chrono::milliseconds delay_before(int attempt) const;
};

struct GatewayOptions {
  std::string generator_model = "generator";
  std::string judge_model = "judge";
  RetryPolicy retry;
  /// Maximum requests in flight across all threads.
  int concurrency = 4;
  double temperature = 0.0;
  int max_tokens = 1024;
  /// JSONL audit trail: one line per request (prompt hash, latency, attempt).
  std::optional<std::filesystem::path> audit_log;
};

/// Shared front end to a ChatClient: bounded concurrency, retries with
/// exponential backoff, request counting and auditing.
class LlmGateway {
 public:
  LlmGateway(std::shared_ptr<ChatClient> client, GatewayOptions options);

  const GatewayOptions& options() const noexcept { return options_; }
  std::uint64_t request_count() const noexcept { return requests_.load(); }

  /// Exactly one request. Throws TransportError.
  LlmResponse send(const std::string& model, const std::string& prompt, std::string_view purpose,
                   int attempt = 1);

  /// Sends up to 1 + max_retries requests until `accept` returns a value.
  /// Retryable transport errors back off exponentially; a rejected reply
  /// (nullopt) retries at once. When attempts run out, the last transport
  /// error is rethrown, or `on_exhausted(last_reply)` is called, which must
  /// throw.
  template <class T>
  T request(const std::string& model, const std::string& prompt, std::string_view purpose,
            const std::function<std::optional<T>(const std::string&)>& accept,
            const std::function<void(const std::string&)>& on_exhausted) {
    const int attempts = 1 + std::max(0, options_.retry.max_retries);
    std::string last_reply;
    std::optional<TransportError> last_error;
    for (int attempt = 1; attempt <= attempts; ++attempt) {
      if (attempt > 1 && last_error) backoff(attempt);
      try {
        const LlmResponse response = send(model, prompt, purpose, attempt);
        last_error.reset();
        last_reply = response.text;
        if (auto value = accept(response.text)) return std::move(*value);
      } catch (const TransportError& e) {
        if (!e.retryable()) throw;
        last_error = e;
      }
    }
    if (last_error) throw *last_error;
    on_exhausted(last_reply);
    throw InvalidOutputError("LLM output rejected after retries", last_reply);
  }

 private:
  void backoff(int attempt) const;
  void acquire();
  void release();
  void audit(std::string_view model, std::string_view purpose, const std::string& prompt,
             double latency_ms, int attempt, std::string_view status);

  std::shared_ptr<ChatClient> client_;
  GatewayOptions options_;
  std::atomic<std::uint64_t> requests_{0};
  std::mutex slot_mutex_;
  std::condition_variable slot_cv_;
  int in_flight_ = 0;
  std::mutex audit_mutex_;
  std::ofstream audit_;
};

/// Keeps the reply from the first line that contains a mask or shares at
/// least half of the reference tokens; earlier lines (preamble) and trailing
/// blank or code-fence lines are dropped. A reply with a single content
/// line is kept as is. nullopt otherwise.
std::optional<std::string> normalize_output(std::string_view reply,
                                            std::span<const std::string> reference_tokens);

struct LlmCswOptions {
  /// noun_token: the model marks nouns (step 1). ratio_token: placeholders
  /// are drawn at random over non-punctuation tokens.
  Method method = Method::noun_token;
  double ratio = 0.2;
  std::uint64_t seed = 0;
};

/// Two-step LLM generation: placeholder marking, then an independent filling
/// request that sees only the placeholder text and the translation. The
/// plan's points are recovered by aligning the intermediate and final texts
/// with the source. Throws ResidualMaskError when masks survive every
/// filling attempt, InvalidOutputError for unusable replies, ValidationError
/// when the translation is missing.
CswInstance llm_generate_csw(const ParallelPair& pair, Language embedded_lang, LlmGateway& gateway,
                             const LlmCswOptions& options = {});

enum class Verdict { A, B };

std::string_view to_string(Verdict v) noexcept;

/// Trimmed, case-folded reply; the first standalone "a" or "b" wins.
std::optional<Verdict> parse_verdict(std::string_view reply);

/// Asks the judge which sentence is better. With `flip`, the sentences are
/// shown in swapped positions and the verdict is mapped back, so the result
/// always refers to the caller's (a, b). Throws InvalidVerdictError.
Verdict judge_pair(std::string_view sentence_a, std::string_view sentence_b,
                   Language embedded_lang, LlmGateway& gateway, bool flip);

/// Mitigation instruction for the item's benchmark, a newline, then the
/// formatted item.
std::string prepend_mitigation(const BenchmarkItem& item, Language embedded_lang);

}  // namespace cswkit
