#include <cstdlib>

#include <httplib.h>
#include <json.hpp>

#include "cswkit/llm_gateway.hpp"

namespace cswkit {

using json = nlohmann::json;

HttpClientConfig http_config_from_env(std::string endpoint) {
  HttpClientConfig config;
  config.endpoint = std::move(endpoint);
  if (const char* key = std::getenv("CSW_LLM_API_KEY")) config.api_key = key;
  return config;
}

std::string build_chat_request_body(const LlmRequest& request) {
  json body = {{"model", request.model},
               {"messages", json::array({{{"role", "user"}, {"content", request.prompt}}})},
               {"temperature", request.temperature},
               {"max_tokens", request.max_tokens}};
  return body.dump();
}

std::string parse_chat_response_body(std::string_view body) {
  json value;
  try {
    value = json::parse(body);
    const auto& content = value.at("choices").at(0).at("message").at("content");
    if (!content.is_string()) throw TransportError("response content is not a string", 200, false);
    return content.get<std::string>();
  } catch (const json::exception& e) {
    throw TransportError(std::string("malformed chat response: ") + e.what(), 200, false);
  }
}

HttpChatClient::HttpChatClient(HttpClientConfig config) : config_(std::move(config)) {
  const auto scheme_end = config_.endpoint.find("://");
  if (scheme_end == std::string::npos) {
    throw ConfigError("endpoint", "expected scheme://host[:port]/path, got '" + config_.endpoint + "'");
  }
  const std::string scheme = config_.endpoint.substr(0, scheme_end);
  if (scheme != "http" && scheme != "https") {
    throw ConfigError("endpoint", "unsupported scheme '" + scheme + "'");
  }
  const auto path_begin = config_.endpoint.find('/', scheme_end + 3);
  if (path_begin == std::string::npos) {
    scheme_host_port_ = config_.endpoint;
    path_ = "/";
  } else {
    scheme_host_port_ = config_.endpoint.substr(0, path_begin);
    path_ = config_.endpoint.substr(path_begin);
  }
  if (scheme_host_port_.size() <= scheme_end + 3) {
    throw ConfigError("endpoint", "missing host in '" + config_.endpoint + "'");
  }
}

std::string HttpChatClient::complete(const LlmRequest& request) {
  httplib::Client client(scheme_host_port_);
  const auto timeout = std::chrono::duration_cast<std::chrono::seconds>(config_.timeout).count();
  client.set_connection_timeout(timeout, 0);
  client.set_read_timeout(timeout, 0);
  client.set_write_timeout(timeout, 0);
  httplib::Headers headers;
  if (!config_.api_key.empty()) headers.emplace("Authorization", "Bearer " + config_.api_key);
  auto result = client.Post(path_, headers, build_chat_request_body(request), "application/json");
  if (!result) {
    throw TransportError("request to " + scheme_host_port_ + " failed: " +
                             httplib::to_string(result.error()),
                         0, true);
  }
  const int status = result->status;
  if (status != 200) {
    const bool retryable = status == 429 || status >= 500;
    throw TransportError("HTTP " + std::to_string(status) + " from " + scheme_host_port_, status,
                         retryable);
  }
  return parse_chat_response_body(result->body);
}

}  // namespace cswkit
