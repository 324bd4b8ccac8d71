#include "agrinav/http_client.hpp"

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <random>
#include <semaphore>
#include <thread>

#include "agrinav/error.hpp"
#include "httplib.h"
#include "json.hpp"

namespace agrinav {

using nlohmann::json;

namespace {

struct ParsedEndpoint {
  std::string base;         // scheme://host[:port] for the httplib client
  std::string path_prefix;  // leading path, without trailing slash
};

ParsedEndpoint parse_endpoint(const std::string& endpoint) {
  auto scheme_end = endpoint.find("://");
  if (scheme_end == std::string::npos) {
    throw Error(Errc::kInvalidConfig, "endpoint must include a scheme: " + endpoint);
  }
  auto path_start = endpoint.find('/', scheme_end + 3);
  ParsedEndpoint parsed;
  if (path_start == std::string::npos) {
    parsed.base = endpoint;
  } else {
    parsed.base = endpoint.substr(0, path_start);
    parsed.path_prefix = endpoint.substr(path_start);
    while (!parsed.path_prefix.empty() && parsed.path_prefix.back() == '/') {
      parsed.path_prefix.pop_back();
    }
  }
  return parsed;
}

bool retryable_status(int status) {
  return status == 429 || status == 500 || status == 502 || status == 503 || status == 504;
}

std::int64_t jittered_backoff_ms(std::int64_t base_ms, int attempt) {
  // full jitter: uniform over [0, base * 2^(attempt-1)]
  const std::int64_t cap = base_ms << std::min(attempt - 1, 20);
  thread_local std::mt19937_64 rng{std::random_device{}()};
  if (cap <= 0) return 0;
  return static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(cap + 1));
}

class HttpModelClient : public ModelClient {
 public:
  explicit HttpModelClient(HttpClientConfig config)
      : config_(std::move(config)),
        endpoint_(parse_endpoint(config_.endpoint)),
        limiter_(std::max(config_.max_concurrent_requests, 1)) {
    if (config_.model.empty()) {
      throw Error(Errc::kInvalidConfig, "model name is empty");
    }
  }

  std::string id() const override { return "http:" + config_.model; }

  ModelReply complete(const ModelRequest& request, const RetryPolicy& retry) override {
    if (request.user_text.empty()) {
      throw Error(Errc::kInvalidConfig, "request user_text is empty");
    }
    if (request.image && request.image->bytes.size() > config_.max_image_bytes) {
      throw Error(Errc::kOversizedImage,
                  "image payload of " + std::to_string(request.image->bytes.size()) +
                      " bytes exceeds the limit");
    }
    const std::string body = encode_body(request);
    const auto start = std::chrono::steady_clock::now();

    std::string last_failure = "no attempt made";
    for (int attempt = 1; attempt <= std::max(retry.max_attempts, 1); ++attempt) {
      if (attempt > 1) {
        std::this_thread::sleep_for(
            std::chrono::milliseconds(jittered_backoff_ms(retry.base_backoff_ms, attempt - 1)));
      }
      auto outcome = post_once(body, retry);
      if (outcome.reply) {
        outcome.reply->latency_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                        std::chrono::steady_clock::now() - start)
                                        .count();
        return *outcome.reply;
      }
      if (!outcome.retryable) {
        throw Error(outcome.auth_failure ? Errc::kAuthFailed : Errc::kBackendExhausted,
                    outcome.failure);
      }
      last_failure = outcome.failure;
    }
    throw Error(Errc::kBackendExhausted,
                "all " + std::to_string(retry.max_attempts) + " attempts failed; last: " +
                    last_failure);
  }

 private:
  struct AttemptOutcome {
    std::optional<ModelReply> reply;
    bool retryable = false;
    bool auth_failure = false;
    std::string failure;
  };

  std::string encode_body(const ModelRequest& request) const {
    json messages = json::array();
    if (!request.system_text.empty()) {
      messages.push_back({{"role", "system"}, {"content", request.system_text}});
    }
    if (request.image) {
      json parts = json::array();
      parts.push_back({{"type", "text"}, {"text", request.user_text}});
      const std::string data_uri = "data:" + request.image->media_type + ";base64," +
                                   base64_encode(request.image->bytes);
      parts.push_back({{"type", "image_url"}, {"image_url", {{"url", data_uri}}}});
      messages.push_back({{"role", "user"}, {"content", parts}});
    } else {
      messages.push_back({{"role", "user"}, {"content", request.user_text}});
    }
    json body = {{"model", config_.model},
                 {"messages", messages},
                 {"max_tokens", request.max_reply_tokens},
                 {"temperature", request.temperature}};
    return body.dump();
  }

  AttemptOutcome post_once(const std::string& body, const RetryPolicy& retry) {
    limiter_.acquire();
    struct Release {
      std::counting_semaphore<>& sem;
      ~Release() { sem.release(); }
    } release{limiter_};

    httplib::Client client(endpoint_.base);
    const auto timeout = std::chrono::milliseconds(retry.request_timeout_ms);
    client.set_connection_timeout(timeout);
    client.set_read_timeout(timeout);
    client.set_write_timeout(timeout);
    httplib::Headers headers;
    if (!config_.api_key.empty()) {
      headers.emplace("Authorization", "Bearer " + config_.api_key);
    }

    auto result = client.Post(endpoint_.path_prefix + "/chat/completions", headers, body,
                              "application/json");
    AttemptOutcome outcome;
    if (!result) {
      outcome.retryable = true;
      outcome.failure = "transport error: " + httplib::to_string(result.error());
      return outcome;
    }
    if (result->status == 200) {
      json doc = json::parse(result->body, nullptr, false);
      if (doc.is_discarded() || !doc.contains("choices") || !doc["choices"].is_array() ||
          doc["choices"].empty()) {
        outcome.failure = "response body is not a chat completion";
        return outcome;
      }
      const auto& choice = doc["choices"][0];
      if (!choice.contains("message") || !choice["message"].contains("content") ||
          !choice["message"]["content"].is_string()) {
        outcome.failure = "chat completion lacks message content";
        return outcome;
      }
      ModelReply reply;
      reply.text = choice["message"]["content"].get<std::string>();
      reply.backend_id = id();
      outcome.reply = std::move(reply);
      return outcome;
    }
    outcome.failure = "status " + std::to_string(result->status);
    if (result->status == 401 || result->status == 403) {
      outcome.auth_failure = true;
    } else if (retryable_status(result->status)) {
      outcome.retryable = true;
    }
    return outcome;
  }

  HttpClientConfig config_;
  ParsedEndpoint endpoint_;
  std::counting_semaphore<> limiter_;
};

}  // namespace

HttpClientConfig http_config_from_env() {
  HttpClientConfig config;
  const char* endpoint = std::getenv("MODEL_ENDPOINT");
  const char* model = std::getenv("MODEL_NAME");
  const char* key = std::getenv("MODEL_API_KEY");
  if (endpoint == nullptr || *endpoint == '\0') {
    throw Error(Errc::kInvalidConfig, "MODEL_ENDPOINT is not set");
  }
  if (key == nullptr || *key == '\0') {
    throw Error(Errc::kInvalidConfig, "MODEL_API_KEY is not set");
  }
  config.endpoint = endpoint;
  config.api_key = key;
  config.model = (model != nullptr && *model != '\0') ? model : "gpt-4.1-mini";
  return config;
}

std::shared_ptr<ModelClient> make_http_client(const HttpClientConfig& config) {
  return std::make_shared<HttpModelClient>(config);
}

}  // namespace agrinav
