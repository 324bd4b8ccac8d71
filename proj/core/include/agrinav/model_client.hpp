#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace agrinav {

struct ImagePayload {
  std::string media_type;  // e.g. "image/jpeg"
  std::vector<std::uint8_t> bytes;
};

struct ModelRequest {
  std::string system_text;
  std::string user_text;  // must be non-empty
  std::optional<ImagePayload> image;
  int max_reply_tokens = 512;
  double temperature = 0.0;
};

struct ModelReply {
  std::string text;
  std::int64_t latency_ms = 0;
  std::string backend_id;
};

struct RetryPolicy {
  int max_attempts = 3;
  std::int64_t base_backoff_ms = 500;   // doubled per attempt, full jitter
  std::int64_t request_timeout_ms = 60000;
};

// Backend abstraction for the decomposition and decision models. Instances
// are shared across concurrently running episodes and must be internally
// synchronized.
class ModelClient {
 public:
  virtual ~ModelClient() = default;
  virtual std::string id() const = 0;

  // Returns the first successful reply. Implementations retry on transient
  // failures (timeouts, connection errors, throttling) and fail fast on
  // authentication or malformed-request responses.
  virtual ModelReply complete(const ModelRequest& request, const RetryPolicy& retry) = 0;
};

// Deterministic scripted backend. Replies in script order, repeating the
// final entry once exhausted, and records every request for assertions.
class CannedClient : public ModelClient {
 public:
  explicit CannedClient(std::vector<std::string> script);

  std::string id() const override { return "canned"; }
  ModelReply complete(const ModelRequest& request, const RetryPolicy& retry) override;

  std::size_t call_count() const;
  std::vector<ModelRequest> requests() const;

 private:
  mutable std::mutex mutex_;
  std::vector<std::string> script_;
  std::size_t next_ = 0;
  std::vector<ModelRequest> requests_;
};

std::shared_ptr<ModelClient> canned_backend(std::vector<std::string> script);

// Wire encoding helpers for image parts.
std::string base64_encode(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> base64_decode(std::string_view encoded);

}  // namespace agrinav
