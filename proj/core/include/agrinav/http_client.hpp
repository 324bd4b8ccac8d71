#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "agrinav/model_client.hpp"

namespace agrinav {

// Hosted chat-completions backend. Any service speaking the ubiquitous
// POST /chat/completions shape works; endpoint and model name are config.
struct HttpClientConfig {
  std::string endpoint;  // e.g. "https://api.example.com/v1"
  std::string model;
  std::string api_key;   // sent as a bearer token, never logged
  std::size_t max_image_bytes = 20 * 1024 * 1024;
  int max_concurrent_requests = 4;
};

// Reads MODEL_ENDPOINT, MODEL_NAME, MODEL_API_KEY. Throws
// Error(kInvalidConfig) when endpoint or key is missing.
HttpClientConfig http_config_from_env();

std::shared_ptr<ModelClient> make_http_client(const HttpClientConfig& config);

}  // namespace agrinav
