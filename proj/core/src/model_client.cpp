#include "agrinav/model_client.hpp"

#include <algorithm>
#include <array>

#include "agrinav/error.hpp"

namespace agrinav {

CannedClient::CannedClient(std::vector<std::string> script) : script_(std::move(script)) {
  if (script_.empty()) {
    throw Error(Errc::kInvalidConfig, "canned backend needs a non-empty script");
  }
}

ModelReply CannedClient::complete(const ModelRequest& request, const RetryPolicy&) {
  if (request.user_text.empty()) {
    throw Error(Errc::kInvalidConfig, "request user_text is empty");
  }
  std::lock_guard<std::mutex> lock(mutex_);
  requests_.push_back(request);
  const std::string& text = script_[std::min(next_, script_.size() - 1)];
  ++next_;
  return ModelReply{text, 0, id()};
}

std::size_t CannedClient::call_count() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return requests_.size();
}

std::vector<ModelRequest> CannedClient::requests() const {
  std::lock_guard<std::mutex> lock(mutex_);
  return requests_;
}

std::shared_ptr<ModelClient> canned_backend(std::vector<std::string> script) {
  return std::make_shared<CannedClient>(std::move(script));
}

static const char kBase64Alphabet[] =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

std::string base64_encode(const std::vector<std::uint8_t>& bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  while (i + 2 < bytes.size()) {
    std::uint32_t chunk = (bytes[i] << 16) | (bytes[i + 1] << 8) | bytes[i + 2];
    out.push_back(kBase64Alphabet[(chunk >> 18) & 0x3F]);
    out.push_back(kBase64Alphabet[(chunk >> 12) & 0x3F]);
    out.push_back(kBase64Alphabet[(chunk >> 6) & 0x3F]);
    out.push_back(kBase64Alphabet[chunk & 0x3F]);
    i += 3;
  }
  const std::size_t rest = bytes.size() - i;
  if (rest == 1) {
    std::uint32_t chunk = bytes[i] << 16;
    out.push_back(kBase64Alphabet[(chunk >> 18) & 0x3F]);
    out.push_back(kBase64Alphabet[(chunk >> 12) & 0x3F]);
    out.push_back('=');
    out.push_back('=');
  } else if (rest == 2) {
    std::uint32_t chunk = (bytes[i] << 16) | (bytes[i + 1] << 8);
    out.push_back(kBase64Alphabet[(chunk >> 18) & 0x3F]);
    out.push_back(kBase64Alphabet[(chunk >> 12) & 0x3F]);
    out.push_back(kBase64Alphabet[(chunk >> 6) & 0x3F]);
    out.push_back('=');
  }
  return out;
}

std::vector<std::uint8_t> base64_decode(std::string_view encoded) {
  std::array<int, 256> lookup;
  lookup.fill(-1);
  for (int i = 0; i < 64; ++i) {
    lookup[static_cast<unsigned char>(kBase64Alphabet[i])] = i;
  }
  std::vector<std::uint8_t> out;
  out.reserve(encoded.size() / 4 * 3);
  std::uint32_t buffer = 0;
  int bits = 0;
  for (char c : encoded) {
    if (c == '=' || c == '\n' || c == '\r') continue;
    int value = lookup[static_cast<unsigned char>(c)];
    if (value < 0) {
      throw Error(Errc::kMalformedDocument, "invalid base64 character");
    }
    buffer = (buffer << 6) | static_cast<std::uint32_t>(value);
    bits += 6;
    if (bits >= 8) {
      bits -= 8;
      out.push_back(static_cast<std::uint8_t>((buffer >> bits) & 0xFF));
    }
  }
  return out;
}

}  // namespace agrinav
