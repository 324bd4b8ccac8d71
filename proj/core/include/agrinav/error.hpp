#pragma once

#include <stdexcept>
#include <string>

namespace agrinav {

// One error class per failure category so callers (and tests) can tell
// rejection reasons apart without string matching.
enum class Errc {
  // annotation documents
  kMalformedDocument,
  kUnknownAction,
  kEmptyAnnotation,
  kIntervalOrder,        // t_start >= t_end
  kIntervalOverlap,
  kIntervalGap,
  kAdjacentDuplicateAction,
  // manifests, datasets, config files
  kMissingFile,
  kInvalidScene,
  kInvalidManifest,
  kInvalidConfig,
  // subtask lists and transitions
  kInvalidSubtaskList,
  kIllegalTransition,
  kValidationFailed,     // strict-mode principle violation
  // model backends
  kBackendExhausted,
  kAuthFailed,
  kOversizedImage,
  kUnparseableReply,
  // prompt templates
  kMissingPlaceholder,
  // command line
  kUsage,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace agrinav
