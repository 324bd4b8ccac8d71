#include "agrinav/error.hpp"

namespace agrinav {

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::kMalformedDocument: return "malformed document";
    case Errc::kUnknownAction: return "unknown action";
    case Errc::kEmptyAnnotation: return "empty annotation";
    case Errc::kIntervalOrder: return "interval order";
    case Errc::kIntervalOverlap: return "interval overlap";
    case Errc::kIntervalGap: return "interval gap";
    case Errc::kAdjacentDuplicateAction: return "adjacent duplicate action";
    case Errc::kMissingFile: return "missing file";
    case Errc::kInvalidScene: return "invalid scene";
    case Errc::kInvalidManifest: return "invalid manifest";
    case Errc::kInvalidConfig: return "invalid config";
    case Errc::kInvalidSubtaskList: return "invalid subtask list";
    case Errc::kIllegalTransition: return "illegal transition";
    case Errc::kValidationFailed: return "validation failed";
    case Errc::kBackendExhausted: return "backend exhausted";
    case Errc::kAuthFailed: return "authentication failed";
    case Errc::kOversizedImage: return "oversized image";
    case Errc::kUnparseableReply: return "unparseable reply";
    case Errc::kMissingPlaceholder: return "missing placeholder";
    case Errc::kUsage: return "usage";
  }
  return "unknown error";
}

}  // namespace agrinav
