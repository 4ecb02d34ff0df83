#include "hype/error.hpp"

namespace hype {

const char* error_kind_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kParse: return "ParseError";
    case ErrorKind::kDuplicateEntry: return "DuplicateEntry";
    case ErrorKind::kTargetNotAdjective: return "TargetNotAdjective";
    case ErrorKind::kUnknownAdjective: return "UnknownAdjective";
    case ErrorKind::kMalformedDocument: return "MalformedDocument";
    case ErrorKind::kInsufficientClass: return "InsufficientClass";
    case ErrorKind::kEmptyTrainingSet: return "EmptyTrainingSet";
    case ErrorKind::kDimensionMismatch: return "DimensionMismatch";
    case ErrorKind::kUnreadableFile: return "UnreadableFile";
    case ErrorKind::kDegenerateData: return "DegenerateData";
    case ErrorKind::kLengthMismatch: return "LengthMismatch";
    case ErrorKind::kEmptyInput: return "EmptyInput";
    case ErrorKind::kNoOverlap: return "NoOverlap";
    case ErrorKind::kMissingPlaceholder: return "MissingPlaceholder";
    case ErrorKind::kEndpoint: return "EndpointError";
    case ErrorKind::kCacheCorruption: return "CacheCorruption";
    case ErrorKind::kCorruptLog: return "CorruptLog";
    case ErrorKind::kBind: return "BindError";
    case ErrorKind::kInvalidArgument: return "InvalidArgument";
    case ErrorKind::kConflict: return "Conflict";
    case ErrorKind::kNotFound: return "NotFound";
  }
  return "Error";
}

}  // namespace hype
