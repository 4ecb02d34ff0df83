#pragma once

#include <stdexcept>
#include <string>

namespace hype {

// Every failure the library reports is an Error carrying one of these kinds.
// The CLI maps kinds to exit codes; the annotation service maps them to HTTP
// statuses.
enum class ErrorKind {
  kParse,
  kDuplicateEntry,
  kTargetNotAdjective,
  kUnknownAdjective,
  kMalformedDocument,
  kInsufficientClass,
  kEmptyTrainingSet,
  kDimensionMismatch,
  kUnreadableFile,
  kDegenerateData,
  kLengthMismatch,
  kEmptyInput,
  kNoOverlap,
  kMissingPlaceholder,
  kEndpoint,
  kCacheCorruption,
  kCorruptLog,
  kBind,
  kInvalidArgument,
  kConflict,
  kNotFound,
};

const char* error_kind_name(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(error_kind_name(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace hype
