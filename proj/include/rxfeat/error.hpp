#pragma once

#include <stdexcept>
#include <string>

namespace rxfeat {

enum class ErrorCode {
  Io,
  DuplicateId,
  NoRecords,
  InvalidPolicy,
  CompileFailed,
  EmptyCorpus,
  AllPatternsRejected,
  EmptyColumn,
  EmptyDataset,
  UnlabeledSample,
  UnknownGenerator,
  InvalidArgument,
  DimensionMismatch,
  FingerprintMismatch,
  LabelOutOfRange,
  LengthMismatch,
  RankZero,
  AllNoise,
  Format,
};

const char* to_string(ErrorCode code);

/// Data-level failure. The CLI maps every Error to exit code 2.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rxfeat
