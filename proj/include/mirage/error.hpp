#pragma once

#include <stdexcept>
#include <string>

namespace mirage {

enum class ErrorCode {
  IoError,
  FormatError,
  SchemaViolation,
  RosterMismatch,
  NotYourTurn,
  UnknownTarget,
  UnknownLocation,
  IncompleteVotes,
  MissingContextField,
  ParseFailure,
  RerunExhausted,
  PlaybookExhausted,
  BackendUnavailable,
  AuthError,
  TimeoutError,
  InvalidLevel,
  SelfScoring,
  SummarizerFailure,
  NoObservations,
  NoCluesDefined,
  EmptyReconstruction,
  CulpritNotRanked,
  ItemSetMismatch,
  CorruptTranscript,
  ConfigError,
  StorageError,
};

const char* error_code_name(ErrorCode code);

/// All failures in this library are reported as Error with a machine-checkable
/// code; the what() string carries the human-readable locus.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace mirage
