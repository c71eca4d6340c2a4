#include "mirage/error.hpp"

namespace mirage {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::FormatError: return "FormatError";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::RosterMismatch: return "RosterMismatch";
    case ErrorCode::NotYourTurn: return "NotYourTurn";
    case ErrorCode::UnknownTarget: return "UnknownTarget";
    case ErrorCode::UnknownLocation: return "UnknownLocation";
    case ErrorCode::IncompleteVotes: return "IncompleteVotes";
    case ErrorCode::MissingContextField: return "MissingContextField";
    case ErrorCode::ParseFailure: return "ParseFailure";
    case ErrorCode::RerunExhausted: return "RerunExhausted";
    case ErrorCode::PlaybookExhausted: return "PlaybookExhausted";
    case ErrorCode::BackendUnavailable: return "BackendUnavailable";
    case ErrorCode::AuthError: return "AuthError";
    case ErrorCode::TimeoutError: return "TimeoutError";
    case ErrorCode::InvalidLevel: return "InvalidLevel";
    case ErrorCode::SelfScoring: return "SelfScoring";
    case ErrorCode::SummarizerFailure: return "SummarizerFailure";
    case ErrorCode::NoObservations: return "NoObservations";
    case ErrorCode::NoCluesDefined: return "NoCluesDefined";
    case ErrorCode::EmptyReconstruction: return "EmptyReconstruction";
    case ErrorCode::CulpritNotRanked: return "CulpritNotRanked";
    case ErrorCode::ItemSetMismatch: return "ItemSetMismatch";
    case ErrorCode::CorruptTranscript: return "CorruptTranscript";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::StorageError: return "StorageError";
  }
  return "UnknownError";
}

}  // namespace mirage
