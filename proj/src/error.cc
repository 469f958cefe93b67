#include "sportsnews/error.h"

namespace sportsnews {

const char *ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedRecord: return "MalformedRecord";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kMismatchedReport: return "MismatchedReport";
    case ErrorCode::kEmptyText: return "EmptyText";
    case ErrorCode::kModelNotTrained: return "ModelNotTrained";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kDegenerateLabels: return "DegenerateLabels";
    case ErrorCode::kServiceUnavailable: return "ServiceUnavailable";
    case ErrorCode::kProtocolError: return "ProtocolError";
    case ErrorCode::kItemFailure: return "ItemFailure";
    case ErrorCode::kEmptyCandidates: return "EmptyCandidates";
    case ErrorCode::kNoReferenceNews: return "NoReferenceNews";
    case ErrorCode::kMissingReference: return "MissingReference";
    case ErrorCode::kCountsExceedCorpus: return "CountsExceedCorpus";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

bool IsServiceError(ErrorCode code) {
  return code == ErrorCode::kServiceUnavailable ||
         code == ErrorCode::kProtocolError || code == ErrorCode::kItemFailure;
}

Error::Error(ErrorCode code, const std::string &message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

MalformedRecord::MalformedRecord(std::size_t line, const std::string &cause)
    : Error(ErrorCode::kMalformedRecord,
            "line " + std::to_string(line) + ": " + cause),
      line_(line),
      cause_(cause) {}

ItemFailure::ItemFailure(std::size_t index, const std::string &detail)
    : Error(ErrorCode::kItemFailure,
            "item " + std::to_string(index) + ": " + detail),
      index_(index) {}

}  // namespace sportsnews
