#ifndef SPORTSNEWS_ERROR_H_
#define SPORTSNEWS_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sportsnews {

enum class ErrorCode {
  kMalformedRecord,
  kEmptyCorpus,
  kMismatchedReport,
  kEmptyText,
  kModelNotTrained,
  kIndexOutOfRange,
  kDegenerateLabels,
  kServiceUnavailable,
  kProtocolError,
  kItemFailure,
  kEmptyCandidates,
  kNoReferenceNews,
  kMissingReference,
  kCountsExceedCorpus,
  kInvalidConfig,
  kIo,
};

const char *ErrorCodeName(ErrorCode code);

// Services failures map to a distinct CLI exit code from data failures.
bool IsServiceError(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message);

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// A corpus line that could not be decoded. Line numbers are 1-based.
class MalformedRecord : public Error {
 public:
  MalformedRecord(std::size_t line, const std::string &cause);

  std::size_t line() const { return line_; }
  const std::string &cause() const { return cause_; }

 private:
  std::size_t line_;
  std::string cause_;
};

// A single item of a remote batch failed and no fallback was allowed.
class ItemFailure : public Error {
 public:
  ItemFailure(std::size_t index, const std::string &detail);

  std::size_t index() const { return index_; }

 private:
  std::size_t index_;
};

}  // namespace sportsnews

#endif  // SPORTSNEWS_ERROR_H_
