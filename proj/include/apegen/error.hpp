#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace apegen {

// Machine-greppable failure categories. The CLI prints the code name on the
// first line of every diagnostic.
enum class ErrorCode {
  kFileNotFound,
  kEmptyCorpus,
  kLineCountMismatch,
  kEmptyInput,
  kEmptyTrainingData,
  kUnknownTagInGold,
  kMissingFile,
  kParseError,
  kVocabTooSmall,
  kMissingResource,
  kIoError,
  kInvalidArgument,
};

std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace apegen
