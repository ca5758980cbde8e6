#include "apegen/error.hpp"

namespace apegen {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kFileNotFound: return "FileNotFound";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kLineCountMismatch: return "LineCountMismatch";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kEmptyTrainingData: return "EmptyTrainingData";
    case ErrorCode::kUnknownTagInGold: return "UnknownTagInGold";
    case ErrorCode::kMissingFile: return "MissingFile";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kVocabTooSmall: return "VocabTooSmall";
    case ErrorCode::kMissingResource: return "MissingResource";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

}  // namespace apegen
