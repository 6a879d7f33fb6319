#ifndef DCPROOF_ERROR_HPP
#define DCPROOF_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace dcproof {

enum class ErrorCode {
  // Input formats.
  kMalformedHeader,
  kLiteralAfterMissingTerminator,
  kMissingTerminator,
  kNonIntegerToken,
  kBadCubeFilename,
  kDuplicateVariableInCube,
  kDuplicateCube,
  kUnreadableProof,
  kManifestMismatch,
  kIoError,
  // Semantics.
  kInvalidLiteral,
  kPivotNotInClause,
  kEmptyBundle,
  kIncompletePartition,
  kMissingSibling,
  kInconsistentDecisionOrder,
  kNonPreservingInput,
  kInvalidSubProof,
  kInvalidInput,
  kTrimInternalMismatch,
  kResourceLimit,
  kDepthTooLarge,
  kGiveUp,
  kInvalidArgument,
};

std::string_view to_string(ErrorCode code);

// True for errors caused by the environment or malformed input files, which
// the command line maps to exit status 2. Everything else is a semantic
// failure (exit status 1).
bool is_environmental(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dcproof

#endif  // DCPROOF_ERROR_HPP
