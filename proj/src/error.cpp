#include "dcproof/error.hpp"

namespace dcproof {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedHeader: return "MalformedHeader";
    case ErrorCode::kLiteralAfterMissingTerminator:
      return "LiteralAfterMissingTerminator";
    case ErrorCode::kMissingTerminator: return "MissingTerminator";
    case ErrorCode::kNonIntegerToken: return "NonIntegerToken";
    case ErrorCode::kBadCubeFilename: return "BadCubeFilename";
    case ErrorCode::kDuplicateVariableInCube: return "DuplicateVariableInCube";
    case ErrorCode::kDuplicateCube: return "DuplicateCube";
    case ErrorCode::kUnreadableProof: return "UnreadableProof";
    case ErrorCode::kManifestMismatch: return "ManifestMismatch";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kInvalidLiteral: return "InvalidLiteral";
    case ErrorCode::kPivotNotInClause: return "PivotNotInClause";
    case ErrorCode::kEmptyBundle: return "EmptyBundle";
    case ErrorCode::kIncompletePartition: return "IncompletePartition";
    case ErrorCode::kMissingSibling: return "MissingSibling";
    case ErrorCode::kInconsistentDecisionOrder:
      return "InconsistentDecisionOrder";
    case ErrorCode::kNonPreservingInput: return "NonPreservingInput";
    case ErrorCode::kInvalidSubProof: return "InvalidSubProof";
    case ErrorCode::kInvalidInput: return "InvalidInput";
    case ErrorCode::kTrimInternalMismatch: return "TrimInternalMismatch";
    case ErrorCode::kResourceLimit: return "ResourceLimit";
    case ErrorCode::kDepthTooLarge: return "DepthTooLarge";
    case ErrorCode::kGiveUp: return "GiveUp";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

bool is_environmental(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedHeader:
    case ErrorCode::kLiteralAfterMissingTerminator:
    case ErrorCode::kMissingTerminator:
    case ErrorCode::kNonIntegerToken:
    case ErrorCode::kBadCubeFilename:
    case ErrorCode::kDuplicateVariableInCube:
    case ErrorCode::kDuplicateCube:
    case ErrorCode::kUnreadableProof:
    case ErrorCode::kManifestMismatch:
    case ErrorCode::kIoError:
    case ErrorCode::kInvalidLiteral:
      return true;
    default:
      return false;
  }
}

}  // namespace dcproof
