#ifndef ISPO_CORE_ERROR_H_
#define ISPO_CORE_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace ispo {

enum class ErrorCode {
  kEmptyLabel,
  kEmptyText,
  kUnknownParent,
  kUnknownConcept,
  kUnknownAtom,
  kUnknownSource,
  kDuplicateRootLabel,
  kCycle,
  kHierarchyConflict,
  kHasChildren,
  kPreferredAtom,
  kInvalidStore,
  kParseError,
  kInvariantViolation,
  kDuplicateId,
  kMissingSampleSize,
  kNegativeCount,
  kEmptyOntology,
  kDanglingXref,
  kConflictingXref,
  kNoLabels,
  kEmptyCorpus,
  kMissingPatientIds,
  kAmbiguousTerm,
  kSharedSynonym,
  kDuplicateRule,
  kUnresolvedRuleTarget,
  kEmptyGold,
  kTooFewAnnotators,
  kEmptyTerms,
  kUnknownTask,
  kNotAssigned,
  kAlreadyVoted,
  kTaskClosed,
  kVotesPending,
  kNotResolved,
  kUnknownReviewer,
  kGapInLog,
  kReplayMismatch,
  kEmptyQuery,
  kUnknownScopeRoot,
  kCorruptStore,
  kAddressInUse,
  kInvalidArgument,
  kIoError,
};

// Stable name used in error payloads and CLI output, e.g. "CycleError".
std::string_view ErrorName(ErrorCode code);

// All library failures are reported as ispo::Error. Parse failures carry the
// 1-based line number of the offending input line (0 when not applicable).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string &message, int line = 0);

  ErrorCode code() const { return code_; }
  int line() const { return line_; }
  const std::string &reason() const { return reason_; }

 private:
  ErrorCode code_;
  int line_;
  std::string reason_;
};

}  // namespace ispo

#endif  // ISPO_CORE_ERROR_H_
