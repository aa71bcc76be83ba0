#include "ispo/core/error.h"

namespace ispo {

std::string_view ErrorName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kEmptyLabel: return "EmptyLabel";
    case ErrorCode::kEmptyText: return "EmptyText";
    case ErrorCode::kUnknownParent: return "UnknownParent";
    case ErrorCode::kUnknownConcept: return "UnknownConcept";
    case ErrorCode::kUnknownAtom: return "UnknownAtom";
    case ErrorCode::kUnknownSource: return "UnknownSource";
    case ErrorCode::kDuplicateRootLabel: return "DuplicateRootLabel";
    case ErrorCode::kCycle: return "CycleError";
    case ErrorCode::kHierarchyConflict: return "HierarchyConflict";
    case ErrorCode::kHasChildren: return "HasChildren";
    case ErrorCode::kPreferredAtom: return "PreferredAtom";
    case ErrorCode::kInvalidStore: return "InvalidStore";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kInvariantViolation: return "InvariantViolation";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kMissingSampleSize: return "MissingSampleSize";
    case ErrorCode::kNegativeCount: return "NegativeCount";
    case ErrorCode::kEmptyOntology: return "EmptyOntology";
    case ErrorCode::kDanglingXref: return "DanglingXref";
    case ErrorCode::kConflictingXref: return "ConflictingXref";
    case ErrorCode::kNoLabels: return "NoLabels";
    case ErrorCode::kEmptyCorpus: return "EmptyCorpus";
    case ErrorCode::kMissingPatientIds: return "MissingPatientIds";
    case ErrorCode::kAmbiguousTerm: return "AmbiguousTerm";
    case ErrorCode::kSharedSynonym: return "SharedSynonym";
    case ErrorCode::kDuplicateRule: return "DuplicateRule";
    case ErrorCode::kUnresolvedRuleTarget: return "UnresolvedRuleTarget";
    case ErrorCode::kEmptyGold: return "EmptyGold";
    case ErrorCode::kTooFewAnnotators: return "TooFewAnnotators";
    case ErrorCode::kEmptyTerms: return "EmptyTerms";
    case ErrorCode::kUnknownTask: return "UnknownTask";
    case ErrorCode::kNotAssigned: return "NotAssigned";
    case ErrorCode::kAlreadyVoted: return "AlreadyVoted";
    case ErrorCode::kTaskClosed: return "TaskClosed";
    case ErrorCode::kVotesPending: return "VotesPending";
    case ErrorCode::kNotResolved: return "NotResolved";
    case ErrorCode::kUnknownReviewer: return "UnknownReviewer";
    case ErrorCode::kGapInLog: return "GapInLog";
    case ErrorCode::kReplayMismatch: return "ReplayMismatch";
    case ErrorCode::kEmptyQuery: return "EmptyQuery";
    case ErrorCode::kUnknownScopeRoot: return "UnknownScopeRoot";
    case ErrorCode::kCorruptStore: return "CorruptStore";
    case ErrorCode::kAddressInUse: return "AddressInUse";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

namespace {

std::string Render(ErrorCode code, const std::string &message, int line) {
  std::string out(ErrorName(code));
  if (line > 0) out += " (line " + std::to_string(line) + ")";
  if (!message.empty()) out += ": " + message;
  return out;
}

}  // namespace

Error::Error(ErrorCode code, const std::string &message, int line)
    : std::runtime_error(Render(code, message, line)),
      code_(code),
      line_(line),
      reason_(message) {}

}  // namespace ispo
