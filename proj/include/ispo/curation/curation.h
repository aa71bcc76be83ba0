#ifndef ISPO_CURATION_CURATION_H_
#define ISPO_CURATION_CURATION_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ispo/core/corpus.h"
#include "ispo/core/ontology.h"
#include "json.hpp"

namespace ispo::curation {

enum class ProposalKind { kExistingConcept, kNewConcept, kNotASymptom };

struct Proposal {
  ProposalKind kind = ProposalKind::kNotASymptom;
  ConceptId cui;                    // kExistingConcept
  std::string label;                // kNewConcept, normalized
  std::optional<ConceptId> parent;  // kNewConcept; none means a new root

  static Proposal Existing(ConceptId cui);
  static Proposal New(std::string_view label, std::optional<ConceptId> parent);
  static Proposal NotASymptom();

  bool operator==(const Proposal &) const = default;
};

nlohmann::json ToJson(const Proposal &p);
Proposal ProposalFromJson(const nlohmann::json &j);  // throws InvalidArgument

struct Vote {
  std::string task_id;
  std::string annotator;
  Proposal proposal;
  std::string at;

  // Timestamps take no part in equality.
  bool operator==(const Vote &o) const {
    return task_id == o.task_id && annotator == o.annotator &&
           proposal == o.proposal;
  }
};

enum class TaskState { kOpen, kConsensus, kEscalated, kFinalized };
std::string_view TaskStateName(TaskState state);
TaskState ParseTaskState(std::string_view name);  // throws InvalidArgument

struct MappingTask {
  std::string id;
  std::string term;
  int group = 1;
  std::vector<std::string> assignees;
  std::vector<Vote> votes;
  TaskState state = TaskState::kOpen;
  std::optional<Proposal> resolved;
  std::optional<std::string> reviewer;
  std::optional<ConceptId> applied_cui;  // after finalize
  std::optional<AtomId> applied_aui;

  bool operator==(const MappingTask &) const = default;
};

nlohmann::json ToJson(const MappingTask &task);

struct BatchOptions {
  int group_count = 5;
  int per_term = 3;
  uint64_t seed = 0;
};

// Outcome shared by every 3-vote tally: the proposal carried by the most
// votes (first arrival breaks ties) when it has at least two, else none.
std::optional<Proposal> Tally(const std::vector<Vote> &votes);

class TaskBoard {
 public:
  // Shuffles the terms, splits them into contiguous groups whose sizes
  // differ by at most one, and hands each task to the per_term least-loaded
  // annotators with seeded tie-breaking. Throws EmptyTerms, EmptyText,
  // TooFewAnnotators.
  std::vector<std::string> CreateBatch(const std::vector<std::string> &terms,
                                       const std::vector<std::string> &annotators,
                                       const BatchOptions &options);

  // Throws UnknownTask, TaskClosed, NotAssigned, AlreadyVoted.
  const MappingTask &SubmitVote(const std::string &task_id,
                                const std::string &annotator,
                                const Proposal &proposal, std::string at);

  // Throws UnknownTask, TaskClosed, VotesPending.
  const MappingTask &Resolve(const std::string &task_id, bool force);

  const MappingTask *Find(const std::string &task_id) const;
  const MappingTask &Get(const std::string &task_id) const;  // UnknownTask
  MappingTask &Mutable(const std::string &task_id);
  std::vector<const MappingTask *> List(std::optional<TaskState> state) const;

  void AddReviewer(const std::string &reviewer);
  bool IsReviewer(const std::string &reviewer) const {
    return reviewers_.count(reviewer) > 0;
  }

  const std::map<std::string, MappingTask> &tasks() const { return tasks_; }
  std::map<std::string, int64_t> Load() const;  // tasks per annotator
  bool operator==(const TaskBoard &) const = default;

 private:
  std::map<std::string, MappingTask> tasks_;
  std::set<std::string> reviewers_;
  std::map<std::string, int64_t> load_;
  uint64_t task_counter_ = 0;
};

struct AuditEvent {
  int64_t seq = 0;
  std::string actor;
  std::string action;
  nlohmann::json payload;  // request fields plus "result"
  std::string at;

  bool operator==(const AuditEvent &) const = default;
};

std::string ToJsonLine(const AuditEvent &event);               // no trailing LF
AuditEvent ParseAuditEvent(std::string_view line, int line_no);  // ParseError
std::vector<AuditEvent> ParseAuditLog(std::string_view text);

// Ontology, task board and audit trail behind a single writer. Every
// successful mutation appends exactly one event; a failed one appends
// nothing and leaves the state unchanged.
class Workspace {
 public:
  Workspace() = default;
  explicit Workspace(Ontology base) : ontology_(std::move(base)) {}

  // --- ontology edits ---
  ConceptId CreateConcept(const std::string &actor, std::string_view label,
                          Language language,
                          const std::optional<ConceptId> &parent,
                          std::string_view source, const std::string &at);
  AddTermResult AddTerm(const std::string &actor, const ConceptId &cui,
                        std::string_view text, Language language,
                        std::string_view source,
                        const std::optional<std::string> &source_code,
                        const std::string &at);
  std::map<ConceptId, std::string> Reparent(const std::string &actor,
                                            const ConceptId &cui,
                                            const ConceptId &parent,
                                            const std::string &at);
  ConceptId Merge(const std::string &actor, const ConceptId &keep,
                  const ConceptId &retire, const std::string &at);
  void DeleteConcept(const std::string &actor, const ConceptId &cui,
                     const std::string &at);
  void RemoveAtom(const std::string &actor, const AtomId &aui,
                  const std::string &at);
  void SetPreferredAtom(const std::string &actor, const ConceptId &cui,
                        const AtomId &aui, const std::string &at);
  // Attaches `label` (if new) and makes it the preferred term.
  AtomId Relabel(const std::string &actor, const ConceptId &cui,
                 std::string_view label, Language language,
                 const std::string &at);
  ContextId AddContext(const std::string &actor, const ConceptId &cui,
                       ContextKind kind, std::string_view text,
                       std::string_view source, const std::string &at);
  std::vector<std::pair<ConceptId, AtomId>> SetPreferredTerms(
      const std::string &actor, const AnnotatedCorpus &corpus,
      const std::string &at);

  // --- curation ---
  void AddReviewer(const std::string &actor, const std::string &reviewer,
                   const std::string &at);
  std::vector<std::string> CreateBatch(const std::string &actor,
                                       const std::vector<std::string> &terms,
                                       const std::vector<std::string> &annotators,
                                       const BatchOptions &options,
                                       const std::string &at);
  // The actor is the voting annotator. Throws UnknownConcept / UnknownParent
  // / EmptyLabel for proposals that reference nothing.
  const MappingTask &SubmitVote(const std::string &annotator,
                                const std::string &task_id,
                                const Proposal &proposal, const std::string &at);
  const MappingTask &Resolve(const std::string &actor,
                             const std::string &task_id, bool force,
                             const std::string &at);
  // The actor is the reviewer. Applies the resolved (or override) proposal
  // with source MANUAL. Throws UnknownReviewer, NotResolved, TaskClosed.
  const MappingTask &Finalize(const std::string &reviewer,
                              const std::string &task_id,
                              const std::optional<Proposal> &override_proposal,
                              const std::string &at);

  // Applies an event's action without logging and returns its result.
  nlohmann::json Dispatch(const std::string &actor, const std::string &action,
                          const nlohmann::json &payload, const std::string &at);

  const Ontology &ontology() const { return ontology_; }
  const TaskBoard &tasks() const { return tasks_; }
  const std::vector<AuditEvent> &log() const { return log_; }
  int64_t version() const { return static_cast<int64_t>(log_.size()); }
  std::vector<AuditEvent> Since(int64_t seq) const;

  // Ontology and task state; the log is not compared.
  bool SameState(const Workspace &other) const {
    return ontology_ == other.ontology_ && tasks_ == other.tasks_;
  }

 private:
  friend Workspace Replay(const std::vector<AuditEvent> &events, Ontology base);

  nlohmann::json Commit(const std::string &actor, const std::string &action,
                        nlohmann::json payload, const std::string &at);
  void CheckProposal(const Proposal &p) const;
  void AdoptLog(std::vector<AuditEvent> events) { log_ = std::move(events); }

  Ontology ontology_;
  TaskBoard tasks_;
  std::vector<AuditEvent> log_;
};

// Rebuilds a workspace from `base` and a log starting at seq 1. Each event
// is re-dispatched and its recorded result compared. Throws GapInLog and
// ReplayMismatch.
Workspace Replay(const std::vector<AuditEvent> &events, Ontology base = {});

}  // namespace ispo::curation

#endif  // ISPO_CURATION_CURATION_H_
