#include "ispo/curation/curation.h"

#include <algorithm>
#include <span>

#include "ispo/core/error.h"
#include "ispo/core/random.h"
#include "ispo/core/source.h"
#include "ispo/core/text.h"

namespace ispo::curation {

using nlohmann::json;

Proposal Proposal::Existing(ConceptId cui) {
  Proposal p;
  p.kind = ProposalKind::kExistingConcept;
  p.cui = std::move(cui);
  return p;
}

Proposal Proposal::New(std::string_view label, std::optional<ConceptId> parent) {
  Proposal p;
  p.kind = ProposalKind::kNewConcept;
  p.label = Normalize(label);
  p.parent = std::move(parent);
  return p;
}

Proposal Proposal::NotASymptom() { return Proposal{}; }

json ToJson(const Proposal &p) {
  switch (p.kind) {
    case ProposalKind::kExistingConcept:
      return {{"kind", "existing"}, {"cui", p.cui}};
    case ProposalKind::kNewConcept: {
      json j{{"kind", "new"}, {"label", p.label}};
      if (p.parent) j["parent"] = *p.parent;
      return j;
    }
    case ProposalKind::kNotASymptom:
      break;
  }
  return {{"kind", "not_a_symptom"}};
}

Proposal ProposalFromJson(const json &j) {
  auto bad = [](const std::string &why) {
    return Error(ErrorCode::kInvalidArgument, "proposal: " + why);
  };
  if (!j.is_object() || !j.contains("kind") || !j["kind"].is_string()) {
    throw bad("expected an object with a string 'kind'");
  }
  const std::string kind = j["kind"];
  if (kind == "existing") {
    if (!j.contains("cui") || !j["cui"].is_string()) throw bad("missing 'cui'");
    return Proposal::Existing(j["cui"].get<std::string>());
  }
  if (kind == "new") {
    if (!j.contains("label") || !j["label"].is_string()) {
      throw bad("missing 'label'");
    }
    std::optional<ConceptId> parent;
    if (j.contains("parent") && !j["parent"].is_null()) {
      if (!j["parent"].is_string()) throw bad("'parent' must be a string");
      parent = j["parent"].get<std::string>();
    }
    return Proposal::New(j["label"].get<std::string>(), parent);
  }
  if (kind == "not_a_symptom") return Proposal::NotASymptom();
  throw bad("unknown kind '" + kind + "'");
}

std::string_view TaskStateName(TaskState state) {
  switch (state) {
    case TaskState::kOpen:
      return "Open";
    case TaskState::kConsensus:
      return "Consensus";
    case TaskState::kEscalated:
      return "Escalated";
    case TaskState::kFinalized:
      return "Finalized";
  }
  return "Open";
}

TaskState ParseTaskState(std::string_view name) {
  for (TaskState s : {TaskState::kOpen, TaskState::kConsensus,
                      TaskState::kEscalated, TaskState::kFinalized}) {
    std::string_view n = TaskStateName(s);
    if (n.size() == name.size() &&
        std::equal(n.begin(), n.end(), name.begin(), [](char a, char b) {
          return std::tolower(static_cast<unsigned char>(a)) ==
                 std::tolower(static_cast<unsigned char>(b));
        })) {
      return s;
    }
  }
  throw Error(ErrorCode::kInvalidArgument,
              "unknown task state '" + std::string(name) + "'");
}

json ToJson(const MappingTask &t) {
  json votes = json::array();
  for (const Vote &v : t.votes) {
    votes.push_back({{"annotator", v.annotator},
                     {"proposal", ToJson(v.proposal)},
                     {"at", v.at}});
  }
  json j{{"id", t.id},
         {"term", t.term},
         {"group", t.group},
         {"assignees", t.assignees},
         {"votes", std::move(votes)},
         {"state", TaskStateName(t.state)}};
  if (t.resolved) j["resolved"] = ToJson(*t.resolved);
  if (t.reviewer) j["reviewer"] = *t.reviewer;
  if (t.applied_cui) j["applied_cui"] = *t.applied_cui;
  if (t.applied_aui) j["applied_aui"] = *t.applied_aui;
  return j;
}

std::optional<Proposal> Tally(const std::vector<Vote> &votes) {
  std::optional<Proposal> best;
  size_t best_count = 0;
  for (size_t i = 0; i < votes.size(); ++i) {
    size_t count = 0;
    for (const Vote &v : votes) count += v.proposal == votes[i].proposal;
    if (count > best_count) {
      best_count = count;
      best = votes[i].proposal;
    }
  }
  if (best_count < 2) return std::nullopt;
  return best;
}

// --- task board --------------------------------------------------------------

std::vector<std::string> TaskBoard::CreateBatch(
    const std::vector<std::string> &terms,
    const std::vector<std::string> &annotators, const BatchOptions &options) {
  if (terms.empty()) throw Error(ErrorCode::kEmptyTerms, "");
  if (options.group_count < 1 || options.per_term < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "group_count and per_term must be positive");
  }
  std::set<std::string> distinct(annotators.begin(), annotators.end());
  if (distinct.size() != annotators.size()) {
    throw Error(ErrorCode::kInvalidArgument, "duplicate annotator id");
  }
  for (const std::string &a : annotators) {
    if (a.empty()) throw Error(ErrorCode::kInvalidArgument, "empty annotator id");
  }
  if (annotators.size() < static_cast<size_t>(options.per_term)) {
    throw Error(ErrorCode::kTooFewAnnotators,
                std::to_string(annotators.size()) + " < " +
                    std::to_string(options.per_term));
  }
  std::vector<std::string> shuffled;
  for (const std::string &t : terms) {
    if (Normalize(t).empty()) throw Error(ErrorCode::kEmptyText, "task term");
    shuffled.push_back(t);
  }

  SeededRng rng(options.seed);
  rng.Shuffle(std::span<std::string>(shuffled));

  const size_t n = shuffled.size();
  const size_t g = static_cast<size_t>(options.group_count);
  const size_t base = n / g, extra = n % g;
  std::vector<std::string> ids;
  size_t next = 0;
  for (size_t group = 0; group < g; ++group) {
    const size_t size = base + (group < extra ? 1 : 0);
    for (size_t k = 0; k < size; ++k, ++next) {
      MappingTask task;
      char buf[16];
      std::snprintf(buf, sizeof buf, "T%06llu",
                    static_cast<unsigned long long>(++task_counter_));
      task.id = buf;
      task.term = shuffled[next];
      task.group = static_cast<int>(group) + 1;

      std::vector<std::string> pool = annotators;
      rng.Shuffle(std::span<std::string>(pool));
      std::stable_sort(pool.begin(), pool.end(),
                       [&](const std::string &a, const std::string &b) {
                         return load_[a] < load_[b];
                       });
      pool.resize(options.per_term);
      for (const std::string &a : pool) ++load_[a];
      task.assignees = std::move(pool);
      ids.push_back(task.id);
      tasks_.emplace(task.id, std::move(task));
    }
  }
  for (const std::string &a : annotators) load_.emplace(a, 0);
  return ids;
}

const MappingTask *TaskBoard::Find(const std::string &task_id) const {
  auto it = tasks_.find(task_id);
  return it == tasks_.end() ? nullptr : &it->second;
}

const MappingTask &TaskBoard::Get(const std::string &task_id) const {
  const MappingTask *t = Find(task_id);
  if (t == nullptr) throw Error(ErrorCode::kUnknownTask, task_id);
  return *t;
}

MappingTask &TaskBoard::Mutable(const std::string &task_id) {
  auto it = tasks_.find(task_id);
  if (it == tasks_.end()) throw Error(ErrorCode::kUnknownTask, task_id);
  return it->second;
}

const MappingTask &TaskBoard::SubmitVote(const std::string &task_id,
                                         const std::string &annotator,
                                         const Proposal &proposal,
                                         std::string at) {
  MappingTask &task = Mutable(task_id);
  if (task.state != TaskState::kOpen) {
    throw Error(ErrorCode::kTaskClosed,
                task_id + " is " + std::string(TaskStateName(task.state)));
  }
  if (std::find(task.assignees.begin(), task.assignees.end(), annotator) ==
      task.assignees.end()) {
    throw Error(ErrorCode::kNotAssigned, annotator + " on " + task_id);
  }
  for (const Vote &v : task.votes) {
    if (v.annotator == annotator) {
      throw Error(ErrorCode::kAlreadyVoted, annotator + " on " + task_id);
    }
  }
  task.votes.push_back({task_id, annotator, proposal, std::move(at)});
  return task;
}

const MappingTask &TaskBoard::Resolve(const std::string &task_id, bool force) {
  MappingTask &task = Mutable(task_id);
  if (task.state != TaskState::kOpen) {
    throw Error(ErrorCode::kTaskClosed,
                task_id + " is " + std::string(TaskStateName(task.state)));
  }
  std::optional<Proposal> winner = Tally(task.votes);
  const bool complete = task.votes.size() == task.assignees.size();
  if (!complete && !(force && winner)) {
    throw Error(ErrorCode::kVotesPending,
                std::to_string(task.votes.size()) + " of " +
                    std::to_string(task.assignees.size()) + " votes on " +
                    task_id);
  }
  if (winner) {
    task.state = TaskState::kConsensus;
    task.resolved = std::move(winner);
  } else {
    task.state = TaskState::kEscalated;
  }
  return task;
}

std::vector<const MappingTask *> TaskBoard::List(
    std::optional<TaskState> state) const {
  std::vector<const MappingTask *> out;
  for (const auto &[id, task] : tasks_) {
    if (!state || task.state == *state) out.push_back(&task);
  }
  return out;
}

void TaskBoard::AddReviewer(const std::string &reviewer) {
  if (reviewer.empty()) throw Error(ErrorCode::kInvalidArgument, "empty reviewer id");
  reviewers_.insert(reviewer);
}

std::map<std::string, int64_t> TaskBoard::Load() const { return load_; }

// --- audit log ----------------------------------------------------------------

std::string ToJsonLine(const AuditEvent &e) {
  json j{{"seq", e.seq},
         {"actor", e.actor},
         {"action", e.action},
         {"payload", e.payload},
         {"at", e.at}};
  return j.dump(-1, ' ', false, json::error_handler_t::strict);
}

AuditEvent ParseAuditEvent(std::string_view line, int line_no) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error &e) {
    throw Error(ErrorCode::kParseError, e.what(), line_no);
  }
  auto field = [&](const char *name) -> const json & {
    if (!j.is_object() || !j.contains(name)) {
      throw Error(ErrorCode::kParseError,
                  std::string("audit event missing '") + name + "'", line_no);
    }
    return j[name];
  };
  AuditEvent e;
  try {
    e.seq = field("seq").get<int64_t>();
    e.actor = field("actor").get<std::string>();
    e.action = field("action").get<std::string>();
    e.payload = field("payload");
    e.at = field("at").get<std::string>();
  } catch (const json::type_error &err) {
    throw Error(ErrorCode::kParseError, err.what(), line_no);
  }
  if (!e.payload.is_object()) {
    throw Error(ErrorCode::kParseError, "payload must be an object", line_no);
  }
  return e;
}

std::vector<AuditEvent> ParseAuditLog(std::string_view text) {
  std::vector<AuditEvent> events;
  int line_no = 0;
  size_t start = 0;
  while (start < text.size()) {
    size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (!line.empty()) events.push_back(ParseAuditEvent(line, line_no));
    start = end + 1;
  }
  return events;
}

// --- workspace ----------------------------------------------------------------

namespace {

const json &Need(const json &payload, const char *name) {
  if (!payload.contains(name)) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("missing field '") + name + "'");
  }
  return payload[name];
}

std::string NeedString(const json &payload, const char *name) {
  const json &v = Need(payload, name);
  if (!v.is_string()) {
    throw Error(ErrorCode::kInvalidArgument,
                std::string("field '") + name + "' must be a string");
  }
  return v.get<std::string>();
}

std::optional<std::string> OptString(const json &payload, const char *name) {
  if (!payload.contains(name) || payload[name].is_null()) return std::nullopt;
  return NeedString(payload, name);
}

json CodesJson(const std::map<ConceptId, std::string> &codes) {
  json j = json::object();
  for (const auto &[cui, code] : codes) j[cui] = code;
  return j;
}

}  // namespace

json Workspace::Commit(const std::string &actor, const std::string &action,
                       json payload, const std::string &at) {
  json result = Dispatch(actor, action, payload, at);
  payload["result"] = result;
  AuditEvent e{version() + 1, actor, action, std::move(payload), at};
  log_.push_back(std::move(e));
  return result;
}

std::vector<AuditEvent> Workspace::Since(int64_t seq) const {
  std::vector<AuditEvent> out;
  for (const AuditEvent &e : log_) {
    if (e.seq > seq) out.push_back(e);
  }
  return out;
}

void Workspace::CheckProposal(const Proposal &p) const {
  if (p.kind == ProposalKind::kExistingConcept) {
    if (!ontology_.IsActive(p.cui)) throw Error(ErrorCode::kUnknownConcept, p.cui);
  } else if (p.kind == ProposalKind::kNewConcept) {
    if (p.label.empty()) throw Error(ErrorCode::kEmptyLabel, "");
    if (p.parent && !ontology_.IsActive(*p.parent)) {
      throw Error(ErrorCode::kUnknownParent, *p.parent);
    }
  }
}

json Workspace::Dispatch(const std::string &actor, const std::string &action,
                         const json &p, const std::string &at) {
  if (!p.is_object()) throw Error(ErrorCode::kInvalidArgument, "payload");
  auto language = [&](const char *name) {
    return ParseLanguage(NeedString(p, name));
  };

  if (action == "create_concept") {
    ConceptId cui = ontology_.CreateConcept(
        NeedString(p, "label"), language("language"), OptString(p, "parent"),
        NeedString(p, "source"));
    return {{"cui", cui}};
  }
  if (action == "add_term") {
    AddTermResult r = ontology_.AddTerm(
        NeedString(p, "cui"), NeedString(p, "text"), language("language"),
        NeedString(p, "source"), OptString(p, "source_code"));
    return {{"aui", r.atom.aui}, {"created", r.created}};
  }
  if (action == "reparent") {
    return {{"codes", CodesJson(ontology_.Reparent(NeedString(p, "cui"),
                                                   NeedString(p, "parent")))}};
  }
  if (action == "merge") {
    return {{"cui", ontology_.Merge(NeedString(p, "keep"),
                                    NeedString(p, "retire"))}};
  }
  if (action == "delete_concept") {
    ontology_.DeleteConcept(NeedString(p, "cui"));
    return json::object();
  }
  if (action == "remove_atom") {
    ontology_.RemoveAtom(NeedString(p, "aui"));
    return json::object();
  }
  if (action == "set_preferred") {
    ontology_.SetPreferredAtom(NeedString(p, "cui"), NeedString(p, "aui"));
    return json::object();
  }
  if (action == "relabel") {
    const ConceptId cui = NeedString(p, "cui");
    const std::string label = NeedString(p, "label");
    const Language lang = language("language");
    if (!ontology_.IsActive(cui)) throw Error(ErrorCode::kUnknownConcept, cui);
    AddTermResult r = ontology_.AddTerm(cui, label, lang, kManualSource);
    ontology_.SetPreferredAtom(cui, r.atom.aui);
    return {{"aui", r.atom.aui}, {"created", r.created}};
  }
  if (action == "add_context") {
    ContextId id = ontology_.AddContext(
        NeedString(p, "cui"), ParseContextKind(NeedString(p, "kind")),
        NeedString(p, "text"), NeedString(p, "source"));
    return {{"id", id}};
  }
  if (action == "set_preferred_terms") {
    const json &changes = Need(p, "changes");
    if (!changes.is_array()) throw Error(ErrorCode::kInvalidArgument, "changes");
    for (const json &c : changes) {
      const Atom *atom = c.is_object() ? ontology_.FindAtom(NeedString(c, "aui"))
                                       : nullptr;
      if (atom == nullptr || atom->cui != NeedString(c, "cui") ||
          !ontology_.IsActive(atom->cui)) {
        throw Error(ErrorCode::kInvalidArgument, "bad preferred-term change");
      }
    }
    for (const json &c : changes) {
      ontology_.SetPreferredAtom(NeedString(c, "cui"), NeedString(c, "aui"));
    }
    return {{"changed", changes.size()}};
  }
  if (action == "add_reviewer") {
    tasks_.AddReviewer(NeedString(p, "reviewer"));
    return json::object();
  }
  if (action == "create_batch") {
    const json &terms = Need(p, "terms");
    const json &annotators = Need(p, "annotators");
    if (!terms.is_array() || !annotators.is_array()) {
      throw Error(ErrorCode::kInvalidArgument, "terms and annotators must be arrays");
    }
    BatchOptions options;
    options.group_count = p.value("group_count", options.group_count);
    options.per_term = p.value("per_term", options.per_term);
    options.seed = p.value("seed", options.seed);
    std::vector<std::string> ids;
    try {
      ids = tasks_.CreateBatch(terms.get<std::vector<std::string>>(),
                               annotators.get<std::vector<std::string>>(),
                               options);
    } catch (const json::type_error &) {
      throw Error(ErrorCode::kInvalidArgument, "terms and annotators must be strings");
    }
    return {{"tasks", ids}};
  }
  if (action == "vote") {
    const Proposal proposal = ProposalFromJson(Need(p, "proposal"));
    const std::string task_id = NeedString(p, "task");
    tasks_.Get(task_id);
    CheckProposal(proposal);
    tasks_.SubmitVote(task_id, actor, proposal, at);
    return json::object();
  }
  if (action == "resolve") {
    const MappingTask &t =
        tasks_.Resolve(NeedString(p, "task"), p.value("force", false));
    json r{{"state", TaskStateName(t.state)}};
    if (t.resolved) r["proposal"] = ToJson(*t.resolved);
    return r;
  }
  if (action == "finalize") {
    const std::string task_id = NeedString(p, "task");
    std::optional<Proposal> override_proposal;
    if (p.contains("override") && !p["override"].is_null()) {
      override_proposal = ProposalFromJson(p["override"]);
    }
    if (!tasks_.IsReviewer(actor)) throw Error(ErrorCode::kUnknownReviewer, actor);
    MappingTask &task = tasks_.Mutable(task_id);
    if (task.state == TaskState::kFinalized) {
      throw Error(ErrorCode::kTaskClosed, task_id + " is Finalized");
    }
    if (task.state == TaskState::kOpen) {
      throw Error(ErrorCode::kNotResolved, task_id + " is Open");
    }
    if (task.state == TaskState::kEscalated && !override_proposal) {
      throw Error(ErrorCode::kNotResolved,
                  task_id + " is Escalated and needs an override");
    }
    Proposal chosen = override_proposal ? *override_proposal : *task.resolved;
    if (chosen.kind == ProposalKind::kExistingConcept) {
      if (std::optional<ConceptId> live = ontology_.Resolve(chosen.cui)) {
        chosen.cui = *live;
      }
    }
    CheckProposal(chosen);

    const Language term_lang = DetectLanguage(Normalize(task.term));
    std::optional<ConceptId> cui;
    std::optional<AtomId> aui;
    if (chosen.kind == ProposalKind::kExistingConcept) {
      aui = ontology_.AddTerm(chosen.cui, task.term, term_lang, kManualSource)
                .atom.aui;
      cui = chosen.cui;
    } else if (chosen.kind == ProposalKind::kNewConcept) {
      const std::string term_norm = Normalize(task.term);
      const bool term_is_label = term_norm == chosen.label;
      if (!term_is_label) {
        for (const ConceptId &owner : ontology_.LookupText(term_norm, term_lang)) {
          throw Error(ErrorCode::kSharedSynonym,
                      "'" + term_norm + "' already belongs to " + owner);
        }
      }
      cui = ontology_.CreateConcept(chosen.label, DetectLanguage(chosen.label),
                                    chosen.parent, kManualSource);
      if (term_is_label) {
        aui = ontology_.Get(*cui).preferred_aui;
      } else {
        aui = ontology_.AddTerm(*cui, task.term, term_lang, kManualSource).atom.aui;
      }
    }
    task.state = TaskState::kFinalized;
    task.resolved = chosen;
    task.reviewer = actor;
    task.applied_cui = cui;
    task.applied_aui = aui;
    json r{{"state", "Finalized"}, {"proposal", ToJson(chosen)}};
    if (cui) r["cui"] = *cui;
    if (aui) r["aui"] = *aui;
    return r;
  }
  throw Error(ErrorCode::kInvalidArgument, "unknown action '" + action + "'");
}

ConceptId Workspace::CreateConcept(const std::string &actor,
                                   std::string_view label, Language language,
                                   const std::optional<ConceptId> &parent,
                                   std::string_view source,
                                   const std::string &at) {
  json p{{"label", label}, {"language", LanguageName(language)},
         {"source", source}};
  if (parent) p["parent"] = *parent;
  return Commit(actor, "create_concept", std::move(p), at)["cui"];
}

AddTermResult Workspace::AddTerm(const std::string &actor, const ConceptId &cui,
                                 std::string_view text, Language language,
                                 std::string_view source,
                                 const std::optional<std::string> &source_code,
                                 const std::string &at) {
  json p{{"cui", cui}, {"text", text}, {"language", LanguageName(language)},
         {"source", source}};
  if (source_code) p["source_code"] = *source_code;
  json r = Commit(actor, "add_term", std::move(p), at);
  return {*ontology_.FindAtom(r["aui"].get<std::string>()), r["created"].get<bool>()};
}

std::map<ConceptId, std::string> Workspace::Reparent(const std::string &actor,
                                                     const ConceptId &cui,
                                                     const ConceptId &parent,
                                                     const std::string &at) {
  json r = Commit(actor, "reparent", {{"cui", cui}, {"parent", parent}}, at);
  return r["codes"].get<std::map<ConceptId, std::string>>();
}

ConceptId Workspace::Merge(const std::string &actor, const ConceptId &keep,
                           const ConceptId &retire, const std::string &at) {
  return Commit(actor, "merge", {{"keep", keep}, {"retire", retire}}, at)["cui"];
}

void Workspace::DeleteConcept(const std::string &actor, const ConceptId &cui,
                              const std::string &at) {
  Commit(actor, "delete_concept", {{"cui", cui}}, at);
}

void Workspace::RemoveAtom(const std::string &actor, const AtomId &aui,
                           const std::string &at) {
  Commit(actor, "remove_atom", {{"aui", aui}}, at);
}

void Workspace::SetPreferredAtom(const std::string &actor, const ConceptId &cui,
                                 const AtomId &aui, const std::string &at) {
  Commit(actor, "set_preferred", {{"cui", cui}, {"aui", aui}}, at);
}

AtomId Workspace::Relabel(const std::string &actor, const ConceptId &cui,
                          std::string_view label, Language language,
                          const std::string &at) {
  json p{{"cui", cui}, {"label", label}, {"language", LanguageName(language)}};
  return Commit(actor, "relabel", std::move(p), at)["aui"];
}

ContextId Workspace::AddContext(const std::string &actor, const ConceptId &cui,
                                ContextKind kind, std::string_view text,
                                std::string_view source, const std::string &at) {
  json p{{"cui", cui}, {"kind", ContextKindName(kind)}, {"text", text},
         {"source", source}};
  return Commit(actor, "add_context", std::move(p), at)["id"];
}

std::vector<std::pair<ConceptId, AtomId>> Workspace::SetPreferredTerms(
    const std::string &actor, const AnnotatedCorpus &corpus,
    const std::string &at) {
  Ontology scratch = ontology_;
  std::vector<std::pair<ConceptId, AtomId>> changes =
      scratch.SetPreferredTerms(corpus);
  json list = json::array();
  for (const auto &[cui, aui] : changes) list.push_back({{"cui", cui}, {"aui", aui}});
  Commit(actor, "set_preferred_terms", {{"changes", std::move(list)}}, at);
  return changes;
}

void Workspace::AddReviewer(const std::string &actor, const std::string &reviewer,
                            const std::string &at) {
  Commit(actor, "add_reviewer", {{"reviewer", reviewer}}, at);
}

std::vector<std::string> Workspace::CreateBatch(
    const std::string &actor, const std::vector<std::string> &terms,
    const std::vector<std::string> &annotators, const BatchOptions &options,
    const std::string &at) {
  json p{{"terms", terms},
         {"annotators", annotators},
         {"group_count", options.group_count},
         {"per_term", options.per_term},
         {"seed", options.seed}};
  return Commit(actor, "create_batch", std::move(p), at)["tasks"]
      .get<std::vector<std::string>>();
}

const MappingTask &Workspace::SubmitVote(const std::string &annotator,
                                         const std::string &task_id,
                                         const Proposal &proposal,
                                         const std::string &at) {
  Commit(annotator, "vote", {{"task", task_id}, {"proposal", ToJson(proposal)}}, at);
  return tasks_.Get(task_id);
}

const MappingTask &Workspace::Resolve(const std::string &actor,
                                      const std::string &task_id, bool force,
                                      const std::string &at) {
  Commit(actor, "resolve", {{"task", task_id}, {"force", force}}, at);
  return tasks_.Get(task_id);
}

const MappingTask &Workspace::Finalize(
    const std::string &reviewer, const std::string &task_id,
    const std::optional<Proposal> &override_proposal, const std::string &at) {
  json p{{"task", task_id}};
  if (override_proposal) p["override"] = ToJson(*override_proposal);
  Commit(reviewer, "finalize", std::move(p), at);
  return tasks_.Get(task_id);
}

Workspace Replay(const std::vector<AuditEvent> &events, Ontology base) {
  Workspace ws(std::move(base));
  for (size_t i = 0; i < events.size(); ++i) {
    const AuditEvent &e = events[i];
    if (e.seq != static_cast<int64_t>(i) + 1) {
      throw Error(ErrorCode::kGapInLog, "expected seq " + std::to_string(i + 1) +
                                            ", found " + std::to_string(e.seq));
    }
    json request = e.payload;
    json recorded = request.contains("result") ? request["result"] : json();
    request.erase("result");
    json result;
    try {
      result = ws.Dispatch(e.actor, e.action, request, e.at);
    } catch (const Error &err) {
      throw Error(ErrorCode::kReplayMismatch, "seq " + std::to_string(e.seq) +
                                                  " failed: " + err.what());
    }
    if (result != recorded) {
      throw Error(ErrorCode::kReplayMismatch,
                  "seq " + std::to_string(e.seq) + " produced " + result.dump() +
                      ", log has " + recorded.dump());
    }
  }
  ws.AdoptLog(events);
  return ws;
}

}  // namespace ispo::curation
