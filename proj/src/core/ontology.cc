#include "ispo/core/ontology.h"

#include <algorithm>
#include <deque>
#include <tuple>

#include "ispo/core/error.h"
#include "ispo/core/source.h"

namespace ispo {

std::string_view ContextKindName(ContextKind kind) {
  switch (kind) {
    case ContextKind::kDefinition: return "definition";
    case ContextKind::kAncientReference: return "ancient_reference";
    case ContextKind::kChiefComplaint: return "chief_complaint";
  }
  return "definition";
}

ContextKind ParseContextKind(std::string_view name) {
  if (name == "definition") return ContextKind::kDefinition;
  if (name == "ancient_reference") return ContextKind::kAncientReference;
  if (name == "chief_complaint") return ContextKind::kChiefComplaint;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown context kind '" + std::string(name) + "'");
}

std::string_view ViolationKindName(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kMalformedId: return "MalformedId";
    case ViolationKind::kDanglingReference: return "DanglingReference";
    case ViolationKind::kCycle: return "Cycle";
    case ViolationKind::kCodePrefixViolation: return "CodePrefixViolation";
    case ViolationKind::kDuplicateCode: return "DuplicateCode";
    case ViolationKind::kInactiveParent: return "InactiveParent";
    case ViolationKind::kPreferredAtomMismatch: return "PreferredAtomMismatch";
    case ViolationKind::kDuplicateAtom: return "DuplicateAtom";
    case ViolationKind::kDuplicateTermString: return "DuplicateTermString";
    case ViolationKind::kNotNormalized: return "NotNormalized";
    case ViolationKind::kSharedSynonym: return "SharedSynonym";
    case ViolationKind::kRetiredOwnsData: return "RetiredOwnsData";
    case ViolationKind::kCounterBehind: return "CounterBehind";
  }
  return "Unknown";
}

// --- construction ---------------------------------------------------------

Ontology Ontology::FromRecords(OntologyRecords records) {
  Ontology o;
  o.counters_ = records.counters;
  for (Concept &c : records.concepts) {
    ConceptId id = c.cui;
    if (!o.concepts_.emplace(id, std::move(c)).second) {
      throw Error(ErrorCode::kDuplicateId, "concept " + id);
    }
  }
  for (TermString &t : records.terms) {
    StringId id = t.sui;
    if (!o.terms_.emplace(id, std::move(t)).second) {
      throw Error(ErrorCode::kDuplicateId, "term string " + id);
    }
  }
  for (Atom &a : records.atoms) {
    AtomId id = a.aui;
    if (!o.atoms_.emplace(id, std::move(a)).second) {
      throw Error(ErrorCode::kDuplicateId, "atom " + id);
    }
  }
  for (ContextText &x : records.contexts) {
    ContextId id = x.id;
    if (!o.contexts_.emplace(id, std::move(x)).second) {
      throw Error(ErrorCode::kDuplicateId, "context " + id);
    }
  }
  o.RebuildIndices();
  return o;
}

OntologyRecords Ontology::ToRecords() const {
  OntologyRecords r;
  r.counters = counters_;
  for (const auto &[id, c] : concepts_) r.concepts.push_back(c);
  for (const auto &[id, t] : terms_) r.terms.push_back(t);
  for (const auto &[id, a] : atoms_) r.atoms.push_back(a);
  for (const auto &[id, x] : contexts_) r.contexts.push_back(x);
  return r;
}

void Ontology::RebuildIndices() {
  term_index_.clear();
  atoms_by_cui_.clear();
  atoms_by_sui_.clear();
  children_.clear();
  contexts_by_cui_.clear();
  for (const auto &[sui, t] : terms_) {
    term_index_.emplace(std::make_pair(t.text, t.language), sui);
  }
  for (const auto &[aui, a] : atoms_) {
    atoms_by_cui_[a.cui].insert(aui);
    atoms_by_sui_[a.sui].insert(aui);
  }
  for (const auto &[cui, c] : concepts_) {
    if (c.active() && c.parent) children_[*c.parent].insert(cui);
  }
  for (const auto &[id, x] : contexts_) contexts_by_cui_[x.cui].insert(id);
}

// --- helpers ----------------------------------------------------------------

const Concept &Ontology::RequireActive(const ConceptId &cui) const {
  auto it = concepts_.find(cui);
  if (it == concepts_.end() || !it->second.active()) {
    throw Error(ErrorCode::kUnknownConcept, cui);
  }
  return it->second;
}

Concept &Ontology::MutableActive(const ConceptId &cui) {
  RequireActive(cui);
  return concepts_.at(cui);
}

void Ontology::RequireSource(std::string_view source) const {
  if (FindSource(source) == nullptr) {
    throw Error(ErrorCode::kUnknownSource, std::string(source));
  }
}

StringId Ontology::InternTerm(std::string_view raw, std::string normalized,
                              Language language) {
  auto key = std::make_pair(normalized, language);
  auto it = term_index_.find(key);
  if (it != term_index_.end()) return it->second;
  StringId sui = FormatId(IdKind::kString, ++counters_.sui);
  terms_.emplace(sui, TermString{sui, std::move(normalized), std::string(raw),
                                 language});
  term_index_.emplace(std::move(key), sui);
  return sui;
}

// --- mutations --------------------------------------------------------------

void Ontology::RequireUnshared(const std::string &normalized, Language language,
                               const std::optional<ConceptId> &owner) const {
  for (const ConceptId &other : LookupText(normalized, language)) {
    if (!owner || other != *owner) {
      throw Error(ErrorCode::kSharedSynonym,
                  "'" + normalized + "' already belongs to " + other);
    }
  }
}

ConceptId Ontology::CreateConcept(std::string_view label, Language language,
                                  const std::optional<ConceptId> &parent,
                                  std::string_view source) {
  std::string normalized = Normalize(label);
  if (normalized.empty()) throw Error(ErrorCode::kEmptyLabel, "");
  RequireSource(source);
  if (parent) {
    auto it = concepts_.find(*parent);
    if (it == concepts_.end() || !it->second.active()) {
      throw Error(ErrorCode::kUnknownParent, *parent);
    }
  } else {
    for (const ConceptId &root : Roots()) {
      if (PreferredText(root) == normalized) {
        throw Error(ErrorCode::kDuplicateRootLabel, normalized);
      }
    }
  }
  RequireUnshared(normalized, language, std::nullopt);

  Concept c;
  c.cui = FormatId(IdKind::kConcept, ++counters_.cui);
  if (parent) {
    Concept &p = concepts_.at(*parent);
    c.code = p.code.Child(++p.next_segment);
    c.parent = *parent;
    children_[*parent].insert(c.cui);
  } else {
    c.code = ClassificationCode::Root(++counters_.root_segments);
  }
  StringId sui = InternTerm(label, std::move(normalized), language);
  Atom atom{FormatId(IdKind::kAtom, ++counters_.aui), c.cui, sui,
            std::string(source), std::nullopt};
  c.preferred_aui = atom.aui;
  atoms_by_cui_[c.cui].insert(atom.aui);
  atoms_by_sui_[sui].insert(atom.aui);
  atoms_.emplace(atom.aui, std::move(atom));
  ConceptId cui = c.cui;
  concepts_.emplace(cui, std::move(c));
  return cui;
}

AddTermResult Ontology::AddTerm(const ConceptId &cui, std::string_view text,
                                Language language, std::string_view source,
                                std::optional<std::string> source_code) {
  RequireActive(cui);
  std::string normalized = Normalize(text);
  if (normalized.empty()) throw Error(ErrorCode::kEmptyText, "");
  RequireSource(source);
  RequireUnshared(normalized, language, cui);

  auto term = term_index_.find(std::make_pair(normalized, language));
  if (term != term_index_.end()) {
    auto owned = atoms_by_cui_.find(cui);
    if (owned != atoms_by_cui_.end()) {
      for (const AtomId &aui : owned->second) {
        const Atom &a = atoms_.at(aui);
        if (a.sui == term->second && a.source == source) return {a, false};
      }
    }
  }

  StringId sui = InternTerm(text, std::move(normalized), language);
  Atom atom{FormatId(IdKind::kAtom, ++counters_.aui), cui, sui,
            std::string(source), std::move(source_code)};
  atoms_by_cui_[cui].insert(atom.aui);
  atoms_by_sui_[sui].insert(atom.aui);
  auto [it, inserted] = atoms_.emplace(atom.aui, atom);
  return {it->second, true};
}

void Ontology::Relocate(const ConceptId &cui, const ConceptId &parent,
                        std::map<ConceptId, std::string> *changed) {
  Concept &c = concepts_.at(cui);
  Concept &p = concepts_.at(parent);
  const ClassificationCode old_code = c.code;
  const ClassificationCode new_code = p.code.Child(++p.next_segment);
  const std::vector<ConceptId> subtree = Descendants(cui);

  if (c.parent) children_[*c.parent].erase(cui);
  c.parent = parent;
  children_[parent].insert(cui);

  for (const ConceptId &d : subtree) {
    Concept &dc = concepts_.at(d);
    dc.code = dc.code.Rebase(old_code, new_code);
    if (changed) (*changed)[d] = dc.code.str();
  }
}

std::map<ConceptId, std::string> Ontology::Reparent(
    const ConceptId &cui, const ConceptId &new_parent) {
  const Concept &c = RequireActive(cui);
  RequireActive(new_parent);
  if (new_parent == cui || IsInSubtree(new_parent, cui)) {
    throw Error(ErrorCode::kCycle,
                new_parent + " lies in the subtree of " + cui);
  }
  std::map<ConceptId, std::string> changed;
  if (c.parent && *c.parent == new_parent) return changed;
  Relocate(cui, new_parent, &changed);
  return changed;
}

ConceptId Ontology::Merge(const ConceptId &keep, const ConceptId &retire) {
  RequireActive(keep);
  RequireActive(retire);
  if (keep == retire || IsInSubtree(keep, retire) ||
      IsInSubtree(retire, keep)) {
    throw Error(ErrorCode::kHierarchyConflict,
                keep + " and " + retire + " are on one ancestry path");
  }

  std::set<std::pair<StringId, std::string>> kept;
  for (const AtomId &aui : atoms_by_cui_[keep]) {
    const Atom &a = atoms_.at(aui);
    kept.emplace(a.sui, a.source);
  }
  const std::set<AtomId> moving = atoms_by_cui_[retire];
  for (const AtomId &aui : moving) {
    Atom &a = atoms_.at(aui);
    if (kept.count({a.sui, a.source})) {
      atoms_by_sui_[a.sui].erase(aui);
      atoms_.erase(aui);
    } else {
      a.cui = keep;
      kept.emplace(a.sui, a.source);
      atoms_by_cui_[keep].insert(aui);
    }
  }
  atoms_by_cui_.erase(retire);

  for (const ContextId &id : contexts_by_cui_[retire]) {
    contexts_.at(id).cui = keep;
    contexts_by_cui_[keep].insert(id);
  }
  contexts_by_cui_.erase(retire);

  for (const ConceptId &child : Children(retire)) {
    Relocate(child, keep, nullptr);
  }

  Concept &r = concepts_.at(retire);
  if (r.parent) children_[*r.parent].erase(retire);
  children_.erase(retire);
  r.status = ConceptStatus::kRetired;
  r.forward = keep;
  r.preferred_aui.clear();
  return keep;
}

void Ontology::DeleteConcept(const ConceptId &cui) {
  RequireActive(cui);
  if (!Children(cui).empty()) {
    throw Error(ErrorCode::kHasChildren, cui);
  }
  for (const AtomId &aui : atoms_by_cui_[cui]) {
    atoms_by_sui_[atoms_.at(aui).sui].erase(aui);
    atoms_.erase(aui);
  }
  atoms_by_cui_.erase(cui);
  for (const ContextId &id : contexts_by_cui_[cui]) contexts_.erase(id);
  contexts_by_cui_.erase(cui);

  Concept &c = concepts_.at(cui);
  if (c.parent) children_[*c.parent].erase(cui);
  c.status = ConceptStatus::kRetired;
  c.preferred_aui.clear();
}

void Ontology::RemoveAtom(const AtomId &aui) {
  auto it = atoms_.find(aui);
  if (it == atoms_.end() || !IsActive(it->second.cui)) {
    throw Error(ErrorCode::kUnknownAtom, aui);
  }
  const Concept &c = concepts_.at(it->second.cui);
  if (c.preferred_aui == aui) {
    throw Error(ErrorCode::kPreferredAtom,
                aui + " is the preferred atom of " + c.cui);
  }
  atoms_by_cui_[it->second.cui].erase(aui);
  atoms_by_sui_[it->second.sui].erase(aui);
  atoms_.erase(it);
}

void Ontology::SetPreferredAtom(const ConceptId &cui, const AtomId &aui) {
  RequireActive(cui);
  const Atom *a = FindAtom(aui);
  if (a == nullptr || a->cui != cui) {
    throw Error(ErrorCode::kUnknownAtom, aui + " is not an atom of " + cui);
  }
  concepts_.at(cui).preferred_aui = aui;
}

ContextId Ontology::AddContext(const ConceptId &cui, ContextKind kind,
                               std::string_view text, std::string_view source) {
  RequireActive(cui);
  if (Normalize(text).empty()) throw Error(ErrorCode::kEmptyText, "");
  RequireSource(source);
  ContextId id = FormatId(IdKind::kContext, ++counters_.ctx);
  contexts_.emplace(id, ContextText{id, cui, kind, std::string(text),
                                    std::string(source)});
  contexts_by_cui_[cui].insert(id);
  return id;
}

std::vector<std::pair<ConceptId, AtomId>> Ontology::SetPreferredTerms(
    const AnnotatedCorpus &corpus) {
  std::vector<std::pair<ConceptId, AtomId>> changed;
  for (auto &[cui, c] : concepts_) {
    if (!c.active()) continue;
    const Atom *best = nullptr;
    // Sort key; smaller is better.
    std::tuple<int64_t, int, std::string, int, std::string> best_key;
    for (const AtomId &aui : atoms_by_cui_[cui]) {
      const Atom &a = atoms_.at(aui);
      const TermString &t = terms_.at(a.sui);
      const int64_t count = corpus.CountOf(t.text);
      auto key = std::make_tuple(-count, t.language == Language::kZh ? 0 : 1,
                                 t.text, aui == c.preferred_aui ? 0 : 1, aui);
      if (best == nullptr || key < best_key) {
        best = &a;
        best_key = std::move(key);
      }
    }
    if (best == nullptr || std::get<0>(best_key) == 0) continue;
    if (best->aui != c.preferred_aui) {
      c.preferred_aui = best->aui;
      changed.emplace_back(cui, best->aui);
    }
  }
  return changed;
}

// --- reads ------------------------------------------------------------------

const Concept *Ontology::Find(const ConceptId &cui) const {
  auto it = concepts_.find(cui);
  return it == concepts_.end() ? nullptr : &it->second;
}

std::optional<ConceptId> Ontology::Resolve(const ConceptId &cui) const {
  const Concept *c = Find(cui);
  size_t hops = 0;
  while (c != nullptr && !c->active()) {
    if (!c->forward || ++hops > concepts_.size()) return std::nullopt;
    c = Find(*c->forward);
  }
  if (c == nullptr) return std::nullopt;
  return c->cui;
}

const Concept &Ontology::Get(const ConceptId &cui) const {
  std::optional<ConceptId> resolved = Resolve(cui);
  if (!resolved) throw Error(ErrorCode::kUnknownConcept, cui);
  return concepts_.at(*resolved);
}

const Atom *Ontology::FindAtom(const AtomId &aui) const {
  auto it = atoms_.find(aui);
  return it == atoms_.end() ? nullptr : &it->second;
}

const TermString *Ontology::FindTerm(const StringId &sui) const {
  auto it = terms_.find(sui);
  return it == terms_.end() ? nullptr : &it->second;
}

const TermString &Ontology::TermOf(const Atom &atom) const {
  return terms_.at(atom.sui);
}

bool Ontology::IsActive(const ConceptId &cui) const {
  const Concept *c = Find(cui);
  return c != nullptr && c->active();
}

size_t Ontology::active_count() const {
  size_t n = 0;
  for (const auto &[cui, c] : concepts_) n += c.active() ? 1 : 0;
  return n;
}

namespace {

template <typename Map>
void SortByCode(std::vector<ConceptId> *ids, const Map &concepts) {
  std::sort(ids->begin(), ids->end(),
            [&](const ConceptId &a, const ConceptId &b) {
              return concepts.at(a).code < concepts.at(b).code;
            });
}

}  // namespace

std::vector<ConceptId> Ontology::Roots() const {
  std::vector<ConceptId> roots;
  for (const auto &[cui, c] : concepts_) {
    if (c.active() && !c.parent) roots.push_back(cui);
  }
  SortByCode(&roots, concepts_);
  return roots;
}

std::vector<ConceptId> Ontology::Children(const ConceptId &cui) const {
  std::vector<ConceptId> out;
  auto it = children_.find(cui);
  if (it == children_.end()) return out;
  out.assign(it->second.begin(), it->second.end());
  SortByCode(&out, concepts_);
  return out;
}

std::vector<ConceptId> Ontology::Descendants(const ConceptId &cui) const {
  std::vector<ConceptId> out;
  if (!IsActive(cui)) return out;
  std::deque<ConceptId> queue{cui};
  std::set<ConceptId> seen{cui};
  while (!queue.empty()) {
    ConceptId next = std::move(queue.front());
    queue.pop_front();
    auto it = children_.find(next);
    out.push_back(std::move(next));
    if (it == children_.end()) continue;
    for (const ConceptId &child : it->second) {
      if (seen.insert(child).second) queue.push_back(child);
    }
  }
  return out;
}

bool Ontology::IsInSubtree(const ConceptId &candidate,
                           const ConceptId &ancestor) const {
  const Concept *c = Find(candidate);
  size_t hops = 0;
  while (c != nullptr) {
    if (c->cui == ancestor) return true;
    if (!c->parent || ++hops > concepts_.size()) return false;
    c = Find(*c->parent);
  }
  return false;
}

ConceptId Ontology::TopCategoryOf(const ConceptId &cui) const {
  const Concept *c = &RequireActive(cui);
  size_t hops = 0;
  while (c->parent) {
    const Concept *p = Find(*c->parent);
    if (p == nullptr || ++hops > concepts_.size()) break;
    c = p;
  }
  return c->cui;
}

int Ontology::Depth(const ConceptId &cui) const {
  const Concept *c = &RequireActive(cui);
  int depth = 1;
  while (c->parent) {
    const Concept *p = Find(*c->parent);
    if (p == nullptr || depth > static_cast<int>(concepts_.size())) break;
    c = p;
    ++depth;
  }
  return depth;
}

std::vector<const Atom *> Ontology::AtomsOf(const ConceptId &cui) const {
  std::vector<const Atom *> out;
  auto it = atoms_by_cui_.find(cui);
  if (it == atoms_by_cui_.end()) return out;
  for (const AtomId &aui : it->second) out.push_back(&atoms_.at(aui));
  return out;
}

std::vector<const ContextText *> Ontology::ContextsOf(
    const ConceptId &cui) const {
  std::vector<const ContextText *> out;
  auto it = contexts_by_cui_.find(cui);
  if (it == contexts_by_cui_.end()) return out;
  for (const ContextId &id : it->second) out.push_back(&contexts_.at(id));
  return out;
}

std::string Ontology::PreferredText(const ConceptId &cui) const {
  const Concept *c = Find(cui);
  if (c == nullptr || c->preferred_aui.empty()) return {};
  const Atom *a = FindAtom(c->preferred_aui);
  if (a == nullptr) return {};
  const TermString *t = FindTerm(a->sui);
  return t ? t->text : std::string();
}

std::set<ConceptId> Ontology::LookupText(std::string_view normalized,
                                         Language language) const {
  std::set<ConceptId> out;
  auto term = term_index_.find(std::make_pair(std::string(normalized), language));
  if (term == term_index_.end()) return out;
  auto atoms = atoms_by_sui_.find(term->second);
  if (atoms == atoms_by_sui_.end()) return out;
  for (const AtomId &aui : atoms->second) {
    const ConceptId &cui = atoms_.at(aui).cui;
    if (IsActive(cui)) out.insert(cui);
  }
  return out;
}

std::set<ConceptId> Ontology::LookupText(std::string_view normalized) const {
  std::set<ConceptId> out = LookupText(normalized, Language::kZh);
  std::set<ConceptId> en = LookupText(normalized, Language::kEn);
  out.insert(en.begin(), en.end());
  return out;
}

// --- validation -------------------------------------------------------------

namespace {

uint64_t Ordinal(std::string_view id) {
  return std::stoull(std::string(id.substr(1)));
}

}  // namespace

std::vector<Violation> Ontology::Validate() const {
  std::vector<Violation> out;
  auto report = [&](ViolationKind kind, std::string subject,
                    std::string detail) {
    out.push_back({kind, std::move(subject), std::move(detail)});
  };
  auto check_id = [&](IdKind kind, const std::string &id, uint64_t counter) {
    if (!IsValidId(kind, id)) {
      report(ViolationKind::kMalformedId, id, "bad identifier");
    } else if (Ordinal(id) > counter) {
      report(ViolationKind::kCounterBehind, id,
             "allocated beyond counter " + std::to_string(counter));
    }
  };

  std::map<std::string, ConceptId> codes;
  for (const auto &[cui, c] : concepts_) {
    check_id(IdKind::kConcept, cui, counters_.cui);
    const Concept *parent = nullptr;
    if (c.parent) {
      parent = Find(*c.parent);
      if (parent == nullptr) {
        report(ViolationKind::kDanglingReference, cui,
               "parent " + *c.parent + " does not exist");
      }
    }
    if (c.forward && Find(*c.forward) == nullptr) {
      report(ViolationKind::kDanglingReference, cui,
             "forward " + *c.forward + " does not exist");
    }
    if (!c.active()) {
      auto a = atoms_by_cui_.find(cui);
      auto x = contexts_by_cui_.find(cui);
      if ((a != atoms_by_cui_.end() && !a->second.empty()) ||
          (x != contexts_by_cui_.end() && !x->second.empty())) {
        report(ViolationKind::kRetiredOwnsData, cui,
               "retired concept still owns atoms or context texts");
      }
      continue;
    }

    // Cycle check: a well-formed chain reaches a root within |concepts| hops.
    {
      const Concept *walk = &c;
      size_t hops = 0;
      bool cyclic = false;
      while (walk->parent) {
        walk = Find(*walk->parent);
        if (walk == nullptr) break;
        if (walk->cui == cui || ++hops > concepts_.size()) {
          cyclic = true;
          break;
        }
      }
      if (cyclic) report(ViolationKind::kCycle, cui, "parent chain loops");
    }

    if (parent != nullptr && !parent->active()) {
      report(ViolationKind::kInactiveParent, cui,
             "parent " + parent->cui + " is retired");
    }
    if (c.code.empty()) {
      report(ViolationKind::kCodePrefixViolation, cui, "missing code");
    } else if (!c.parent) {
      if (c.code.depth() != 1) {
        report(ViolationKind::kCodePrefixViolation, cui,
               "root code " + c.code.str() + " has more than one segment");
      }
    } else if (parent != nullptr && c.code.parent() != parent->code) {
      report(ViolationKind::kCodePrefixViolation, cui,
             "code " + c.code.str() + " does not extend parent code " +
                 parent->code.str());
    }
    if (!c.code.empty()) {
      auto [it, inserted] = codes.emplace(c.code.str(), cui);
      if (!inserted) {
        report(ViolationKind::kDuplicateCode, cui,
               "code " + c.code.str() + " also used by " + it->second);
      }
    }

    const Atom *pref = c.preferred_aui.empty() ? nullptr : FindAtom(c.preferred_aui);
    if (pref == nullptr) {
      report(ViolationKind::kDanglingReference, cui,
             "preferred atom '" + c.preferred_aui + "' does not exist");
    } else if (pref->cui != cui) {
      report(ViolationKind::kPreferredAtomMismatch, cui,
             "preferred atom " + pref->aui + " belongs to " + pref->cui);
    }
  }

  std::set<std::pair<std::string, Language>> term_keys;
  for (const auto &[sui, t] : terms_) {
    check_id(IdKind::kString, sui, counters_.sui);
    if (t.text.empty() || Normalize(t.raw) != t.text) {
      report(ViolationKind::kNotNormalized, sui,
             "stored text does not equal normalize(raw)");
    }
    if (!term_keys.emplace(t.text, t.language).second) {
      report(ViolationKind::kDuplicateTermString, sui,
             "duplicate (text, language) key '" + t.text + "'");
    }
  }

  std::set<std::tuple<ConceptId, StringId, std::string>> atom_keys;
  std::map<StringId, std::set<ConceptId>> ring_owners;
  for (const auto &[aui, a] : atoms_) {
    check_id(IdKind::kAtom, aui, counters_.aui);
    const bool has_concept = Find(a.cui) != nullptr;
    if (!has_concept) {
      report(ViolationKind::kDanglingReference, aui,
             "concept " + a.cui + " does not exist");
    }
    if (FindTerm(a.sui) == nullptr) {
      report(ViolationKind::kDanglingReference, aui,
             "term string " + a.sui + " does not exist");
    }
    if (!atom_keys.emplace(a.cui, a.sui, a.source).second) {
      report(ViolationKind::kDuplicateAtom, aui,
             "duplicate (cui, sui, source) triple");
    }
    if (has_concept && IsActive(a.cui)) ring_owners[a.sui].insert(a.cui);
  }
  for (const auto &[sui, owners] : ring_owners) {
    if (owners.size() > 1) {
      std::string list;
      for (const ConceptId &cui : owners) list += (list.empty() ? "" : ",") + cui;
      report(ViolationKind::kSharedSynonym, sui,
             "term attached to several active concepts: " + list);
    }
  }

  for (const auto &[id, x] : contexts_) {
    check_id(IdKind::kContext, id, counters_.ctx);
    if (Find(x.cui) == nullptr) {
      report(ViolationKind::kDanglingReference, id,
             "concept " + x.cui + " does not exist");
    }
  }
  return out;
}

}  // namespace ispo
