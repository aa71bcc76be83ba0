#ifndef ISPO_CORE_ONTOLOGY_H_
#define ISPO_CORE_ONTOLOGY_H_

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ispo/core/corpus.h"
#include "ispo/core/ids.h"
#include "ispo/core/text.h"

namespace ispo {

enum class ConceptStatus { kActive, kRetired };
enum class ContextKind { kDefinition, kAncientReference, kChiefComplaint };

std::string_view ContextKindName(ContextKind kind);
ContextKind ParseContextKind(std::string_view name);

struct TermString {
  StringId sui;
  std::string text;  // normalized
  std::string raw;   // as first seen
  Language language = Language::kEn;

  bool operator==(const TermString &) const = default;
};

struct Atom {
  AtomId aui;
  ConceptId cui;
  StringId sui;
  std::string source;
  std::optional<std::string> source_code;

  bool operator==(const Atom &) const = default;
};

struct Concept {
  ConceptId cui;
  ClassificationCode code;
  std::optional<ConceptId> parent;
  AtomId preferred_aui;  // empty only for retired concepts
  ConceptStatus status = ConceptStatus::kActive;
  std::optional<ConceptId> forward;  // set when retired by a merge
  int next_segment = 0;              // last child ordinal issued

  bool active() const { return status == ConceptStatus::kActive; }
  bool operator==(const Concept &) const = default;
};

struct ContextText {
  ContextId id;
  ConceptId cui;
  ContextKind kind = ContextKind::kDefinition;
  std::string text;
  std::string source;

  bool operator==(const ContextText &) const = default;
};

// Allocation state. Ordinals are the last value issued per identifier kind.
struct OntologyCounters {
  uint64_t cui = 0;
  uint64_t sui = 0;
  uint64_t aui = 0;
  uint64_t ctx = 0;
  int root_segments = 0;

  bool operator==(const OntologyCounters &) const = default;
};

// Flat view of a store, in identifier order. Used by serializers.
struct OntologyRecords {
  OntologyCounters counters;
  std::vector<Concept> concepts;
  std::vector<TermString> terms;
  std::vector<Atom> atoms;
  std::vector<ContextText> contexts;
};

enum class ViolationKind {
  kMalformedId,
  kDanglingReference,
  kCycle,
  kCodePrefixViolation,
  kDuplicateCode,
  kInactiveParent,
  kPreferredAtomMismatch,
  kDuplicateAtom,
  kDuplicateTermString,
  kNotNormalized,
  kSharedSynonym,
  kRetiredOwnsData,
  kCounterBehind,
};

std::string_view ViolationKindName(ViolationKind kind);

struct Violation {
  ViolationKind kind;
  std::string subject;
  std::string detail;
};

struct AddTermResult {
  Atom atom;
  bool created = false;
};

// In-memory symptom concept store: CUI/SUI/AUI synonym rings arranged in a
// single-parent classification tree.
//
// Mutations validate all preconditions before touching state, so a throwing
// call leaves the store unchanged. Retired identifiers stay resolvable for
// reads (Resolve/Get follow merge forwarding) but every mutation on them
// fails with UnknownConcept.
class Ontology {
 public:
  Ontology() = default;

  // Builds a store from serialized records without validating them. Throws
  // DuplicateId when two records share an identifier.
  static Ontology FromRecords(OntologyRecords records);
  OntologyRecords ToRecords() const;

  // --- mutations ---------------------------------------------------------

  ConceptId CreateConcept(std::string_view label, Language language,
                          const std::optional<ConceptId> &parent,
                          std::string_view source);

  // Attaches a synonym. Reuses the TermString for an equal (normalized text,
  // language) key; returns the existing atom when (cui, sui, source) is
  // already present.
  AddTermResult AddTerm(const ConceptId &cui, std::string_view text,
                        Language language, std::string_view source,
                        std::optional<std::string> source_code = std::nullopt);

  // Moves `cui` and its subtree under `new_parent`. Returns the new code of
  // every concept whose code changed.
  std::map<ConceptId, std::string> Reparent(const ConceptId &cui,
                                            const ConceptId &new_parent);

  // Folds `retire` into `keep` and returns `keep`.
  ConceptId Merge(const ConceptId &keep, const ConceptId &retire);

  // Retires a childless concept, dropping its atoms and context texts.
  void DeleteConcept(const ConceptId &cui);

  // Removes a non-preferred atom. The TermString is kept.
  void RemoveAtom(const AtomId &aui);

  void SetPreferredAtom(const ConceptId &cui, const AtomId &aui);

  ContextId AddContext(const ConceptId &cui, ContextKind kind,
                       std::string_view text, std::string_view source);

  // Chooses each concept's preferred atom by corpus frequency of its
  // normalized text. Ties: count, then zh before en, then smaller text, then
  // the current preferred atom, then smaller AUI. Concepts whose synonyms
  // never occur are left alone. Returns the (cui, aui) pairs that changed.
  std::vector<std::pair<ConceptId, AtomId>> SetPreferredTerms(
      const AnnotatedCorpus &corpus);

  // --- reads -------------------------------------------------------------

  std::vector<Violation> Validate() const;

  // Exact id lookup, no forwarding.
  const Concept *Find(const ConceptId &cui) const;
  // Follows merge forwarding to an active concept.
  std::optional<ConceptId> Resolve(const ConceptId &cui) const;
  // Resolve + fetch; throws UnknownConcept.
  const Concept &Get(const ConceptId &cui) const;
  const Atom *FindAtom(const AtomId &aui) const;
  const TermString *FindTerm(const StringId &sui) const;
  const TermString &TermOf(const Atom &atom) const;

  bool IsActive(const ConceptId &cui) const;
  std::vector<ConceptId> Roots() const;     // active, by code
  std::vector<ConceptId> Children(const ConceptId &cui) const;  // by code
  std::vector<ConceptId> Descendants(const ConceptId &cui) const;  // incl. self
  // True when `candidate` lies in the subtree rooted at `ancestor`.
  bool IsInSubtree(const ConceptId &candidate, const ConceptId &ancestor) const;
  // Root ancestor of an active concept.
  ConceptId TopCategoryOf(const ConceptId &cui) const;
  int Depth(const ConceptId &cui) const;  // roots have depth 1

  std::vector<const Atom *> AtomsOf(const ConceptId &cui) const;
  std::vector<const ContextText *> ContextsOf(const ConceptId &cui) const;
  std::string PreferredText(const ConceptId &cui) const;

  // Active concepts whose ring holds the normalized text in that language.
  std::set<ConceptId> LookupText(std::string_view normalized,
                                 Language language) const;
  // Same, across both languages.
  std::set<ConceptId> LookupText(std::string_view normalized) const;

  const std::map<ConceptId, Concept> &concepts() const { return concepts_; }
  const std::map<StringId, TermString> &terms() const { return terms_; }
  const std::map<AtomId, Atom> &atoms() const { return atoms_; }
  const std::map<ContextId, ContextText> &contexts() const { return contexts_; }
  const OntologyCounters &counters() const { return counters_; }
  size_t active_count() const;

  bool operator==(const Ontology &other) const {
    return counters_ == other.counters_ && concepts_ == other.concepts_ &&
           terms_ == other.terms_ && atoms_ == other.atoms_ &&
           contexts_ == other.contexts_;
  }

 private:
  Concept &MutableActive(const ConceptId &cui);
  const Concept &RequireActive(const ConceptId &cui) const;
  void RequireSource(std::string_view source) const;
  // Synonym rings stay disjoint across active concepts.
  void RequireUnshared(const std::string &normalized, Language language,
                       const std::optional<ConceptId> &owner) const;
  StringId InternTerm(std::string_view raw, std::string normalized,
                      Language language);
  // Assigns a fresh code under `parent` to `cui` and rebases its subtree.
  void Relocate(const ConceptId &cui, const ConceptId &parent,
                std::map<ConceptId, std::string> *changed);
  void RebuildIndices();

  std::map<ConceptId, Concept> concepts_;
  std::map<StringId, TermString> terms_;
  std::map<AtomId, Atom> atoms_;
  std::map<ContextId, ContextText> contexts_;
  OntologyCounters counters_;

  // Derived; rebuilt from the primary maps on load.
  std::map<std::pair<std::string, Language>, StringId> term_index_;
  std::map<ConceptId, std::set<AtomId>> atoms_by_cui_;
  std::map<StringId, std::set<AtomId>> atoms_by_sui_;
  std::map<ConceptId, std::set<ConceptId>> children_;
  std::map<ConceptId, std::set<ContextId>> contexts_by_cui_;
};

}  // namespace ispo

#endif  // ISPO_CORE_ONTOLOGY_H_
