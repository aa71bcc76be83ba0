#ifndef ISPO_IO_VOCABULARY_H_
#define ISPO_IO_VOCABULARY_H_

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ispo/core/ontology.h"

namespace ispo::io {

// Reviewed concept type of an external vocabulary entry.
enum class TypeLabel {
  kSymptom,
  kSymptomCategory,
  kSyndrome,
  kDisease,
  kPathologyPhysiology,
  kLaboratoryTest,
  kOtherDescription,
};

std::string_view TypeLabelName(TypeLabel label);
// Case-, space- and slash-insensitive: "Pathology/ Physiology" parses.
std::optional<TypeLabel> ParseTypeLabel(std::string_view text);

struct ExternalConcept {
  std::string id;
  std::string label;
  std::vector<std::string> synonyms;
  std::vector<std::string> parents;
  std::optional<TypeLabel> type_label;
  std::optional<std::string> category;
};

inline constexpr std::string_view kUncategorized = "uncategorized";

// A third-party terminology (SO, MeSH, ICD-11 ...) loaded for comparison.
class ExternalVocabulary {
 public:
  explicit ExternalVocabulary(std::string name = {}) : name_(std::move(name)) {}

  // Throws DuplicateId.
  void Add(ExternalConcept concept_record);
  // Records is_a targets that do not resolve. Call after all Add()s.
  void ResolveParents();

  const std::string &name() const { return name_; }
  const std::vector<ExternalConcept> &concepts() const { return concepts_; }
  const ExternalConcept *Find(std::string_view id) const;
  // (child, missing parent) pairs found by ResolveParents().
  const std::vector<std::pair<std::string, std::string>> &dangling() const {
    return dangling_;
  }

  // Explicit category when present; otherwise the label of the ancestor one
  // level below a root along first parents. Roots and concepts whose chain
  // breaks report kUncategorized.
  std::string CategoryOf(std::string_view id) const;

 private:
  std::string name_;
  std::vector<ExternalConcept> concepts_;
  std::map<std::string, size_t, std::less<>> index_;
  std::vector<std::pair<std::string, std::string>> dangling_;
};

// OBO 1.2 subset: [Term] stanzas with id, name, synonym, is_a, is_obsolete
// and `property_value: type_label|category "..."`. Other stanzas and tags
// are ignored. Accepts LF or CRLF line endings.
ExternalVocabulary ImportOboSubset(std::string_view text,
                                   std::string name = "external");
ExternalVocabulary ImportOboSubset(std::istream &in,
                                   std::string name = "external");

struct VocabularyImport {
  Ontology ontology;
  std::map<std::string, ConceptId> cui_of;       // external id -> CUI
  std::vector<std::string> skipped_synonyms;     // already owned elsewhere
  std::vector<std::string> unplaced;             // ids on an is_a cycle
};

// Turns an external vocabulary into a concept store: one concept per entry
// under its first resolvable parent (a dangling first parent makes a root),
// label and synonyms as atoms of `source` carrying the external id. Throws
// UnknownSource, DuplicateRootLabel and SharedSynonym for clashing labels.
VocabularyImport ToOntology(const ExternalVocabulary &vocabulary,
                            std::string_view source);

}  // namespace ispo::io

#endif  // ISPO_IO_VOCABULARY_H_
