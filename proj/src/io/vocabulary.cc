#include "ispo/io/vocabulary.h"

#include <cctype>
#include <deque>
#include <istream>
#include <iterator>
#include <set>

#include "ispo/core/error.h"
#include "ispo/core/text.h"
#include "ispo/io/lines.h"

namespace ispo::io {

std::string_view TypeLabelName(TypeLabel label) {
  switch (label) {
    case TypeLabel::kSymptom: return "Symptom";
    case TypeLabel::kSymptomCategory: return "SymptomCategory";
    case TypeLabel::kSyndrome: return "Syndrome";
    case TypeLabel::kDisease: return "Disease";
    case TypeLabel::kPathologyPhysiology: return "PathologyPhysiology";
    case TypeLabel::kLaboratoryTest: return "LaboratoryTest";
    case TypeLabel::kOtherDescription: return "OtherDescription";
  }
  return "Symptom";
}

std::optional<TypeLabel> ParseTypeLabel(std::string_view text) {
  std::string key;
  for (char c : text) {
    if (c == ' ' || c == '/' || c == '_' || c == '-') continue;
    key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  if (key == "symptom") return TypeLabel::kSymptom;
  if (key == "symptomcategory") return TypeLabel::kSymptomCategory;
  if (key == "syndrome") return TypeLabel::kSyndrome;
  if (key == "disease") return TypeLabel::kDisease;
  if (key == "pathologyphysiology") return TypeLabel::kPathologyPhysiology;
  if (key == "laboratorytest") return TypeLabel::kLaboratoryTest;
  if (key == "otherdescription") return TypeLabel::kOtherDescription;
  return std::nullopt;
}

void ExternalVocabulary::Add(ExternalConcept concept_record) {
  if (index_.count(concept_record.id)) {
    throw Error(ErrorCode::kDuplicateId, concept_record.id);
  }
  index_.emplace(concept_record.id, concepts_.size());
  concepts_.push_back(std::move(concept_record));
}

void ExternalVocabulary::ResolveParents() {
  dangling_.clear();
  for (const ExternalConcept &c : concepts_) {
    for (const std::string &p : c.parents) {
      if (!index_.count(p)) dangling_.emplace_back(c.id, p);
    }
  }
}

const ExternalConcept *ExternalVocabulary::Find(std::string_view id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &concepts_[it->second];
}

std::string ExternalVocabulary::CategoryOf(std::string_view id) const {
  const ExternalConcept *c = Find(id);
  if (c == nullptr) return std::string(kUncategorized);
  if (c->category) return *c->category;
  if (c->parents.empty()) return std::string(kUncategorized);

  std::set<std::string_view> seen{c->id};
  const ExternalConcept *below_root = c;
  while (true) {
    const ExternalConcept *parent = Find(below_root->parents.front());
    if (parent == nullptr) return std::string(kUncategorized);
    if (parent->parents.empty()) return below_root->label;
    if (!seen.insert(parent->id).second) return std::string(kUncategorized);
    below_root = parent;
  }
}

namespace {

std::string_view Trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

std::string FirstToken(std::string_view value) {
  value = Trim(value);
  size_t end = value.find_first_of(" \t!");
  return std::string(value.substr(0, end));
}

// Parses a leading double-quoted OBO string; returns the unescaped text and
// the remainder after the closing quote.
std::pair<std::string, std::string_view> Quoted(std::string_view value,
                                                int line) {
  value = Trim(value);
  if (value.empty() || value.front() != '"') {
    throw Error(ErrorCode::kParseError, "expected quoted string", line);
  }
  std::string out;
  for (size_t i = 1; i < value.size(); ++i) {
    char c = value[i];
    if (c == '\\' && i + 1 < value.size()) {
      char n = value[++i];
      out.push_back(n == 'n' ? '\n' : n == 't' ? '\t' : n);
    } else if (c == '"') {
      return {out, value.substr(i + 1)};
    } else {
      out.push_back(c);
    }
  }
  throw Error(ErrorCode::kParseError, "unterminated quoted string", line);
}

struct Stanza {
  int line = 0;
  std::optional<std::string> id;
  std::optional<std::string> name;
  std::vector<std::string> synonyms;
  std::vector<std::string> parents;
  std::optional<TypeLabel> type_label;
  std::optional<std::string> category;
  bool obsolete = false;
};

void Flush(Stanza *stanza, ExternalVocabulary *vocab) {
  if (stanza->line == 0 || stanza->obsolete) return;
  if (!stanza->id || stanza->id->empty()) {
    throw Error(ErrorCode::kParseError, "[Term] stanza without id",
                stanza->line);
  }
  if (!stanza->name || stanza->name->empty()) {
    throw Error(ErrorCode::kParseError, "term " + *stanza->id + " has no name",
                stanza->line);
  }
  if (vocab->Find(*stanza->id) != nullptr) {
    throw Error(ErrorCode::kDuplicateId, *stanza->id, stanza->line);
  }
  vocab->Add({*stanza->id, *stanza->name, std::move(stanza->synonyms),
              std::move(stanza->parents), stanza->type_label,
              std::move(stanza->category)});
}

}  // namespace

ExternalVocabulary ImportOboSubset(std::string_view text, std::string name) {
  ExternalVocabulary vocab(std::move(name));
  std::optional<Stanza> current;
  int line_no = 0;
  for (std::string_view raw : SplitLines(text)) {
    ++line_no;
    std::string_view line = Trim(raw);
    if (line.empty() || line.front() == '!') continue;
    if (line.front() == '[') {
      if (current) Flush(&*current, &vocab);
      current.reset();
      if (line == "[Term]") {
        current.emplace();
        current->line = line_no;
      }
      continue;
    }
    if (!current) continue;  // header tags or a non-Term stanza
    size_t colon = line.find(':');
    if (colon == std::string_view::npos) {
      throw Error(ErrorCode::kParseError, "expected 'tag: value'", line_no);
    }
    std::string_view tag = Trim(line.substr(0, colon));
    std::string_view value = Trim(line.substr(colon + 1));
    if (tag == "id") {
      current->id = FirstToken(value);
    } else if (tag == "name") {
      current->name = std::string(value);
    } else if (tag == "synonym") {
      current->synonyms.push_back(Quoted(value, line_no).first);
    } else if (tag == "is_a") {
      std::string parent = FirstToken(value);
      if (parent.empty()) {
        throw Error(ErrorCode::kParseError, "empty is_a target", line_no);
      }
      current->parents.push_back(std::move(parent));
    } else if (tag == "is_obsolete") {
      current->obsolete = FirstToken(value) == "true";
    } else if (tag == "property_value") {
      std::string key = FirstToken(value);
      std::string_view rest = Trim(value.substr(value.find(key) + key.size()));
      std::string payload = !rest.empty() && rest.front() == '"'
                                ? Quoted(rest, line_no).first
                                : FirstToken(rest);
      if (key == "type_label") {
        current->type_label = ParseTypeLabel(payload);
        if (!current->type_label) {
          throw Error(ErrorCode::kParseError,
                      "unknown type label '" + payload + "'", line_no);
        }
      } else if (key == "category") {
        current->category = std::move(payload);
      }
    }
  }
  if (current) Flush(&*current, &vocab);
  vocab.ResolveParents();
  return vocab;
}

ExternalVocabulary ImportOboSubset(std::istream &in, std::string name) {
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return ImportOboSubset(text, std::move(name));
}

VocabularyImport ToOntology(const ExternalVocabulary &vocabulary,
                            std::string_view source) {
  VocabularyImport out;
  std::map<std::string, std::vector<const ExternalConcept *>> children;
  std::deque<const ExternalConcept *> queue;
  for (const ExternalConcept &c : vocabulary.concepts()) {
    if (c.parents.empty() || vocabulary.Find(c.parents.front()) == nullptr) {
      queue.push_back(&c);
    } else {
      children[c.parents.front()].push_back(&c);
    }
  }
  while (!queue.empty()) {
    const ExternalConcept *c = queue.front();
    queue.pop_front();
    std::optional<ConceptId> parent;
    if (!c->parents.empty()) {
      auto it = out.cui_of.find(c->parents.front());
      if (it != out.cui_of.end()) parent = it->second;
    }
    const ConceptId cui = out.ontology.CreateConcept(
        c->label, DetectLanguage(Normalize(c->label)), parent, source);
    out.cui_of.emplace(c->id, cui);
    for (const std::string &syn : c->synonyms) {
      try {
        out.ontology.AddTerm(cui, syn, DetectLanguage(Normalize(syn)), source,
                             c->id);
      } catch (const Error &e) {
        if (e.code() != ErrorCode::kSharedSynonym &&
            e.code() != ErrorCode::kEmptyText) {
          throw;
        }
        out.skipped_synonyms.push_back(c->id + ": " + syn);
      }
    }
    auto kids = children.find(c->id);
    if (kids != children.end()) {
      for (const ExternalConcept *k : kids->second) queue.push_back(k);
    }
  }
  for (const ExternalConcept &c : vocabulary.concepts()) {
    if (!out.cui_of.count(c.id)) out.unplaced.push_back(c.id);
  }
  return out;
}

}  // namespace ispo::io
