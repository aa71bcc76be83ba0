#ifndef ISPO_IO_TSV_H_
#define ISPO_IO_TSV_H_

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ispo/core/corpus.h"
#include "ispo/core/ids.h"

namespace ispo::io {

// Corpus TSV:
//   #sample_size=40800          required, positive
//   #name=HBTCMC                optional
//   surface<TAB>entity_count[<TAB>patient_ids]
//   fever<TAB>1130<TAB>p0001|p0002|...
// Duplicate surfaces merge (counts add, patient ids union). Repeated header
// and comment lines are tolerated so concatenated files load.
AnnotatedCorpus ReadCorpusTsv(std::string_view text, std::string name = {});
std::string WriteCorpusTsv(const AnnotatedCorpus &corpus);

// Rules TSV: source<TAB>target1|target2|...  Targets are CUIs or term
// strings; resolution happens in the linker.
struct RawRule {
  std::string source;
  std::vector<std::string> targets;
  int line = 0;
};
std::vector<RawRule> ReadRulesTsv(std::string_view text);

struct Xref {
  std::string external_id;
  ConceptId cui;
  bool operator==(const Xref &) const = default;
};

// external id -> CUI. One CUI per external id; many external ids may share
// a CUI.
class XrefSet {
 public:
  // Throws ConflictingXref when `external_id` already maps elsewhere.
  void Add(const std::string &external_id, const ConceptId &cui);
  const std::vector<Xref> &pairs() const { return pairs_; }
  std::optional<ConceptId> Lookup(std::string_view external_id) const;
  size_t size() const { return pairs_.size(); }

 private:
  std::vector<Xref> pairs_;
  std::map<std::string, ConceptId, std::less<>> index_;
};

// Xref TSV: external_id<TAB>cui
XrefSet ReadXrefTsv(std::string_view text);

// One term per line; blank and #-comment lines skipped.
std::vector<std::string> ReadTermList(std::string_view text);

}  // namespace ispo::io

#endif  // ISPO_IO_TSV_H_
