#ifndef ISPO_TESTS_SUPPORT_FIXTURES_H_
#define ISPO_TESTS_SUPPORT_FIXTURES_H_

// Synthetic ontologies, corpora and vocabularies shaped to published
// aggregates. Every builder is deterministic in its arguments.

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ispo/core/corpus.h"
#include "ispo/core/ontology.h"
#include "ispo/io/tsv.h"
#include "ispo/io/vocabulary.h"

namespace ispo::testing {

// --- cough ------------------------------------------------------------------

// Twelve top categories, id counter advanced so the cough concept receives
// C00000397, holding 咳嗽 (preferred, DDTCMS), cough (UMLS) and Cough from MeSH.
struct CoughFixture {
  Ontology ontology;
  ConceptId respiratory;
  ConceptId cough;
  ConceptId dry_cough;  // child of cough
  ConceptId headache;
  ConceptId facial_skin_pain;
};
CoughFixture BuildCoughFixture();

// --- shaped trees -----------------------------------------------------------

struct TreeShape {
  int roots;
  int classes;
  int leaves;
  int max_depth;
  int64_t leaf_depth_sum;
  int synonyms;
};

// Reference tree shapes. The leaf depth sums are the integers nearest to the printed
// averages times the leaf counts.
inline constexpr TreeShape kIspoShape{12, 3147, 2279, 10, 10848, 23475};
inline constexpr TreeShape kSoShape{14, 889, 712, 7, 2236, 1135};

Ontology BuildShapedTree(const TreeShape &shape);

// --- coverage corpora -------------------------------------------------------

struct CoverageRow {
  const char *name;
  int64_t sample_size;
  int64_t entities;
  int64_t terms;
  int64_t covered_entities;
  int64_t covered_terms;
};

inline constexpr std::array<CoverageRow, 3> kCoverageDatasets = {{
    {"HBTCMC", 40800, 168709, 648, 157392, 595},
    {"HBTCMS", 12626, 74630, 804, 72582, 619},
    {"SXTCM", 48057, 278433, 1132, 264461, 780},
}};

struct CoverageFixture {
  AnnotatedCorpus corpus;
  Ontology ontology;
};

// A long-tailed corpus whose terms at or above a 0.01% occurrence rate add up
// to `row`, plus `noise` covered terms below that rate.
CoverageFixture BuildCoverageFixture(const CoverageRow &row, uint64_t seed,
                                     int noise = 5);

// --- standardization impact -------------------------------------------------

// `terms` distinct surfaces spread over `concepts` concepts (every concept
// gets at least one); the corpus has counts only.
struct ImpactFixture {
  Ontology ontology;
  AnnotatedCorpus corpus;
  std::vector<std::string> terms;
};
ImpactFixture BuildImpactFixture(int terms, int concepts, uint64_t seed);

struct ImpactRowSpec {
  const char *original;
  std::vector<const char *> variants;  // excluding the original
  int64_t pre;
  int64_t post;
};

// Standardization rows whose variant lists fit a single-parent tree with disjoint
// synonym rings (the dyspnea row shares "labored breathing" with the
// difficulty-breathing row; it is left out).
const std::vector<ImpactRowSpec> &ImpactRows();

// Original term concepts with each variant a child concept (or a grandchild
// for a variant that extends another variant), and a 1,788-patient corpus
// whose per-row patient sets hit the pre and post counts.
ImpactFixture BuildPatientFixture(uint64_t seed);

// --- external vocabularies --------------------------------------------------

// Type audit columns: counts per TypeLabel in enum order.
struct TypeColumn {
  const char *name;
  const char *prefix;
  std::array<int64_t, 7> counts;
};

inline constexpr std::array<TypeColumn, 3> kTypeColumns = {{
    {"SO", "SYMP", {627, 46, 5, 203, 34, 16, 13}},
    {"MeSH", "MeSH", {290, 13, 22, 32, 21, 9, 12}},
    {"ICD-11", "ICD11", {417, 62, 13, 98, 60, 186, 398}},
}};

// OBO text with one root, `categories` category concepts below it and every
// other concept somewhere under a category, labelled per `column`.
std::string BuildTypedObo(const TypeColumn &column, int categories,
                          uint64_t seed);

struct CrossmapFixture {
  Ontology ontology;
  io::ExternalVocabulary external;
  io::XrefSet xrefs;
};

// The SO column vocabulary with `mapped` of its concepts cross-referenced
// onto `targets` distinct concepts of a 12-root ontology.
CrossmapFixture BuildCrossmapFixture(int mapped, int targets, uint64_t seed);

}  // namespace ispo::testing

#endif  // ISPO_TESTS_SUPPORT_FIXTURES_H_
