#ifndef ISPO_COVERAGE_COVERAGE_H_
#define ISPO_COVERAGE_COVERAGE_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ispo/core/corpus.h"
#include "ispo/core/fixed.h"
#include "ispo/core/ontology.h"
#include "json.hpp"

namespace ispo::coverage {

// Occurrence rates are entity_count / sample_size. Band edges and the
// minimum rate are decimals with at most nine fractional digits; every
// comparison is done exactly in integer arithmetic.
struct CoverageOptions {
  std::string min_rate = "0.0001";
  // Interior band edges. The band list is {min_rate} + the edges strictly
  // between min_rate and 1 + {1}; bands are [lo, hi) except the last, which
  // is closed and also holds rates above 1.
  std::vector<std::string> band_edges = {"0.001", "0.005", "0.01", "0.05"};
};

struct Band {
  std::string lo;
  std::string hi;
  int64_t terms = 0;
  int64_t covered = 0;
  int64_t entities = 0;
  int64_t covered_entities = 0;
  std::optional<Fixed> coverage;  // covered / terms, percent; none when empty
};

struct CoverageReport {
  std::string corpus;
  int64_t sample_size = 0;
  std::string min_rate;
  int64_t total_terms = 0;
  int64_t covered_terms = 0;
  int64_t total_entities = 0;
  int64_t covered_entities = 0;
  Fixed term_coverage;    // percent
  Fixed entity_coverage;  // percent
  std::vector<Band> bands;
  std::map<std::string, int64_t> per_category;  // top category label
  std::vector<std::string> uncovered;           // by entity count desc
};

// Throws EmptyCorpus when the corpus has no records or no sample size.
CoverageReport ComputeCoverage(const AnnotatedCorpus &corpus,
                               const Ontology &ontology,
                               const CoverageOptions &options = {});

nlohmann::json ToJson(const CoverageReport &report);
std::string ToTsv(const CoverageReport &report);

struct ImpactRow {
  std::string term;  // normalized input term
  ConceptId concept_id;
  std::string concept_label;
  std::vector<std::string> expanded_terms;
  int64_t pre_count = 0;
  int64_t post_count = 0;
};

struct ImpactReport {
  std::vector<ImpactRow> rows;  // input order
  int64_t distinct_input_terms = 0;
  int64_t mapped_concepts = 0;
  std::vector<std::string> unmapped;
  // Output dimensions: mapped concepts plus one per unmapped term.
  int64_t output_dimensions = 0;
  Fixed dimension_reduction;  // percent
  // Set when the corpus carries no patient ids at all; counts are then sums
  // of entity counts rather than distinct patients.
  bool approximate = false;
};

// Links each input term exactly, expands it to every corpus surface linking
// to the concept or a descendant, and counts distinct patients before and
// after. Throws EmptyTerms, and MissingPatientIds when the corpus carries
// patient ids but a record the report needs does not.
ImpactReport ComputeImpact(const AnnotatedCorpus &corpus,
                           const std::vector<std::string> &terms,
                           const Ontology &ontology);

nlohmann::json ToJson(const ImpactReport &report);
std::string ToTsv(const ImpactReport &report);

}  // namespace ispo::coverage

#endif  // ISPO_COVERAGE_COVERAGE_H_
