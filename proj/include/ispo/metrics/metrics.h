#ifndef ISPO_METRICS_METRICS_H_
#define ISPO_METRICS_METRICS_H_

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ispo/core/fixed.h"
#include "ispo/core/ontology.h"
#include "ispo/io/tsv.h"
#include "ispo/io/vocabulary.h"
#include "json.hpp"

namespace ispo::metrics {

// Tree shape of the active concepts. Roots have depth 1; avg_depth is the
// mean leaf depth (2 places) and avg_width is class_count / max_depth
// (1 place), both rounded half-up.
struct StructuralMetrics {
  int64_t root_count = 0;
  int64_t class_count = 0;
  int64_t synonym_count = 0;
  int64_t leaf_count = 0;
  int max_depth = 0;
  Fixed avg_depth;
  Fixed avg_width;
  std::vector<int64_t> level_counts;  // [0] = depth 1
};

// Throws EmptyOntology when there is no active concept.
StructuralMetrics ComputeMetrics(const Ontology &ontology);

struct DistributionRow {
  std::string category;
  std::optional<ConceptId> root;  // set for internal categories
  int64_t count = 0;
  double share = 0;
  Fixed percent;
};

struct CategoryDistribution {
  int64_t total = 0;
  std::vector<DistributionRow> rows;  // root code order / first-seen order
};

enum class GroupBy { kConcept, kAtomSource };

// Concepts per top-level category. In kAtomSource mode only concepts holding
// at least one atom from `source` are counted.
CategoryDistribution ComputeCategoryDistribution(
    const Ontology &ontology, GroupBy group_by = GroupBy::kConcept,
    std::string_view source = {});

// Distribution of an external vocabulary over its own categories.
CategoryDistribution ComputeExternalDistribution(
    const io::ExternalVocabulary &external);

struct CrossmapCell {
  std::string external_category;
  std::string ispo_category;
  int64_t count = 0;
};

struct CrossmapReport {
  int64_t external_total = 0;
  int64_t mapped = 0;
  int64_t eligible_total = 0;
  int64_t eligible_mapped = 0;
  int64_t target_concepts = 0;  // distinct CUIs receiving an xref
  Fixed external_coverage;      // percent
  Fixed eligible_coverage;      // percent
  std::vector<std::string> external_categories;  // matrix rows
  std::vector<std::string> ispo_categories;      // matrix columns
  std::vector<std::vector<int64_t>> confusion;   // [row][column]
  std::vector<CrossmapCell> cells;               // non-zero entries
};

// Coverage of an external vocabulary through xrefs, and the category
// confusion between the two hierarchies. `eligible_types` restricts the
// eligible denominator; empty means every concept. Throws DanglingXref.
CrossmapReport ComputeCrossmap(const Ontology &ontology,
                               const io::ExternalVocabulary &external,
                               const io::XrefSet &xrefs,
                               const std::set<io::TypeLabel> &eligible_types = {});

struct TypeRow {
  io::TypeLabel label;
  int64_t count = 0;
  double share = 0;
  Fixed percent;
};

struct TypeDistribution {
  int64_t labeled = 0;
  int64_t unlabeled = 0;
  std::vector<TypeRow> rows;  // TypeLabel order, zero rows included
};

// Throws NoLabels when no concept carries a type label.
TypeDistribution ComputeTypeDistribution(const io::ExternalVocabulary &external);

// --- rendering ---

nlohmann::json ToJson(const StructuralMetrics &m);
nlohmann::json ToJson(const CategoryDistribution &d);
nlohmann::json ToJson(const CrossmapReport &r);
nlohmann::json ToJson(const TypeDistribution &t);

std::string ToText(const StructuralMetrics &m);
std::string ToText(const CategoryDistribution &d);
std::string ToText(const CrossmapReport &r);
std::string ToText(const TypeDistribution &t);

}  // namespace ispo::metrics

#endif  // ISPO_METRICS_METRICS_H_
