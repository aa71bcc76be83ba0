#ifndef ISPO_SERVICE_SEARCH_H_
#define ISPO_SERVICE_SEARCH_H_

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ispo/core/ontology.h"
#include "json.hpp"

namespace ispo::service {

enum class MatchKind { kPreferred, kSynonym };
std::string_view MatchKindName(MatchKind kind);

struct SearchResult {
  ConceptId cui;
  std::string matched_term;
  MatchKind match_kind = MatchKind::kSynonym;
  bool exact = false;
  // Filled for exact hits: every atom and context text of the concept.
  std::vector<AtomId> ring;
  std::vector<ContextId> contexts;
  std::optional<std::string> snippet;  // start of the first context text
};

// Synonym-expanded substring search. The query is normalized and expanded
// with the full synonym ring of every concept owning it verbatim; a concept
// matches when one of its synonyms contains any expansion. Exact owners come
// first, then shorter matched terms, then smaller CUIs. `root` restricts
// results to that subtree. Throws EmptyQuery and UnknownScopeRoot.
std::vector<SearchResult> Search(const Ontology &ontology, std::string_view query,
                                 const std::optional<ConceptId> &root = {});

nlohmann::json ToJson(const SearchResult &result, const Ontology &ontology);

struct NeighborhoodNode {
  ConceptId cui;
  int distance = 0;
};

struct NeighborhoodGraph {
  ConceptId center;
  std::vector<NeighborhoodNode> nodes;                 // BFS order
  std::vector<std::pair<ConceptId, ConceptId>> edges;  // (parent, child)
};

// Concepts within `radius` parent/child hops of `cui`. Throws UnknownConcept
// and InvalidArgument for a negative radius.
NeighborhoodGraph Neighborhood(const Ontology &ontology, const ConceptId &cui,
                               int radius = 1);

nlohmann::json ToJson(const NeighborhoodGraph &graph, const Ontology &ontology);

// Compact description of one concept: id, code, label, parent.
nlohmann::json ConceptSummary(const Ontology &ontology, const ConceptId &cui);
// Summary plus atoms, contexts, child count and top category.
nlohmann::json ConceptDetail(const Ontology &ontology, const ConceptId &cui);

}  // namespace ispo::service

#endif  // ISPO_SERVICE_SEARCH_H_
