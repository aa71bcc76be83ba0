#include "ispo/service/search.h"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

#include "ispo/core/error.h"
#include "ispo/core/text.h"

namespace ispo::service {

using nlohmann::json;

std::string_view MatchKindName(MatchKind kind) {
  return kind == MatchKind::kPreferred ? "preferred" : "synonym";
}

namespace {

constexpr size_t kSnippetLength = 120;

std::string Snippet(const std::string &text) {
  std::u32string cps = CodePoints(text);
  if (cps.size() <= kSnippetLength) return text;
  return ToUtf8(cps.substr(0, kSnippetLength)) + "...";
}

}  // namespace

std::vector<SearchResult> Search(const Ontology &ontology, std::string_view query,
                                 const std::optional<ConceptId> &root) {
  const std::string q = Normalize(query);
  if (q.empty()) throw Error(ErrorCode::kEmptyQuery, "");
  std::set<ConceptId> scope;
  if (root) {
    if (!ontology.IsActive(*root)) throw Error(ErrorCode::kUnknownScopeRoot, *root);
    const std::vector<ConceptId> d = ontology.Descendants(*root);
    scope.insert(d.begin(), d.end());
  }

  const std::set<ConceptId> owners = ontology.LookupText(q);
  std::set<std::string> expansions = {q};
  for (const ConceptId &cui : owners) {
    for (const Atom *a : ontology.AtomsOf(cui)) {
      expansions.insert(ontology.TermOf(*a).text);
    }
  }

  std::vector<SearchResult> results;
  for (const auto &[cui, c] : ontology.concepts()) {
    if (!c.active()) continue;
    if (root && !scope.count(cui)) continue;
    const bool exact = owners.count(cui) > 0;
    std::optional<std::string> best;
    if (exact) {
      best = q;
    } else {
      for (const Atom *a : ontology.AtomsOf(cui)) {
        const std::string &text = ontology.TermOf(*a).text;
        bool hit = false;
        for (const std::string &e : expansions) {
          if (text.find(e) != std::string::npos) {
            hit = true;
            break;
          }
        }
        if (!hit) continue;
        if (!best || CodePointLength(text) < CodePointLength(*best) ||
            (CodePointLength(text) == CodePointLength(*best) && text < *best)) {
          best = text;
        }
      }
    }
    if (!best) continue;

    SearchResult r;
    r.cui = cui;
    r.matched_term = *best;
    r.exact = exact;
    r.match_kind = *best == ontology.PreferredText(cui) ? MatchKind::kPreferred
                                                        : MatchKind::kSynonym;
    const std::vector<const ContextText *> contexts = ontology.ContextsOf(cui);
    if (!contexts.empty()) r.snippet = Snippet(contexts.front()->text);
    if (exact) {
      for (const Atom *a : ontology.AtomsOf(cui)) r.ring.push_back(a->aui);
      for (const ContextText *t : contexts) r.contexts.push_back(t->id);
    }
    results.push_back(std::move(r));
  }

  std::sort(results.begin(), results.end(),
            [](const SearchResult &a, const SearchResult &b) {
              if (a.exact != b.exact) return a.exact;
              const size_t la = CodePointLength(a.matched_term);
              const size_t lb = CodePointLength(b.matched_term);
              if (la != lb) return la < lb;
              return a.cui < b.cui;
            });
  return results;
}

json ToJson(const SearchResult &r, const Ontology &ontology) {
  json j = ConceptSummary(ontology, r.cui);
  j["matched_term"] = r.matched_term;
  j["match_kind"] = MatchKindName(r.match_kind);
  j["exact"] = r.exact;
  if (r.snippet) j["snippet"] = *r.snippet;
  if (r.exact) {
    json ring = json::array();
    for (const AtomId &aui : r.ring) {
      const Atom &a = *ontology.FindAtom(aui);
      const TermString &t = ontology.TermOf(a);
      ring.push_back({{"aui", aui}, {"text", t.text}, {"lang", LanguageName(t.language)},
                      {"source", a.source}});
    }
    json contexts = json::array();
    for (const ContextText *c : ontology.ContextsOf(r.cui)) {
      contexts.push_back({{"id", c->id}, {"kind", ContextKindName(c->kind)},
                          {"text", c->text}, {"source", c->source}});
    }
    j["synonyms"] = std::move(ring);
    j["contexts"] = std::move(contexts);
  }
  return j;
}

NeighborhoodGraph Neighborhood(const Ontology &ontology, const ConceptId &cui,
                               int radius) {
  if (!ontology.IsActive(cui)) throw Error(ErrorCode::kUnknownConcept, cui);
  if (radius < 0) throw Error(ErrorCode::kInvalidArgument, "negative radius");
  NeighborhoodGraph g;
  g.center = cui;
  std::map<ConceptId, int> seen = {{cui, 0}};
  std::deque<ConceptId> queue = {cui};
  while (!queue.empty()) {
    ConceptId at = queue.front();
    queue.pop_front();
    const int d = seen[at];
    g.nodes.push_back({at, d});
    if (d == radius) continue;
    std::vector<ConceptId> next = ontology.Children(at);
    if (const std::optional<ConceptId> &p = ontology.Get(at).parent) {
      next.insert(next.begin(), *p);
    }
    for (const ConceptId &n : next) {
      if (seen.emplace(n, d + 1).second) queue.push_back(n);
    }
  }
  for (const NeighborhoodNode &n : g.nodes) {
    const std::optional<ConceptId> &p = ontology.Get(n.cui).parent;
    if (p && seen.count(*p)) g.edges.emplace_back(*p, n.cui);
  }
  return g;
}

json ToJson(const NeighborhoodGraph &g, const Ontology &ontology) {
  json nodes = json::array();
  for (const NeighborhoodNode &n : g.nodes) {
    json j = ConceptSummary(ontology, n.cui);
    j["distance"] = n.distance;
    nodes.push_back(std::move(j));
  }
  json edges = json::array();
  for (const auto &[parent, child] : g.edges) {
    edges.push_back({{"type", "parent_of"}, {"from", parent}, {"to", child}});
  }
  return {{"center", g.center}, {"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

json ConceptSummary(const Ontology &ontology, const ConceptId &cui) {
  const Concept &c = ontology.Get(cui);
  json j{{"cui", c.cui},
         {"code", c.code.str()},
         {"label", ontology.PreferredText(c.cui)},
         {"status", c.active() ? "active" : "retired"}};
  j["parent"] = c.parent ? json(*c.parent) : json(nullptr);
  if (c.forward) j["forward"] = *c.forward;
  return j;
}

json ConceptDetail(const Ontology &ontology, const ConceptId &cui) {
  json j = ConceptSummary(ontology, cui);
  const Concept &c = ontology.Get(cui);
  json atoms = json::array();
  for (const Atom *a : ontology.AtomsOf(c.cui)) {
    const TermString &t = ontology.TermOf(*a);
    json atom{{"aui", a->aui},
              {"sui", a->sui},
              {"text", t.text},
              {"raw", t.raw},
              {"lang", LanguageName(t.language)},
              {"source", a->source},
              {"preferred", a->aui == c.preferred_aui}};
    if (a->source_code) atom["source_code"] = *a->source_code;
    atoms.push_back(std::move(atom));
  }
  json contexts = json::array();
  for (const ContextText *t : ontology.ContextsOf(c.cui)) {
    contexts.push_back({{"id", t->id}, {"kind", ContextKindName(t->kind)},
                        {"text", t->text}, {"source", t->source}});
  }
  j["atoms"] = std::move(atoms);
  j["contexts"] = std::move(contexts);
  if (c.active()) {
    j["child_count"] = ontology.Children(c.cui).size();
    j["top_category"] = ontology.TopCategoryOf(c.cui);
    j["depth"] = ontology.Depth(c.cui);
  }
  return j;
}

}  // namespace ispo::service
