#include "ispo/metrics/metrics.h"

#include <algorithm>
#include <deque>
#include <map>

#include "ispo/core/error.h"
#include "ispo/io/table.h"

namespace ispo::metrics {

using nlohmann::json;

StructuralMetrics ComputeMetrics(const Ontology &ontology) {
  StructuralMetrics m;
  const std::vector<ConceptId> roots = ontology.Roots();
  if (roots.empty()) throw Error(ErrorCode::kEmptyOntology, "");

  int64_t leaf_depth_sum = 0;
  std::deque<std::pair<ConceptId, int>> queue;
  for (const ConceptId &r : roots) queue.emplace_back(r, 1);
  while (!queue.empty()) {
    auto [cui, depth] = std::move(queue.front());
    queue.pop_front();
    ++m.class_count;
    m.synonym_count += static_cast<int64_t>(ontology.AtomsOf(cui).size());
    if (static_cast<int>(m.level_counts.size()) < depth) {
      m.level_counts.resize(depth, 0);
    }
    ++m.level_counts[depth - 1];
    m.max_depth = std::max(m.max_depth, depth);
    const std::vector<ConceptId> children = ontology.Children(cui);
    if (children.empty()) {
      ++m.leaf_count;
      leaf_depth_sum += depth;
    }
    for (const ConceptId &c : children) queue.emplace_back(c, depth + 1);
  }
  m.root_count = static_cast<int64_t>(roots.size());
  m.avg_depth = Fixed::Ratio(leaf_depth_sum, m.leaf_count, 2);
  m.avg_width = Fixed::Ratio(m.class_count, m.max_depth, 1);
  return m;
}

namespace {

void FillShares(CategoryDistribution *d) {
  for (DistributionRow &row : d->rows) {
    if (d->total > 0) {
      row.share = static_cast<double>(row.count) / static_cast<double>(d->total);
      row.percent = Fixed::Percent(row.count, d->total);
    }
  }
}

}  // namespace

CategoryDistribution ComputeCategoryDistribution(const Ontology &ontology,
                                                 GroupBy group_by,
                                                 std::string_view source) {
  std::map<ConceptId, int64_t> per_root;
  for (const auto &[cui, c] : ontology.concepts()) {
    if (!c.active()) continue;
    if (group_by == GroupBy::kAtomSource) {
      bool touched = false;
      for (const Atom *a : ontology.AtomsOf(cui)) {
        if (a->source == source) {
          touched = true;
          break;
        }
      }
      if (!touched) continue;
    }
    ++per_root[ontology.TopCategoryOf(cui)];
  }

  CategoryDistribution d;
  for (const ConceptId &root : ontology.Roots()) {
    auto it = per_root.find(root);
    const int64_t count = it == per_root.end() ? 0 : it->second;
    if (group_by == GroupBy::kAtomSource && count == 0) continue;
    d.rows.push_back({ontology.PreferredText(root), root, count, 0, {}});
    d.total += count;
  }
  FillShares(&d);
  return d;
}

CategoryDistribution ComputeExternalDistribution(
    const io::ExternalVocabulary &external) {
  CategoryDistribution d;
  std::map<std::string, size_t> index;
  int64_t uncategorized = 0;
  for (const io::ExternalConcept &c : external.concepts()) {
    std::string category = external.CategoryOf(c.id);
    ++d.total;
    if (category == io::kUncategorized) {
      ++uncategorized;
      continue;
    }
    auto [it, inserted] = index.emplace(category, d.rows.size());
    if (inserted) d.rows.push_back({category, std::nullopt, 0, 0, {}});
    ++d.rows[it->second].count;
  }
  if (uncategorized > 0) {
    d.rows.push_back({std::string(io::kUncategorized), std::nullopt,
                      uncategorized, 0, {}});
  }
  FillShares(&d);
  return d;
}

CrossmapReport ComputeCrossmap(const Ontology &ontology,
                               const io::ExternalVocabulary &external,
                               const io::XrefSet &xrefs,
                               const std::set<io::TypeLabel> &eligible_types) {
  CrossmapReport r;
  r.external_total = static_cast<int64_t>(external.concepts().size());

  bool any_label = false;
  for (const io::ExternalConcept &c : external.concepts()) {
    any_label = any_label || c.type_label.has_value();
  }
  auto eligible = [&](const io::ExternalConcept &c) {
    if (eligible_types.empty() || !any_label) return true;
    return c.type_label && eligible_types.count(*c.type_label) > 0;
  };
  for (const io::ExternalConcept &c : external.concepts()) {
    if (eligible(c)) ++r.eligible_total;
  }

  std::map<std::string, std::map<ConceptId, int64_t>> counts;
  std::set<ConceptId> targets;
  for (const io::Xref &x : xrefs.pairs()) {
    const io::ExternalConcept *c = external.Find(x.external_id);
    if (c == nullptr) {
      throw Error(ErrorCode::kDanglingXref,
                  "unknown external id " + x.external_id);
    }
    std::optional<ConceptId> cui = ontology.Resolve(x.cui);
    if (!cui) {
      throw Error(ErrorCode::kDanglingXref, "unknown concept " + x.cui);
    }
    ++r.mapped;
    if (eligible(*c)) ++r.eligible_mapped;
    targets.insert(*cui);
    ++counts[external.CategoryOf(c->id)][ontology.TopCategoryOf(*cui)];
  }
  r.target_concepts = static_cast<int64_t>(targets.size());
  r.external_coverage = r.external_total > 0
                            ? Fixed::Percent(r.mapped, r.external_total)
                            : Fixed::Percent(0, 1);
  r.eligible_coverage = r.eligible_total > 0
                            ? Fixed::Percent(r.eligible_mapped, r.eligible_total)
                            : Fixed::Percent(0, 1);

  std::vector<ConceptId> columns = ontology.Roots();
  for (const ConceptId &root : columns) {
    r.ispo_categories.push_back(ontology.PreferredText(root));
  }
  for (const auto &[category, row] : counts) {
    if (category != io::kUncategorized) r.external_categories.push_back(category);
  }
  if (counts.count(std::string(io::kUncategorized))) {
    r.external_categories.emplace_back(io::kUncategorized);
  }
  for (const std::string &category : r.external_categories) {
    const auto &row = counts.at(category);
    std::vector<int64_t> line(columns.size(), 0);
    for (size_t j = 0; j < columns.size(); ++j) {
      auto it = row.find(columns[j]);
      if (it == row.end()) continue;
      line[j] = it->second;
      r.cells.push_back({category, r.ispo_categories[j], it->second});
    }
    r.confusion.push_back(std::move(line));
  }
  return r;
}

TypeDistribution ComputeTypeDistribution(const io::ExternalVocabulary &external) {
  constexpr io::TypeLabel kOrder[] = {
      io::TypeLabel::kSymptom,         io::TypeLabel::kSymptomCategory,
      io::TypeLabel::kSyndrome,        io::TypeLabel::kDisease,
      io::TypeLabel::kPathologyPhysiology, io::TypeLabel::kLaboratoryTest,
      io::TypeLabel::kOtherDescription,
  };
  std::map<io::TypeLabel, int64_t> counts;
  TypeDistribution t;
  for (const io::ExternalConcept &c : external.concepts()) {
    if (c.type_label) {
      ++counts[*c.type_label];
      ++t.labeled;
    } else {
      ++t.unlabeled;
    }
  }
  if (t.labeled == 0) throw Error(ErrorCode::kNoLabels, external.name());
  for (io::TypeLabel label : kOrder) {
    const int64_t n = counts[label];
    t.rows.push_back({label, n,
                      static_cast<double>(n) / static_cast<double>(t.labeled),
                      Fixed::Percent(n, t.labeled)});
  }
  return t;
}

// --- rendering ----------------------------------------------------------------

json ToJson(const StructuralMetrics &m) {
  return json{{"root_count", m.root_count},
              {"class_count", m.class_count},
              {"synonym_count", m.synonym_count},
              {"leaf_count", m.leaf_count},
              {"max_depth", m.max_depth},
              {"avg_depth", m.avg_depth.str()},
              {"avg_width", m.avg_width.str()},
              {"level_counts", m.level_counts}};
}

json ToJson(const CategoryDistribution &d) {
  json rows = json::array();
  for (const DistributionRow &row : d.rows) {
    json j{{"category", row.category},
           {"count", row.count},
           {"share", row.share},
           {"percent", row.percent.str()}};
    if (row.root) j["root"] = *row.root;
    rows.push_back(std::move(j));
  }
  return json{{"total", d.total}, {"rows", std::move(rows)}};
}

json ToJson(const CrossmapReport &r) {
  json cells = json::array();
  for (const CrossmapCell &c : r.cells) {
    cells.push_back({{"external_category", c.external_category},
                     {"ispo_category", c.ispo_category},
                     {"count", c.count}});
  }
  return json{{"external_total", r.external_total},
              {"mapped", r.mapped},
              {"target_concepts", r.target_concepts},
              {"eligible_total", r.eligible_total},
              {"eligible_mapped", r.eligible_mapped},
              {"external_coverage", r.external_coverage.str()},
              {"eligible_coverage", r.eligible_coverage.str()},
              {"external_categories", r.external_categories},
              {"ispo_categories", r.ispo_categories},
              {"confusion", r.confusion},
              {"cells", std::move(cells)}};
}

json ToJson(const TypeDistribution &t) {
  json rows = json::array();
  for (const TypeRow &row : t.rows) {
    rows.push_back({{"type", io::TypeLabelName(row.label)},
                    {"count", row.count},
                    {"share", row.share},
                    {"percent", row.percent.str()}});
  }
  return json{{"labeled", t.labeled},
              {"unlabeled", t.unlabeled},
              {"rows", std::move(rows)}};
}

std::string ToText(const StructuralMetrics &m) {
  io::TextTable table({"Root count", "Class count", "Synonym count",
                       "Leaf count", "Max depth", "Avg depth", "Avg width"});
  table.AddRow({std::to_string(m.root_count), std::to_string(m.class_count),
                std::to_string(m.synonym_count), std::to_string(m.leaf_count),
                std::to_string(m.max_depth), m.avg_depth.str(),
                m.avg_width.str()});
  return table.Render();
}

std::string ToText(const CategoryDistribution &d) {
  io::TextTable table({"Category", "Count", "Share"});
  for (const DistributionRow &row : d.rows) {
    table.AddRow({row.category, std::to_string(row.count),
                  row.percent.str() + "%"});
  }
  table.AddRow({"total", std::to_string(d.total), ""});
  return table.Render();
}

std::string ToText(const CrossmapReport &r) {
  std::string out;
  io::TextTable summary({"External", "Mapped", "Coverage", "Eligible",
                         "Eligible mapped", "Eligible coverage"});
  summary.AddRow({std::to_string(r.external_total), std::to_string(r.mapped),
                  r.external_coverage.str() + "%",
                  std::to_string(r.eligible_total),
                  std::to_string(r.eligible_mapped),
                  r.eligible_coverage.str() + "%"});
  out += summary.Render();
  if (!r.cells.empty()) {
    out += "\n";
    io::TextTable cells({"External category", "ISPO category", "Count"});
    for (const CrossmapCell &c : r.cells) {
      cells.AddRow({c.external_category, c.ispo_category, std::to_string(c.count)});
    }
    out += cells.Render();
  }
  return out;
}

std::string ToText(const TypeDistribution &t) {
  io::TextTable table({"Type", "Count", "Share"});
  for (const TypeRow &row : t.rows) {
    table.AddRow({std::string(io::TypeLabelName(row.label)),
                  std::to_string(row.count), row.percent.str() + "%"});
  }
  return table.Render();
}

}  // namespace ispo::metrics
