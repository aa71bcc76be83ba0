#include <algorithm>
#include <map>
#include <queue>

#include "check_error.h"
#include "doctest.h"
#include "fixtures.h"
#include "ispo/core/random.h"
#include "ispo/core/taxonomy.h"
#include "ispo/metrics/metrics.h"

using namespace ispo;

namespace {

// Independent shape oracle: depth by walking parent pointers.
struct Shape {
  int64_t roots = 0, classes = 0, leaves = 0, synonyms = 0;
  int max_depth = 0;
  int64_t leaf_depth_sum = 0;
  std::map<int, int64_t> levels;
};

Shape OracleShape(const Ontology &o) {
  Shape s;
  std::map<ConceptId, int> child_count;
  for (const auto &[cui, c] : o.concepts()) {
    if (c.active() && c.parent) ++child_count[*c.parent];
  }
  for (const auto &[cui, c] : o.concepts()) {
    if (!c.active()) continue;
    ++s.classes;
    int depth = 1;
    for (const Concept *p = &c; p->parent; p = &o.concepts().at(*p->parent)) ++depth;
    if (!c.parent) ++s.roots;
    ++s.levels[depth];
    s.max_depth = std::max(s.max_depth, depth);
    if (!child_count.count(cui)) {
      ++s.leaves;
      s.leaf_depth_sum += depth;
    }
  }
  for (const auto &[aui, a] : o.atoms()) s.synonyms += o.IsActive(a.cui);
  return s;
}

}  // namespace

TEST_CASE("metrics on trivial trees") {
  Ontology o;
  ConceptId r = o.CreateConcept("root", Language::kEn, std::nullopt, "MANUAL");
  auto m = metrics::ComputeMetrics(o);
  CHECK(m.root_count == 1);
  CHECK(m.class_count == 1);
  CHECK(m.synonym_count >= 1);
  CHECK(m.leaf_count == 1);
  CHECK(m.max_depth == 1);
  CHECK(m.avg_depth.str() == "1.00");
  CHECK(m.avg_width.str() == "1.0");

  ConceptId a = o.CreateConcept("a", Language::kEn, r, "MANUAL");
  o.CreateConcept("b", Language::kEn, a, "MANUAL");
  m = metrics::ComputeMetrics(o);
  CHECK(m.class_count == 3);
  CHECK(m.leaf_count == 1);
  CHECK(m.max_depth == 3);
  CHECK(m.avg_depth.str() == "3.00");
  CHECK(m.avg_width.str() == "1.0");
  CHECK(m.level_counts == std::vector<int64_t>{1, 1, 1});

  CHECK_ERROR(metrics::ComputeMetrics(Ontology{}), ErrorCode::kEmptyOntology);
}

TEST_CASE("metrics on shaped trees match the walk oracle") {
  for (const testing::TreeShape &shape : {testing::kIspoShape, testing::kSoShape}) {
    Ontology o = testing::BuildShapedTree(shape);
    REQUIRE(o.Validate().empty());
    Shape s = OracleShape(o);
    CHECK(s.roots == shape.roots);
    CHECK(s.classes == shape.classes);
    CHECK(s.leaves == shape.leaves);
    CHECK(s.max_depth == shape.max_depth);
    CHECK(s.leaf_depth_sum == shape.leaf_depth_sum);
    CHECK(s.synonyms == shape.synonyms);

    auto m = metrics::ComputeMetrics(o);
    CHECK(m.root_count == s.roots);
    CHECK(m.class_count == s.classes);
    CHECK(m.leaf_count == s.leaves);
    CHECK(m.synonym_count == s.synonyms);
    CHECK(m.max_depth == s.max_depth);
    int64_t level_total = 0;
    for (size_t d = 0; d < m.level_counts.size(); ++d) {
      CHECK(m.level_counts[d] == s.levels[static_cast<int>(d) + 1]);
      level_total += m.level_counts[d];
    }
    CHECK(level_total == m.class_count);
    CHECK(m.level_counts.back() > 0);
    CHECK(static_cast<int>(m.level_counts.size()) == m.max_depth);
    CHECK(m.avg_depth.value() ==
          doctest::Approx(static_cast<double>(s.leaf_depth_sum) / s.leaves).epsilon(0.005));
  }
  CHECK(metrics::ComputeMetrics(testing::BuildShapedTree(testing::kIspoShape)).avg_width.str() ==
        "314.7");
  CHECK(metrics::ComputeMetrics(testing::BuildShapedTree(testing::kSoShape)).avg_width.str() ==
        "127.0");
  CHECK(metrics::ComputeMetrics(testing::BuildShapedTree(testing::kIspoShape)).avg_depth.str() ==
        "4.76");
  CHECK(metrics::ComputeMetrics(testing::BuildShapedTree(testing::kSoShape)).avg_depth.str() ==
        "3.14");
}

TEST_CASE("metrics ignore record order and retired concepts") {
  Ontology o = testing::BuildShapedTree(testing::kSoShape);
  OntologyRecords rec = o.ToRecords();
  SeededRng rng(11);
  rng.Shuffle(std::span<Concept>(rec.concepts));
  rng.Shuffle(std::span<Atom>(rec.atoms));
  rng.Shuffle(std::span<TermString>(rec.terms));
  Ontology shuffled = Ontology::FromRecords(rec);
  auto a = metrics::ComputeMetrics(o);
  auto b = metrics::ComputeMetrics(shuffled);
  CHECK(metrics::ToJson(a) == metrics::ToJson(b));

  // Deleting a leaf retires it; it no longer counts.
  ConceptId leaf;
  for (const auto &[cui, c] : o.concepts()) {
    if (o.Children(cui).empty() && c.parent) leaf = cui;
  }
  o.DeleteConcept(leaf);
  CHECK(metrics::ComputeMetrics(o).class_count == a.class_count - 1);
}

TEST_CASE("category distribution") {
  Ontology o;
  auto roots = SeedTopCategories(&o);
  const ConceptId nervous = roots.at(std::string(kTopCategories[0]));
  // 689 concepts under nervous system out of 3,147.
  for (int i = 1; i < 689; ++i) {
    o.CreateConcept("n" + std::to_string(i), Language::kEn, nervous, "MANUAL");
  }
  for (int i = 0; i < 3147 - 689 - 11; ++i) {
    o.CreateConcept("o" + std::to_string(i), Language::kEn,
                    roots.at(std::string(kTopCategories[1 + i % 11])),
                    i % 2 ? "UMLS" : "MANUAL");
  }
  REQUIRE(o.active_count() == 3147);
  auto d = metrics::ComputeCategoryDistribution(o);
  CHECK(d.total == 3147);
  REQUIRE(d.rows.size() == 12);
  CHECK(d.rows[0].count == 689);
  CHECK(d.rows[0].percent.str() == "21.89");
  double share = 0;
  int64_t count = 0;
  for (const auto &row : d.rows) {
    share += row.share;
    count += row.count;
  }
  CHECK(share == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(count == d.total);

  auto umls = metrics::ComputeCategoryDistribution(o, metrics::GroupBy::kAtomSource, "UMLS");
  CHECK(umls.total == (3147 - 689 - 11) / 2);
  for (const auto &row : umls.rows) CHECK(row.root != nervous);
  auto none = metrics::ComputeCategoryDistribution(o, metrics::GroupBy::kAtomSource, "HPO");
  CHECK(none.rows.empty());
  CHECK(none.total == 0);

  Ontology one;
  ConceptId r = one.CreateConcept("only", Language::kEn, std::nullopt, "MANUAL");
  one.CreateConcept("kid", Language::kEn, r, "MANUAL");
  auto single = metrics::ComputeCategoryDistribution(one);
  REQUIRE(single.rows.size() == 1);
  CHECK(single.rows[0].percent.str() == "100.00");
}

TEST_CASE("crossmap report") {
  testing::CrossmapFixture f = testing::BuildCrossmapFixture(476, 388, 5);
  auto r = metrics::ComputeCrossmap(f.ontology, f.external, f.xrefs);
  CHECK(r.external_total == 944);
  CHECK(r.mapped == 476);
  CHECK(r.target_concepts == 388);
  CHECK(r.external_coverage.str() == "50.42");
  CHECK(r.eligible_coverage.str() == "50.42");

  // Marginals against a brute-force pass over the xref pairs.
  std::map<std::string, int64_t> by_ext, by_ispo;
  for (const io::Xref &x : f.xrefs.pairs()) {
    ++by_ext[f.external.CategoryOf(x.external_id)];
    ++by_ispo[f.ontology.PreferredText(f.ontology.TopCategoryOf(x.cui))];
  }
  int64_t total = 0;
  for (size_t i = 0; i < r.external_categories.size(); ++i) {
    int64_t row = 0;
    for (size_t j = 0; j < r.ispo_categories.size(); ++j) row += r.confusion[i][j];
    CHECK(row == by_ext[r.external_categories[i]]);
    total += row;
  }
  for (size_t j = 0; j < r.ispo_categories.size(); ++j) {
    int64_t col = 0;
    for (size_t i = 0; i < r.external_categories.size(); ++i) col += r.confusion[i][j];
    CHECK(col == by_ispo[r.ispo_categories[j]]);
  }
  CHECK(total == r.mapped);

  std::set<io::TypeLabel> symptoms{io::TypeLabel::kSymptom};
  auto eligible = metrics::ComputeCrossmap(f.ontology, f.external, f.xrefs, symptoms);
  int64_t eligible_mapped = 0;
  for (const io::Xref &x : f.xrefs.pairs()) {
    eligible_mapped += f.external.Find(x.external_id)->type_label == io::TypeLabel::kSymptom;
  }
  CHECK(eligible.eligible_total == 627);
  CHECK(eligible.eligible_mapped == eligible_mapped);

  auto empty = metrics::ComputeCrossmap(f.ontology, f.external, io::XrefSet{});
  CHECK(empty.external_coverage.str() == "0.00");
  for (const auto &row : empty.confusion) {
    for (int64_t v : row) CHECK(v == 0);
  }

  io::XrefSet dangling;
  dangling.Add("SYMP:9999999", f.ontology.Roots()[0]);
  CHECK_ERROR(metrics::ComputeCrossmap(f.ontology, f.external, dangling),
              ErrorCode::kDanglingXref);
}

TEST_CASE("crossmap identity map is diagonal") {
  const std::string obo =
      "[Term]\nid: X:0\nname: symptom\n\n"
      "[Term]\nid: X:1\nname: head symptom\nis_a: X:0\n\n"
      "[Term]\nid: X:2\nname: chest symptom\nis_a: X:0\n\n"
      "[Term]\nid: X:3\nname: headache\nis_a: X:1\n\n"
      "[Term]\nid: X:4\nname: chest pain\nis_a: X:2\n";
  io::ExternalVocabulary v = io::ImportOboSubset(obo);
  // The same hierarchy with its category level promoted to roots.
  Ontology o;
  ConceptId head = o.CreateConcept("head symptom", Language::kEn, std::nullopt, "SO");
  ConceptId chest = o.CreateConcept("chest symptom", Language::kEn, std::nullopt, "SO");
  ConceptId ha = o.CreateConcept("headache", Language::kEn, head, "SO");
  ConceptId cp = o.CreateConcept("chest pain", Language::kEn, chest, "SO");
  io::XrefSet x;
  x.Add("X:1", head);
  x.Add("X:2", chest);
  x.Add("X:3", ha);
  x.Add("X:4", cp);
  auto r = metrics::ComputeCrossmap(o, v, x);
  CHECK(r.mapped == 4);
  for (size_t i = 0; i < r.external_categories.size(); ++i) {
    for (size_t j = 0; j < r.ispo_categories.size(); ++j) {
      const bool diagonal = r.external_categories[i] == r.ispo_categories[j];
      if (!diagonal) CHECK(r.confusion[i][j] == 0);
      if (diagonal) CHECK(r.confusion[i][j] == 2);
    }
  }
  // X:0 is the unmapped uncategorized root.
  CHECK(r.external_coverage.str() == "80.00");
}

TEST_CASE("type distribution") {
  for (const testing::TypeColumn &col : testing::kTypeColumns) {
    io::ExternalVocabulary v = io::ImportOboSubset(testing::BuildTypedObo(col, 10, 2), col.name);
    auto t = metrics::ComputeTypeDistribution(v);
    int64_t total = 0;
    for (int64_t n : col.counts) total += n;
    CHECK(t.labeled == total);
    REQUIRE(t.rows.size() == 7);
    for (size_t i = 0; i < 7; ++i) {
      CHECK(t.rows[i].count == col.counts[i]);
      CHECK(t.rows[i].percent == Fixed::Percent(col.counts[i], total));
    }
  }
  CHECK_ERROR(metrics::ComputeTypeDistribution(io::ImportOboSubset("[Term]\nid: A:1\nname: a\n")),
              ErrorCode::kNoLabels);
  auto all = metrics::ComputeTypeDistribution(io::ImportOboSubset(
      "[Term]\nid: A:1\nname: a\nproperty_value: type_label \"Disease\"\n"));
  CHECK(all.rows[3].percent.str() == "100.00");
}

TEST_CASE("report rendering") {
  Ontology o = testing::BuildShapedTree(testing::kSoShape);
  auto m = metrics::ComputeMetrics(o);
  nlohmann::json j = metrics::ToJson(m);
  CHECK(j["avg_width"] == "127.0");
  CHECK(j["class_count"] == 889);
  const std::string text = metrics::ToText(m);
  CHECK(text.find("127.0") != std::string::npos);
  CHECK(text.find("3.14") != std::string::npos);
}
