#include <cctype>
#include <cmath>
#include <set>

#include "check_error.h"
#include "doctest.h"
#include "fixtures.h"
#include "ispo/core/text.h"
#include "ispo/coverage/coverage.h"

using namespace ispo;

namespace {

bool WithinHundredth(const Fixed &got, double printed) {
  return std::llabs(got.scaled() - std::llround(printed * 100)) <= 1;
}

// Every active synonym string, collected by a scan of the record tables.
std::set<std::string> OracleVocabulary(const Ontology &o) {
  std::set<std::string> out;
  for (const auto &[aui, atom] : o.atoms()) {
    if (o.IsActive(atom.cui)) out.insert(o.FindTerm(atom.sui)->text);
  }
  return out;
}

struct OracleCoverage {
  int64_t terms = 0, covered = 0, entities = 0, covered_entities = 0;
};

// Filter by count * 10000 >= sample and count exact string hits.
OracleCoverage OracleCount(const AnnotatedCorpus &corpus, const Ontology &o,
                           int64_t lo_num = 1, int64_t lo_den = 10000) {
  const std::set<std::string> vocab = OracleVocabulary(o);
  OracleCoverage c;
  for (const CorpusRecord &r : corpus.records()) {
    if (r.entity_count * lo_den < lo_num * corpus.sample_size()) continue;
    ++c.terms;
    c.entities += r.entity_count;
    if (vocab.count(r.surface)) {
      ++c.covered;
      c.covered_entities += r.entity_count;
    }
  }
  return c;
}

// Ancestor walk through parent links.
bool UnderOrSelf(const Ontology &o, ConceptId cui, const ConceptId &top) {
  while (true) {
    if (cui == top) return true;
    const Concept &c = o.concepts().at(cui);
    if (!c.parent) return false;
    cui = *c.parent;
  }
}

std::set<std::string> OraclePatients(const testing::ImpactFixture &f,
                                     const std::string &term) {
  ConceptId top;
  for (const auto &[aui, atom] : f.ontology.atoms()) {
    if (f.ontology.IsActive(atom.cui) && f.ontology.FindTerm(atom.sui)->text == term) {
      top = atom.cui;
    }
  }
  std::set<std::string> out;
  for (const CorpusRecord &r : f.corpus.records()) {
    for (const auto &[aui, atom] : f.ontology.atoms()) {
      if (!f.ontology.IsActive(atom.cui)) continue;
      if (f.ontology.FindTerm(atom.sui)->text != r.surface) continue;
      if (UnderOrSelf(f.ontology, atom.cui, top)) {
        out.insert(r.patient_ids->begin(), r.patient_ids->end());
      }
    }
  }
  return out;
}

std::string ToUpperAscii(std::string s) {
  for (char &c : s) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

TEST_CASE("clinical dataset fixtures against the filter-and-count oracle") {
  const double entity_printed[] = {93.29, 97.26, 94.98};
  const double term_printed[] = {91.82, 76.99, 68.90};  // 595/648 is 91.82
  for (size_t i = 0; i < testing::kCoverageDatasets.size(); ++i) {
    const testing::CoverageRow &row = testing::kCoverageDatasets[i];
    CAPTURE(row.name);
    testing::CoverageFixture f = testing::BuildCoverageFixture(row, 11 + i);
    coverage::CoverageReport r = coverage::ComputeCoverage(f.corpus, f.ontology);
    OracleCoverage o = OracleCount(f.corpus, f.ontology);
    CHECK(r.total_terms == o.terms);
    CHECK(r.covered_terms == o.covered);
    CHECK(r.total_entities == o.entities);
    CHECK(r.covered_entities == o.covered_entities);
    CHECK(r.total_terms == row.terms);
    CHECK(r.covered_terms == row.covered_terms);
    CHECK(r.total_entities == row.entities);
    CHECK(r.covered_entities == row.covered_entities);
    CHECK(WithinHundredth(r.entity_coverage, entity_printed[i]));
    CHECK(WithinHundredth(r.term_coverage, term_printed[i]));
    CHECK(r.uncovered.size() == static_cast<size_t>(row.terms - row.covered_terms));

    int64_t band_terms = 0, band_covered = 0;
    for (const coverage::Band &b : r.bands) {
      band_terms += b.terms;
      band_covered += b.covered;
      CHECK(b.covered <= b.terms);
    }
    CHECK(band_terms == r.total_terms);
    CHECK(band_covered == r.covered_terms);
    int64_t per_category = 0;
    for (const auto &[label, n] : r.per_category) per_category += n;
    CHECK(per_category == r.covered_terms);
  }
  // The printed HBTCMC term coverage is not the ratio of its own counts.
  CHECK(Fixed::Percent(595, 648).str() == "91.82");
}

TEST_CASE("bands partition the filtered terms") {
  testing::CoverageFixture f = testing::BuildCoverageFixture(testing::kCoverageDatasets[2], 5);
  coverage::CoverageReport r = coverage::ComputeCoverage(f.corpus, f.ontology);
  REQUIRE(r.bands.size() == 5);
  CHECK(r.bands.front().lo == "0.0001");
  CHECK(r.bands.back().hi == "1");
  for (size_t i = 1; i < r.bands.size(); ++i) CHECK(r.bands[i].lo == r.bands[i - 1].hi);
  // Each band against the oracle restricted to [lo, hi).
  const int64_t edges[][2] = {{1, 10000}, {1, 1000}, {5, 1000}, {1, 100}, {5, 100}};
  for (size_t i = 0; i < r.bands.size(); ++i) {
    OracleCoverage at_lo = OracleCount(f.corpus, f.ontology, edges[i][0], edges[i][1]);
    OracleCoverage at_hi{};
    if (i + 1 < r.bands.size()) {
      at_hi = OracleCount(f.corpus, f.ontology, edges[i + 1][0], edges[i + 1][1]);
    }
    CHECK(r.bands[i].terms == at_lo.terms - at_hi.terms);
    CHECK(r.bands[i].covered == at_lo.covered - at_hi.covered);
  }

  coverage::CoverageOptions two;
  two.band_edges = {"0.005"};
  coverage::CoverageReport r2 = coverage::ComputeCoverage(f.corpus, f.ontology, two);
  REQUIRE(r2.bands.size() == 2);
  CHECK(r2.bands[1].lo == "0.005");
  OracleCoverage common = OracleCount(f.corpus, f.ontology, 5, 1000);
  CHECK(r2.bands[1].terms == common.terms);

  CHECK_ERROR(coverage::ComputeCoverage(f.corpus, f.ontology, {"1.5", {}}),
              ErrorCode::kInvalidArgument);
  CHECK_ERROR(coverage::ComputeCoverage(f.corpus, f.ontology, {"abc", {}}),
              ErrorCode::kInvalidArgument);
}

TEST_CASE("common band fully covered") {
  testing::CoverageFixture f = testing::BuildCoverageFixture(testing::kCoverageDatasets[1], 9);
  // Add every uncovered surface at or above 0.5% to the ontology.
  const ConceptId root = f.ontology.Roots().front();
  for (const CorpusRecord &r : f.corpus.records()) {
    if (r.entity_count * 1000 >= 5 * f.corpus.sample_size() &&
        f.ontology.LookupText(r.surface).empty()) {
      f.ontology.CreateConcept(r.surface, Language::kEn, root, "MANUAL");
    }
  }
  coverage::CoverageOptions opts;
  opts.band_edges = {"0.005"};
  coverage::CoverageReport r = coverage::ComputeCoverage(f.corpus, f.ontology, opts);
  OracleCoverage o = OracleCount(f.corpus, f.ontology, 5, 1000);
  REQUIRE(o.terms > 0);
  CHECK(o.covered == o.terms);
  REQUIRE(r.bands[1].coverage.has_value());
  CHECK(r.bands[1].coverage->str() == "100.00");
}

TEST_CASE("trivial coverage and errors") {
  testing::CoughFixture f = testing::BuildCoughFixture();
  AnnotatedCorpus c("tiny", 10);
  c.Add("cough", 4);
  c.Add("咳嗽", 3);
  c.Add("Headache", 1);
  coverage::CoverageReport r = coverage::ComputeCoverage(c, f.ontology);
  CHECK(r.term_coverage.str() == "100.00");
  CHECK(r.entity_coverage.str() == "100.00");
  CHECK(r.per_category.size() == 2);
  CHECK(coverage::ToJson(r)["covered_entities"] == 8);
  CHECK(coverage::ToTsv(r).rfind("#corpus=tiny\n", 0) == 0);

  CHECK_ERROR(coverage::ComputeCoverage(AnnotatedCorpus("e", 10), f.ontology),
              ErrorCode::kEmptyCorpus);
  AnnotatedCorpus no_sample("n", 0);
  no_sample.Add("cough", 1);
  CHECK_ERROR(coverage::ComputeCoverage(no_sample, f.ontology), ErrorCode::kEmptyCorpus);
}

TEST_CASE("coverage monotone under added synonyms and exact under removal") {
  testing::CoverageFixture f = testing::BuildCoverageFixture(testing::kCoverageDatasets[0], 2);
  coverage::CoverageReport before = coverage::ComputeCoverage(f.corpus, f.ontology);
  REQUIRE_FALSE(before.uncovered.empty());
  const std::string gap = before.uncovered.front();
  const ConceptId root = f.ontology.Roots().front();
  f.ontology.AddTerm(root, gap, Language::kEn, "MANUAL");
  coverage::CoverageReport after = coverage::ComputeCoverage(f.corpus, f.ontology);
  CHECK(after.covered_terms == before.covered_terms + 1);
  CHECK(after.covered_entities == before.covered_entities + f.corpus.CountOf(gap));
  CHECK(after.term_coverage.scaled() >= before.term_coverage.scaled());
  for (size_t i = 0; i < before.bands.size(); ++i) {
    CHECK(after.bands[i].covered >= before.bands[i].covered);
  }

  // Remove that synonym again: covered entities drop by its count.
  AtomId aui;
  for (const Atom *a : f.ontology.AtomsOf(root)) {
    if (f.ontology.TermOf(*a).text == gap) aui = a->aui;
  }
  f.ontology.RemoveAtom(aui);
  coverage::CoverageReport removed = coverage::ComputeCoverage(f.corpus, f.ontology);
  CHECK(removed.covered_entities == before.covered_entities);
  CHECK(coverage::ToJson(removed) == coverage::ToJson(before));
}

TEST_CASE("dimension reduction") {
  testing::ImpactFixture a = testing::BuildImpactFixture(111, 52, 1);
  coverage::ImpactReport ra = coverage::ComputeImpact(a.corpus, a.terms, a.ontology);
  CHECK(ra.distinct_input_terms == 111);
  CHECK(ra.mapped_concepts == 52);
  CHECK(ra.dimension_reduction.str() == "53.15");
  CHECK(ra.approximate);

  testing::ImpactFixture b = testing::BuildImpactFixture(648, 269, 2);
  coverage::ImpactReport rb = coverage::ComputeImpact(b.corpus, b.terms, b.ontology);
  CHECK(rb.output_dimensions == 269);
  CHECK(WithinHundredth(rb.dimension_reduction, 58.49));

  // Approximate mode sums counts over the ring.
  for (const coverage::ImpactRow &row : ra.rows) {
    int64_t sum = 0;
    for (const std::string &t : row.expanded_terms) sum += a.corpus.CountOf(t);
    CHECK(row.post_count == sum);
    CHECK(row.pre_count == a.corpus.CountOf(row.term));
  }

  // Unmapped terms are listed and count as their own dimension.
  std::vector<std::string> terms = a.terms;
  terms.push_back("never seen term");
  terms.push_back(" " + ToUpperAscii(a.terms.front()) + " ");  // a duplicate
  coverage::ImpactReport rc = coverage::ComputeImpact(a.corpus, terms, a.ontology);
  CHECK(rc.distinct_input_terms == 112);
  CHECK(rc.unmapped == std::vector<std::string>{"never seen term"});
  CHECK(rc.output_dimensions == 53);
  CHECK_ERROR(coverage::ComputeImpact(a.corpus, {" ", ""}, a.ontology),
              ErrorCode::kEmptyTerms);
}

TEST_CASE("patient fixture matches the set-union oracle") {
  testing::ImpactFixture f = testing::BuildPatientFixture(7);
  coverage::ImpactReport r = coverage::ComputeImpact(f.corpus, f.terms, f.ontology);
  CHECK_FALSE(r.approximate);
  REQUIRE(r.rows.size() == testing::ImpactRows().size());
  for (size_t i = 0; i < r.rows.size(); ++i) {
    const testing::ImpactRowSpec &spec = testing::ImpactRows()[i];
    const coverage::ImpactRow &row = r.rows[i];
    CAPTURE(spec.original);
    CHECK(row.pre_count == spec.pre);
    CHECK(row.post_count == spec.post);
    CHECK(row.post_count == static_cast<int64_t>(OraclePatients(f, row.term).size()));
    CHECK(row.expanded_terms.size() == spec.variants.size() + 1);
    CHECK(row.expanded_terms.front() == row.term);
  }
  CHECK(r.rows[0].term == "fever");
  CHECK(r.rows[0].pre_count == 1130);
  CHECK(r.rows[0].post_count == 1276);
  CHECK(coverage::ToJson(r)["rows"][0]["post_count"] == 1276);
  CHECK(coverage::ToTsv(r).find("fever") != std::string::npos);
}

TEST_CASE("impact edge cases") {
  testing::CoughFixture f = testing::BuildCoughFixture();
  AnnotatedCorpus c("p", 5);
  c.Add("headache", 2, std::vector<std::string>{"p1", "p2"});
  c.Add("头痛", 2, std::vector<std::string>{"p2", "p3"});
  c.Add("wheezing", 1, std::vector<std::string>{"p4"});
  coverage::ImpactReport r = coverage::ComputeImpact(c, {"wheezing", "headache"}, f.ontology);
  REQUIRE(r.rows.size() == 2);
  CHECK(r.rows[0].pre_count == 1);
  CHECK(r.rows[0].post_count == 1);  // no other terms
  CHECK(r.rows[1].pre_count == 2);
  CHECK(r.rows[1].post_count == 3);

  // Adding a synonym never lowers a post count.
  Ontology grown = f.ontology;
  c.Add("wheeze", 1, std::vector<std::string>{"p5"});
  coverage::ImpactReport base = coverage::ComputeImpact(c, {"wheezing"}, grown);
  grown.AddTerm(*grown.LookupText("wheezing").begin(), "wheeze", Language::kEn, "MANUAL");
  coverage::ImpactReport more = coverage::ComputeImpact(c, {"wheezing"}, grown);
  CHECK(more.rows[0].post_count == base.rows[0].post_count + 1);

  AnnotatedCorpus mixed("m", 4);
  mixed.Add("cough", 2, std::vector<std::string>{"a", "b"});
  mixed.Add("dry cough", 1);
  CHECK_ERROR(coverage::ComputeImpact(mixed, {"cough"}, f.ontology),
              ErrorCode::kMissingPatientIds);
}
