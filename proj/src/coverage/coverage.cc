#include "ispo/coverage/coverage.h"

#include <algorithm>
#include <cctype>
#include <set>
#include <unordered_map>

#include "ispo/core/error.h"
#include "ispo/core/text.h"
#include "ispo/linking/linker.h"

namespace ispo::coverage {

namespace {

constexpr int64_t kScale = 1000000000;  // rates are held in parts per billion

int64_t ParseRate(const std::string &text) {
  size_t i = 0;
  int64_t whole = 0;
  int64_t frac = 0;
  int frac_digits = 0;
  bool any = false;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    whole = whole * 10 + (text[i] - '0');
    any = true;
    if (whole > 1) break;
    ++i;
  }
  if (i < text.size() && text[i] == '.') {
    ++i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      if (++frac_digits > 9) break;
      frac = frac * 10 + (text[i] - '0');
      any = true;
      ++i;
    }
  }
  if (!any || i != text.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "rate '" + text + "' must be a decimal in [0, 1] with at most "
                "nine fractional digits");
  }
  for (int d = frac_digits; d < 9; ++d) frac *= 10;
  const int64_t ppb = whole * kScale + frac;
  if (ppb > kScale) {
    throw Error(ErrorCode::kInvalidArgument, "rate '" + text + "' exceeds 1");
  }
  return ppb;
}

std::string FormatRate(int64_t ppb) {
  if (ppb == kScale) return "1";
  std::string frac = std::to_string(ppb);
  frac.insert(0, 9 - frac.size(), '0');
  while (!frac.empty() && frac.back() == '0') frac.pop_back();
  return frac.empty() ? "0" : "0." + frac;
}

// count / sample >= ppb / 1e9
bool RateAtLeast(int64_t count, int64_t sample, int64_t ppb) {
  return static_cast<__int128>(count) * kScale >=
         static_cast<__int128>(ppb) * sample;
}

std::optional<Fixed> MaybePercent(int64_t num, int64_t den) {
  if (den == 0) return std::nullopt;
  return Fixed::Percent(num, den);
}

}  // namespace

CoverageReport ComputeCoverage(const AnnotatedCorpus &corpus,
                               const Ontology &ontology,
                               const CoverageOptions &options) {
  if (corpus.empty() || corpus.sample_size() <= 0) {
    throw Error(ErrorCode::kEmptyCorpus, corpus.name());
  }
  const int64_t min_ppb = ParseRate(options.min_rate);
  if (min_ppb >= kScale) {
    throw Error(ErrorCode::kInvalidArgument, "min rate must be below 1");
  }
  std::set<int64_t> interior;
  for (const std::string &edge : options.band_edges) {
    const int64_t ppb = ParseRate(edge);
    if (ppb > min_ppb && ppb < kScale) interior.insert(ppb);
  }
  std::vector<int64_t> edges = {min_ppb};
  edges.insert(edges.end(), interior.begin(), interior.end());
  edges.push_back(kScale);

  CoverageReport r;
  r.corpus = corpus.name();
  r.sample_size = corpus.sample_size();
  r.min_rate = FormatRate(min_ppb);
  for (size_t i = 0; i + 1 < edges.size(); ++i) {
    Band b;
    b.lo = FormatRate(edges[i]);
    b.hi = FormatRate(edges[i + 1]);
    r.bands.push_back(std::move(b));
  }

  std::vector<const CorpusRecord *> uncovered;
  const int64_t n = corpus.sample_size();
  for (const CorpusRecord &rec : corpus.records()) {
    if (!RateAtLeast(rec.entity_count, n, min_ppb)) continue;
    size_t band = 0;
    while (band + 1 < r.bands.size() &&
           RateAtLeast(rec.entity_count, n, edges[band + 1])) {
      ++band;
    }
    const std::set<ConceptId> hits = ontology.LookupText(rec.surface);
    const bool covered = !hits.empty();
    Band &b = r.bands[band];
    ++r.total_terms;
    ++b.terms;
    r.total_entities += rec.entity_count;
    b.entities += rec.entity_count;
    if (covered) {
      ++r.covered_terms;
      ++b.covered;
      r.covered_entities += rec.entity_count;
      b.covered_entities += rec.entity_count;
      const ConceptId root = ontology.TopCategoryOf(*hits.begin());
      ++r.per_category[ontology.PreferredText(root)];
    } else {
      uncovered.push_back(&rec);
    }
  }
  for (Band &b : r.bands) b.coverage = MaybePercent(b.covered, b.terms);
  r.term_coverage = r.total_terms ? Fixed::Percent(r.covered_terms, r.total_terms)
                                  : Fixed::Percent(0, 1);
  r.entity_coverage = r.total_entities
                          ? Fixed::Percent(r.covered_entities, r.total_entities)
                          : Fixed::Percent(0, 1);
  std::stable_sort(uncovered.begin(), uncovered.end(),
                   [](const CorpusRecord *a, const CorpusRecord *b) {
                     if (a->entity_count != b->entity_count) {
                       return a->entity_count > b->entity_count;
                     }
                     return a->surface < b->surface;
                   });
  for (const CorpusRecord *rec : uncovered) r.uncovered.push_back(rec->surface);
  return r;
}

nlohmann::json ToJson(const CoverageReport &r) {
  nlohmann::json bands = nlohmann::json::array();
  for (const Band &b : r.bands) {
    bands.push_back({{"lo", b.lo},
                     {"hi", b.hi},
                     {"terms", b.terms},
                     {"covered", b.covered},
                     {"entities", b.entities},
                     {"covered_entities", b.covered_entities},
                     {"coverage", b.coverage ? nlohmann::json(b.coverage->str())
                                             : nlohmann::json(nullptr)}});
  }
  return {{"corpus", r.corpus},
          {"sample_size", r.sample_size},
          {"min_rate", r.min_rate},
          {"total_terms", r.total_terms},
          {"covered_terms", r.covered_terms},
          {"total_entities", r.total_entities},
          {"covered_entities", r.covered_entities},
          {"term_coverage", r.term_coverage.str()},
          {"entity_coverage", r.entity_coverage.str()},
          {"bands", std::move(bands)},
          {"per_category", r.per_category},
          {"uncovered", r.uncovered}};
}

std::string ToTsv(const CoverageReport &r) {
  std::string out = "#corpus=" + r.corpus + "\n";
  out += "#sample_size=" + std::to_string(r.sample_size) + "\n";
  out += "#total_terms=" + std::to_string(r.total_terms) +
         "\tcovered_terms=" + std::to_string(r.covered_terms) +
         "\tterm_coverage=" + r.term_coverage.str() + "\n";
  out += "#total_entities=" + std::to_string(r.total_entities) +
         "\tcovered_entities=" + std::to_string(r.covered_entities) +
         "\tentity_coverage=" + r.entity_coverage.str() + "\n";
  out += "lo\thi\tterms\tcovered\tentities\tcovered_entities\tcoverage\n";
  for (const Band &b : r.bands) {
    out += b.lo + "\t" + b.hi + "\t" + std::to_string(b.terms) + "\t" +
           std::to_string(b.covered) + "\t" + std::to_string(b.entities) +
           "\t" + std::to_string(b.covered_entities) + "\t" +
           (b.coverage ? b.coverage->str() : "") + "\n";
  }
  return out;
}

ImpactReport ComputeImpact(const AnnotatedCorpus &corpus,
                           const std::vector<std::string> &terms,
                           const Ontology &ontology) {
  std::vector<std::string> inputs;
  std::set<std::string> seen;
  for (const std::string &t : terms) {
    std::string norm = Normalize(t);
    if (norm.empty() || !seen.insert(norm).second) continue;
    inputs.push_back(std::move(norm));
  }
  if (inputs.empty()) throw Error(ErrorCode::kEmptyTerms, "");

  bool corpus_has_ids = false;
  std::unordered_map<ConceptId, std::vector<const CorpusRecord *>> by_concept;
  for (const CorpusRecord &rec : corpus.records()) {
    corpus_has_ids = corpus_has_ids || rec.patient_ids.has_value();
    if (std::optional<ConceptId> cui = linking::LinkExact(rec.surface, ontology)) {
      by_concept[*cui].push_back(&rec);
    }
  }

  ImpactReport report;
  report.approximate = !corpus_has_ids;
  report.distinct_input_terms = static_cast<int64_t>(inputs.size());
  auto require_ids = [&](const CorpusRecord &rec) {
    if (corpus_has_ids && !rec.patient_ids) {
      throw Error(ErrorCode::kMissingPatientIds, "'" + rec.surface + "'");
    }
  };

  std::set<ConceptId> concepts;
  for (const std::string &term : inputs) {
    std::optional<ConceptId> cui = linking::LinkExact(term, ontology);
    if (!cui) {
      report.unmapped.push_back(term);
      continue;
    }
    concepts.insert(*cui);
    ImpactRow row;
    row.term = term;
    row.concept_id = *cui;
    row.concept_label = ontology.PreferredText(*cui);

    std::vector<const CorpusRecord *> expanded;
    for (const ConceptId &d : ontology.Descendants(*cui)) {
      auto it = by_concept.find(d);
      if (it == by_concept.end()) continue;
      expanded.insert(expanded.end(), it->second.begin(), it->second.end());
    }
    std::sort(expanded.begin(), expanded.end(),
              [&](const CorpusRecord *a, const CorpusRecord *b) {
                const bool ao = a->surface == term, bo = b->surface == term;
                if (ao != bo) return ao;
                if (a->entity_count != b->entity_count) {
                  return a->entity_count > b->entity_count;
                }
                return a->surface < b->surface;
              });

    if (const CorpusRecord *own = corpus.Find(term)) {
      require_ids(*own);
      row.pre_count = report.approximate
                          ? own->entity_count
                          : static_cast<int64_t>(own->patient_ids->size());
    }
    std::set<std::string> patients;
    for (const CorpusRecord *rec : expanded) {
      require_ids(*rec);
      row.expanded_terms.push_back(rec->surface);
      if (report.approximate) {
        row.post_count += rec->entity_count;
      } else {
        patients.insert(rec->patient_ids->begin(), rec->patient_ids->end());
      }
    }
    if (!report.approximate) row.post_count = static_cast<int64_t>(patients.size());
    report.rows.push_back(std::move(row));
  }
  report.mapped_concepts = static_cast<int64_t>(concepts.size());
  report.output_dimensions =
      report.mapped_concepts + static_cast<int64_t>(report.unmapped.size());
  report.dimension_reduction =
      Fixed::Percent(report.distinct_input_terms - report.output_dimensions,
                     report.distinct_input_terms);
  return report;
}

nlohmann::json ToJson(const ImpactReport &r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const ImpactRow &row : r.rows) {
    rows.push_back({{"term", row.term},
                    {"concept", row.concept_id},
                    {"label", row.concept_label},
                    {"expanded_terms", row.expanded_terms},
                    {"pre_count", row.pre_count},
                    {"post_count", row.post_count}});
  }
  return {{"rows", std::move(rows)},
          {"distinct_input_terms", r.distinct_input_terms},
          {"mapped_concepts", r.mapped_concepts},
          {"unmapped", r.unmapped},
          {"output_dimensions", r.output_dimensions},
          {"dimension_reduction", r.dimension_reduction.str()},
          {"approximate", r.approximate}};
}

std::string ToTsv(const ImpactReport &r) {
  std::string out = "#distinct_input_terms=" +
                    std::to_string(r.distinct_input_terms) +
                    "\tmapped_concepts=" + std::to_string(r.mapped_concepts) +
                    "\tdimension_reduction=" + r.dimension_reduction.str();
  if (r.approximate) out += "\tapproximate";
  out += "\nterm\tconcept\tlabel\tpre_count\tpost_count\texpanded_terms\n";
  for (const ImpactRow &row : r.rows) {
    out += row.term + "\t" + row.concept_id + "\t" + row.concept_label + "\t" +
           std::to_string(row.pre_count) + "\t" +
           std::to_string(row.post_count) + "\t";
    for (size_t i = 0; i < row.expanded_terms.size(); ++i) {
      if (i) out += "|";
      out += row.expanded_terms[i];
    }
    out += "\n";
  }
  for (const std::string &t : r.unmapped) out += t + "\t\t\t\t\t\n";
  return out;
}

}  // namespace ispo::coverage
