#include "fixtures.h"

#include <algorithm>
#include <numeric>
#include <set>
#include <stdexcept>

#include "ispo/core/random.h"
#include "ispo/core/taxonomy.h"
#include "ispo/core/text.h"

namespace ispo::testing {

namespace {

std::string Numbered(std::string_view stem, int64_t n, int width = 4) {
  std::string digits = std::to_string(n);
  if (static_cast<int>(digits.size()) < width) {
    digits.insert(0, width - digits.size(), '0');
  }
  return std::string(stem) + " " + digits;
}

std::map<std::string, ConceptId> SeedRoots(Ontology *ontology) {
  return SeedTopCategories(ontology);
}

// Splits `total` into `n` parts, each at least `floor`, with a Zipf-like tail.
std::vector<int64_t> LongTail(int64_t total, int64_t n, int64_t floor) {
  if (n == 0) return {};
  if (total < n * floor) throw std::logic_error("LongTail: total below floor");
  std::vector<double> w(n);
  for (int64_t i = 0; i < n; ++i) w[i] = 1.0 / static_cast<double>(i + 1);
  const double sum = std::accumulate(w.begin(), w.end(), 0.0);
  const int64_t spare = total - n * floor;
  std::vector<int64_t> out(n);
  int64_t used = 0;
  for (int64_t i = 0; i < n; ++i) {
    out[i] = floor + static_cast<int64_t>(static_cast<double>(spare) * w[i] / sum);
    used += out[i];
  }
  for (int64_t i = 0; used < total; i = (i + 1) % n, ++used) ++out[i];
  return out;
}

}  // namespace

CoughFixture BuildCoughFixture() {
  CoughFixture f;
  Ontology seeded;
  auto roots = SeedRoots(&seeded);
  f.respiratory = roots.at(std::string(kTopCategories[1]));
  ConceptId general = roots.at(std::string(kTopCategories[9]));
  ConceptId nervous = roots.at(std::string(kTopCategories[0]));
  ConceptId skin = roots.at(std::string(kTopCategories[7]));

  // Jump the concept counter; identifiers are never reused, so a gap is legal.
  OntologyRecords records = seeded.ToRecords();
  records.counters.cui = 396;
  f.ontology = Ontology::FromRecords(std::move(records));

  f.cough = f.ontology.CreateConcept("咳嗽", Language::kZh, f.respiratory, "DDTCMS");
  f.ontology.AddTerm(f.cough, "cough", Language::kEn, "UMLS", "C0010200");
  f.ontology.AddTerm(f.cough, "Cough", Language::kEn, "MeSH", "MeSH_D003371");
  f.ontology.AddTerm(f.cough, "咳", Language::kZh, "SCM");
  f.ontology.AddContext(f.cough, ContextKind::kDefinition,
                        "A sudden, audible expulsion of air from the lungs.", "MeSH");
  f.ontology.AddContext(f.cough, ContextKind::kAncientReference,
                        "咳谓无痰而有声，嗽是无声而有痰。", "MYHC");
  f.dry_cough = f.ontology.CreateConcept("dry cough", Language::kEn, f.cough, "UMLS");
  f.ontology.AddTerm(f.dry_cough, "干咳", Language::kZh, "SCM");
  f.ontology.CreateConcept("cough with phlegm", Language::kEn, f.cough, "HBTC-COVID19");
  f.ontology.CreateConcept("wheezing", Language::kEn, f.respiratory, "UMLS");
  f.ontology.CreateConcept("fever", Language::kEn, general, "UMLS");
  f.headache = f.ontology.CreateConcept("headache", Language::kEn, nervous, "UMLS");
  f.ontology.AddTerm(f.headache, "头痛", Language::kZh, "DDTCMS");
  f.facial_skin_pain =
      f.ontology.CreateConcept("facial skin pain", Language::kEn, skin, "MANUAL");
  return f;
}

Ontology BuildShapedTree(const TreeShape &s) {
  Ontology o;
  std::vector<ConceptId> roots;
  for (int i = 0; i < s.roots; ++i) {
    std::string label = i < static_cast<int>(kTopCategories.size())
                            ? std::string(kTopCategories[i])
                            : Numbered("root", i + 1);
    roots.push_back(o.CreateConcept(label, Language::kEn, std::nullopt, "MANUAL"));
  }
  int label_no = 0;
  auto make = [&](const ConceptId &parent) {
    return o.CreateConcept(Numbered("node", ++label_no, 5), Language::kEn, parent,
                           "MANUAL");
  };

  // chain[d] is the internal node at depth d on the deepest path.
  std::vector<ConceptId> chain(s.max_depth + 1);
  chain[1] = roots[0];
  for (int d = 2; d < s.max_depth; ++d) chain[d] = make(chain[d - 1]);

  const int internal = s.classes - s.leaves;
  const int extra = internal - s.roots - (s.max_depth - 2);
  if (extra < 0) throw std::logic_error("shape has too few internal nodes");
  std::vector<ConceptId> middles;
  std::vector<bool> root_used(s.roots, false);
  root_used[0] = true;
  for (int i = 0; i < extra; ++i) {
    const int r = i % s.roots;
    middles.push_back(make(roots[r]));
    root_used[r] = true;
  }

  // Every internal node without an internal child needs one leaf.
  int leaves = 0;
  int64_t depth_sum = 0;
  for (const ConceptId &m : middles) {
    make(m);
    ++leaves;
    depth_sum += 3;
  }
  make(chain[s.max_depth - 1]);
  ++leaves;
  depth_sum += s.max_depth;
  for (int r = 0; r < s.roots; ++r) {
    if (root_used[r]) continue;
    make(roots[r]);
    ++leaves;
    depth_sum += 2;
  }

  const int64_t free_leaves = s.leaves - leaves;
  const int64_t need = s.leaf_depth_sum - depth_sum;
  if (need < 2 * free_leaves || need > s.max_depth * free_leaves) {
    throw std::logic_error("shape leaf depth sum unreachable");
  }
  const int64_t lift = need - 2 * free_leaves;
  for (int64_t i = 0; i < free_leaves; ++i) {
    const int64_t depth =
        2 + (i + 1) * lift / free_leaves - i * lift / free_leaves;
    if (depth == 2) {
      make(roots[i % s.roots]);
    } else if (depth == 3 && !middles.empty()) {
      make(middles[i % middles.size()]);
    } else {
      make(chain[depth - 1]);
    }
  }

  // Extra synonyms, round robin over concepts in id order.
  std::vector<ConceptId> all;
  for (const auto &[cui, c] : o.concepts()) all.push_back(cui);
  for (int i = 0; i < s.synonyms - s.classes; ++i) {
    const ConceptId &cui = all[i % all.size()];
    o.AddTerm(cui, Numbered("synonym", i + 1, 5), Language::kEn, "MANUAL");
  }
  return o;
}

CoverageFixture BuildCoverageFixture(const CoverageRow &row, uint64_t seed,
                                     int noise) {
  CoverageFixture f;
  auto roots = SeedRoots(&f.ontology);
  std::vector<ConceptId> root_ids;
  for (std::string_view label : kTopCategories) {
    root_ids.push_back(roots.at(std::string(label)));
  }

  // Smallest count whose rate reaches 0.01%: ceil(sample / 10000).
  const int64_t floor = (row.sample_size + 9999) / 10000;
  const int64_t uncovered_terms = row.terms - row.covered_terms;
  std::vector<int64_t> covered =
      LongTail(row.covered_entities, row.covered_terms, floor);
  std::vector<int64_t> uncovered =
      LongTail(row.entities - row.covered_entities, uncovered_terms, floor);

  struct Entry {
    std::string surface;
    int64_t count;
  };
  std::vector<Entry> entries;
  std::string stem = Normalize(row.name);
  ConceptId last;
  for (int64_t i = 0; i < row.covered_terms; ++i) {
    std::string surface = Numbered(stem + " covered", i + 1);
    // Every third covered surface is a synonym of the previous concept.
    if (i % 3 == 2) {
      f.ontology.AddTerm(last, surface, Language::kEn, "MANUAL");
    } else {
      last = f.ontology.CreateConcept(surface, Language::kEn,
                                      root_ids[i % root_ids.size()], "MANUAL");
    }
    entries.push_back({surface, covered[i]});
  }
  for (int64_t i = 0; i < uncovered_terms; ++i) {
    entries.push_back({Numbered(stem + " uncovered", i + 1), uncovered[i]});
  }
  const int64_t noise_count = std::max<int64_t>(floor - 1, 1);
  if (noise_count * 10000 < row.sample_size) {
    for (int i = 0; i < noise; ++i) {
      std::string surface = Numbered(stem + " rare", i + 1);
      f.ontology.CreateConcept(surface, Language::kEn, root_ids[0], "MANUAL");
      entries.push_back({surface, noise_count});
    }
  }

  SeededRng rng(seed);
  rng.Shuffle(std::span<Entry>(entries));
  f.corpus = AnnotatedCorpus(row.name, row.sample_size);
  for (const Entry &e : entries) f.corpus.Add(e.surface, e.count);
  return f;
}

ImpactFixture BuildImpactFixture(int terms, int concepts, uint64_t seed) {
  if (concepts > terms) throw std::logic_error("more concepts than terms");
  ImpactFixture f;
  auto roots = SeedRoots(&f.ontology);
  std::vector<ConceptId> root_ids;
  for (std::string_view label : kTopCategories) {
    root_ids.push_back(roots.at(std::string(label)));
  }
  SeededRng rng(seed);
  std::vector<ConceptId> cuis;
  for (int i = 0; i < terms; ++i) {
    std::string surface = Numbered("clinical term", i + 1);
    if (i < concepts) {
      cuis.push_back(f.ontology.CreateConcept(
          surface, Language::kEn, root_ids[i % root_ids.size()], "MANUAL"));
    } else {
      f.ontology.AddTerm(cuis[rng.Below(cuis.size())], surface, Language::kEn,
                         "MANUAL");
    }
    f.terms.push_back(surface);
  }
  f.corpus = AnnotatedCorpus("impact", 2000);
  for (const std::string &t : f.terms) {
    f.corpus.Add(t, 1 + static_cast<int64_t>(rng.Below(40)));
  }
  return f;
}

const std::vector<ImpactRowSpec> &ImpactRows() {
  static const std::vector<ImpactRowSpec> rows = {
      {"Fever",
       {"Intermittent fever", "Recurrent fever", "Low-grade fever",
        "Subjective fever", "Intermittent low-grade fever"},
       1130, 1276},
      {"Cough",
       {"Dry cough", "Cough with phlegm", "Occasional cough", "Recurrent cough",
        "Intermittent cough"},
       906, 1000},
      {"Fatigue",
       {"Limb weakness", "Intermittent fatigue", "Limb fatigue", "Tiredness",
        "Overall weakness"},
       139, 156},
      {"Chest tightness",
       {"Feeling of suffocation", "Intermittent chest tightness",
        "Chest constriction discomfort"},
       143, 148},
      {"Difficulty breathing", {"Labored breathing"}, 64, 65},
      {"Diarrhea", {"Mild diarrhea"}, 47, 48},
      {"Poor appetite",
       {"Decreased appetite", "Anorexia", "Reduced appetite",
        "Lackluster appetite"},
       22, 34},
      {"Throat discomfort",
       {"Throat pain", "Dry throat", "Throat itchiness",
        "Throat redness and itchiness", "Itchy throat"},
       1, 24},
      {"Body pain", {"Body ache", "Body soreness", "Limb pain"}, 8, 20},
  };
  return rows;
}

ImpactFixture BuildPatientFixture(uint64_t seed) {
  constexpr int kPatients = 1788;
  ImpactFixture f;
  auto roots = SeedRoots(&f.ontology);
  const ConceptId general = roots.at(std::string(kTopCategories[9]));

  std::vector<std::string> pool;
  for (int i = 1; i <= kPatients; ++i) pool.push_back(Numbered("patient", i));

  SeededRng rng(seed);
  f.corpus = AnnotatedCorpus("covid19", kPatients);
  for (const ImpactRowSpec &row : ImpactRows()) {
    const ConceptId top =
        f.ontology.CreateConcept(row.original, Language::kEn, general, "MANUAL");
    std::map<std::string, ConceptId> placed{{Normalize(row.original), top}};
    for (const char *v : row.variants) {
      // A variant nests under the longest already placed variant it extends.
      const std::string norm = Normalize(v);
      ConceptId parent = top;
      size_t best = 0;
      for (const auto &[text, cui] : placed) {
        if (cui != top && text.size() > best &&
            norm.find(text) != std::string::npos) {
          parent = cui;
          best = text.size();
        }
      }
      placed[norm] = f.ontology.CreateConcept(v, Language::kEn, parent, "MANUAL");
    }

    std::vector<std::string> shuffled = pool;
    rng.Shuffle(std::span<std::string>(shuffled));
    std::vector<std::string> original(shuffled.begin(), shuffled.begin() + row.pre);
    std::vector<std::string> fresh(shuffled.begin() + row.pre,
                                   shuffled.begin() + row.post);
    const size_t n = row.variants.size();
    std::vector<std::vector<std::string>> ids(n);
    for (size_t i = 0; i < fresh.size(); ++i) ids[i % n].push_back(fresh[i]);
    for (size_t v = 0; v < n; ++v) {
      // Overlap with the original term's patients.
      const size_t overlap = 1 + rng.Below(std::max<size_t>(1, original.size() / 4));
      for (size_t k = 0; k < overlap; ++k) {
        ids[v].push_back(original[rng.Below(original.size())]);
      }
      std::sort(ids[v].begin(), ids[v].end());
      ids[v].erase(std::unique(ids[v].begin(), ids[v].end()), ids[v].end());
    }
    f.corpus.Add(row.original, static_cast<int64_t>(original.size()), original);
    for (size_t v = 0; v < n; ++v) {
      f.corpus.Add(row.variants[v], static_cast<int64_t>(ids[v].size()), ids[v]);
    }
    f.terms.push_back(row.original);
  }
  return f;
}

std::string BuildTypedObo(const TypeColumn &column, int categories,
                          uint64_t seed) {
  const int64_t total =
      std::accumulate(column.counts.begin(), column.counts.end(), int64_t{0});
  std::vector<io::TypeLabel> labels;
  for (size_t t = 0; t < column.counts.size(); ++t) {
    labels.insert(labels.end(), column.counts[t], static_cast<io::TypeLabel>(t));
  }
  SeededRng rng(seed);
  rng.Shuffle(std::span<io::TypeLabel>(labels));

  auto id_of = [&](int64_t n) {
    std::string digits = std::to_string(n);
    digits.insert(0, 7 - digits.size(), '0');
    return std::string(column.prefix) + ":" + digits;
  };
  std::string out = "format-version: 1.2\nontology: " + std::string(column.name) + "\n";
  // Concept 1 is the root, 2..categories+1 are categories.
  for (int64_t i = 1; i <= total; ++i) {
    out += "\n[Term]\nid: " + id_of(i) + "\n";
    out += "name: " + std::string(column.name) + " concept " + std::to_string(i) + "\n";
    if (i % 5 == 0) {
      out += "synonym: \"" + std::string(column.name) + " variant " +
             std::to_string(i) + "\" EXACT []\n";
    }
    if (i > 1) {
      const int64_t parent =
          i <= categories + 1 ? 1 : 2 + static_cast<int64_t>(rng.Below(i - 2));
      out += "is_a: " + id_of(parent) + "\n";
    }
    out += "property_value: type_label \"" +
           std::string(io::TypeLabelName(labels[i - 1])) + "\"\n";
  }
  return out;
}

CrossmapFixture BuildCrossmapFixture(int mapped, int targets, uint64_t seed) {
  CrossmapFixture f;
  f.external = io::ImportOboSubset(BuildTypedObo(kTypeColumns[0], 12, seed), "SO");
  auto roots = SeedRoots(&f.ontology);
  std::vector<ConceptId> target_ids;
  for (std::string_view label : kTopCategories) {
    target_ids.push_back(roots.at(std::string(label)));
  }
  for (int i = static_cast<int>(target_ids.size()); i < targets; ++i) {
    target_ids.push_back(f.ontology.CreateConcept(
        Numbered("mapped concept", i + 1), Language::kEn,
        target_ids[i % kTopCategories.size()], "MANUAL"));
  }
  std::vector<size_t> order(f.external.concepts().size());
  std::iota(order.begin(), order.end(), 0);
  SeededRng rng(seed ^ 0x5eed);
  rng.Shuffle(std::span<size_t>(order));
  for (int i = 0; i < mapped; ++i) {
    // The first `targets` xrefs cover every target once, the rest repeat.
    const size_t t = i < targets ? i : rng.Below(targets);
    f.xrefs.Add(f.external.concepts()[order[i]].id, target_ids[t]);
  }
  return f;
}

}  // namespace ispo::testing
