#include "ispo/linking/linker.h"

#include <algorithm>
#include <cstdio>
#include <set>

#include "ispo/core/error.h"
#include "ispo/core/random.h"
#include "ispo/core/text.h"

namespace ispo::linking {

namespace {

constexpr char32_t kBoundary = U'\u0002';

std::vector<std::u32string> SortedBigrams(std::string_view normalized) {
  std::vector<std::u32string> grams = Bigrams(normalized);
  std::sort(grams.begin(), grams.end());
  return grams;
}

// Both inputs sorted.
size_t MultisetOverlap(const std::vector<std::u32string> &a,
                       const std::vector<std::u32string> &b) {
  size_t i = 0, j = 0, common = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] < b[j]) {
      ++i;
    } else if (b[j] < a[i]) {
      ++j;
    } else {
      ++common;
      ++i;
      ++j;
    }
  }
  return common;
}

double Dice(const std::vector<std::u32string> &a,
            const std::vector<std::u32string> &b) {
  if (a.empty() && b.empty()) return 0;
  return 2.0 * static_cast<double>(MultisetOverlap(a, b)) /
         static_cast<double>(a.size() + b.size());
}

bool CandidateOrder(const Candidate &x, const Candidate &y) {
  if (x.score != y.score) return x.score > y.score;
  return x.cui < y.cui;
}

}  // namespace

std::vector<std::u32string> Bigrams(std::string_view normalized) {
  std::u32string cps = CodePoints(normalized);
  if (cps.empty()) return {};
  if (cps.size() < 2) cps = std::u32string(1, kBoundary) + cps + kBoundary;
  std::vector<std::u32string> out;
  out.reserve(cps.size() - 1);
  for (size_t i = 0; i + 1 < cps.size(); ++i) out.push_back(cps.substr(i, 2));
  return out;
}

double BigramDice(std::string_view a, std::string_view b) {
  return Dice(SortedBigrams(a), SortedBigrams(b));
}

std::optional<ConceptId> LinkExact(std::string_view term,
                                   const Ontology &ontology) {
  const std::string normalized = Normalize(term);
  if (normalized.empty()) return std::nullopt;
  std::set<ConceptId> hits = ontology.LookupText(normalized);
  if (hits.empty()) return std::nullopt;
  if (hits.size() > 1) {
    std::string detail = "'" + normalized + "' on";
    for (const ConceptId &cui : hits) detail += " " + cui;
    throw Error(ErrorCode::kAmbiguousTerm, detail);
  }
  return *hits.begin();
}

std::vector<Candidate> DiceCandidateGenerator::Generate(
    std::string_view term, const Ontology &ontology, int k) const {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  const std::string normalized = Normalize(term);
  const Language language = DetectLanguage(normalized);
  const std::vector<std::u32string> query = SortedBigrams(normalized);

  std::vector<Candidate> out;
  for (const auto &[cui, concept_] : ontology.concepts()) {
    if (!concept_.active()) continue;
    double best = 0;
    for (const Atom *atom : ontology.AtomsOf(cui)) {
      const TermString &ts = ontology.TermOf(*atom);
      if (ts.language != language) continue;
      best = std::max(best, Dice(query, SortedBigrams(ts.text)));
      if (best == 1.0) break;
    }
    if (best > 0) out.push_back({cui, best});
  }
  std::sort(out.begin(), out.end(), CandidateOrder);
  if (out.size() > static_cast<size_t>(k)) out.resize(k);
  return out;
}

void RuleSet::Add(MappingRule rule) {
  rule.source = Normalize(rule.source);
  if (rule.source.empty()) throw Error(ErrorCode::kEmptyText, "rule source");
  if (rule.targets.empty()) {
    throw Error(ErrorCode::kUnresolvedRuleTarget,
                "rule '" + rule.source + "' has no targets");
  }
  if (rules_.count(rule.source)) {
    throw Error(ErrorCode::kDuplicateRule, "'" + rule.source + "'");
  }
  std::string key = rule.source;
  rules_.emplace(std::move(key), std::move(rule));
}

std::optional<std::vector<ConceptId>> RuleSet::Apply(
    std::string_view term) const {
  auto it = rules_.find(Normalize(term));
  if (it == rules_.end()) return std::nullopt;
  return it->second.targets;
}

MappingRule ResolveRule(const io::RawRule &raw, const Ontology &ontology) {
  MappingRule rule;
  rule.source = Normalize(raw.source);
  for (const std::string &target : raw.targets) {
    std::optional<ConceptId> cui;
    if (IsConceptId(target)) cui = ontology.Resolve(target);
    if (!cui) cui = LinkExact(target, ontology);
    if (!cui) {
      throw Error(ErrorCode::kUnresolvedRuleTarget,
                  "'" + target + "' for '" + rule.source + "'", raw.line);
    }
    rule.targets.push_back(*cui);
  }
  return rule;
}

RuleSet ResolveRules(const std::vector<io::RawRule> &raw,
                     const Ontology &ontology) {
  RuleSet rules;
  for (const io::RawRule &r : raw) {
    try {
      rules.Add(ResolveRule(r, ontology));
    } catch (const Error &e) {
      if (e.code() != ErrorCode::kDuplicateRule || e.line() > 0) throw;
      throw Error(ErrorCode::kDuplicateRule, e.reason(), r.line);
    }
  }
  return rules;
}

std::string_view LinkStatusName(LinkStatus status) {
  switch (status) {
    case LinkStatus::kExact:
      return "Exact";
    case LinkStatus::kRuleMapped:
      return "RuleMapped";
    case LinkStatus::kCandidates:
      return "Candidates";
    case LinkStatus::kUnmapped:
      return "Unmapped";
  }
  return "Unmapped";
}

LinkResult Link(std::string_view term, const Ontology &ontology,
                const RuleSet &rules, const CandidateGenerator &generator,
                const LinkOptions &options) {
  LinkResult result;
  result.source_term = std::string(term);
  if (std::optional<ConceptId> cui = LinkExact(term, ontology)) {
    result.status = LinkStatus::kExact;
    result.targets = {*cui};
    return result;
  }
  result.candidates = generator.Generate(term, ontology, options.k);
  if (std::optional<std::vector<ConceptId>> targets = rules.Apply(term)) {
    result.status = LinkStatus::kRuleMapped;
    result.targets = std::move(*targets);
  } else if (!result.candidates.empty() &&
             result.candidates.front().score >= options.threshold) {
    result.status = LinkStatus::kCandidates;
  }
  return result;
}

namespace {

std::string FormatScore(double score) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", score);
  return buf;
}

}  // namespace

std::string FormatLinkTsv(const LinkResult &result) {
  std::string out = result.source_term;
  out += '\t';
  out += LinkStatusName(result.status);
  out += '\t';
  for (size_t i = 0; i < result.targets.size(); ++i) {
    if (i) out += '|';
    out += result.targets[i];
  }
  out += '\t';
  for (size_t i = 0; i < result.candidates.size(); ++i) {
    if (i) out += '|';
    out += result.candidates[i].cui + ":" + FormatScore(result.candidates[i].score);
  }
  return out;
}

nlohmann::json ToJson(const LinkResult &result) {
  nlohmann::json candidates = nlohmann::json::array();
  for (const Candidate &c : result.candidates) {
    candidates.push_back({{"cui", c.cui}, {"score", c.score}});
  }
  return {{"term", result.source_term},
          {"status", LinkStatusName(result.status)},
          {"targets", result.targets},
          {"candidates", std::move(candidates)}};
}

LinkingEvaluation EvaluateLinking(const std::vector<MappingRule> &gold,
                                  const Ontology &ontology,
                                  const CandidateGenerator &generator,
                                  const EvaluationOptions &options) {
  if (gold.empty()) throw Error(ErrorCode::kEmptyGold, "");
  if (!(options.split_ratio >= 0 && options.split_ratio <= 1)) {
    throw Error(ErrorCode::kInvalidArgument, "split ratio outside [0, 1]");
  }
  std::vector<size_t> order(gold.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  SeededRng rng(options.seed);
  rng.Shuffle(std::span<size_t>(order));

  LinkingEvaluation ev;
  ev.train_size = static_cast<int64_t>(
      static_cast<double>(gold.size()) * options.split_ratio);
  ev.test_size = static_cast<int64_t>(gold.size()) - ev.train_size;

  RuleSet rules;
  for (int64_t i = 0; i < ev.train_size; ++i) {
    const MappingRule &pair = gold[order[i]];
    if (rules.Apply(pair.source)) continue;
    rules.Add(pair);
  }

  for (size_t i = ev.train_size; i < gold.size(); ++i) {
    const MappingRule &pair = gold[order[i]];
    LinkResult r = Link(pair.source, ontology, rules, generator, options.link);
    std::vector<ConceptId> predicted = r.targets;
    StageStats *stage = nullptr;
    switch (r.status) {
      case LinkStatus::kExact:
        stage = &ev.exact;
        break;
      case LinkStatus::kRuleMapped:
        stage = &ev.rule;
        break;
      case LinkStatus::kCandidates:
        stage = &ev.candidate;
        predicted = {r.candidates.front().cui};
        break;
      case LinkStatus::kUnmapped:
        ++ev.unmapped;
        continue;
    }
    ++stage->predicted;
    const std::set<ConceptId> want(pair.targets.begin(), pair.targets.end());
    const std::set<ConceptId> got(predicted.begin(), predicted.end());
    if (want == got) {
      ++stage->correct;
      ++ev.correct;
    }
  }
  ev.accuracy = ev.test_size > 0 ? Fixed::Percent(ev.correct, ev.test_size)
                                 : Fixed::Percent(0, 1);
  return ev;
}

nlohmann::json ToJson(const LinkingEvaluation &ev) {
  auto stage = [](const StageStats &s) {
    return nlohmann::json{{"predicted", s.predicted}, {"correct", s.correct}};
  };
  return {{"train_size", ev.train_size},
          {"test_size", ev.test_size},
          {"correct", ev.correct},
          {"accuracy", ev.accuracy.str()},
          {"stages",
           {{"exact", stage(ev.exact)},
            {"rule", stage(ev.rule)},
            {"candidate", stage(ev.candidate)},
            {"unmapped", ev.unmapped}}}};
}

}  // namespace ispo::linking
