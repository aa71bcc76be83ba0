#include <algorithm>
#include <set>

#include "check_error.h"
#include "doctest.h"
#include "fixtures.h"
#include "ispo/core/random.h"
#include "ispo/core/text.h"
#include "ispo/linking/linker.h"

using namespace ispo;
using linking::LinkStatus;

namespace {

// Brute-force Dice: list bigrams by hand, match them pairwise.
double OracleDice(const std::string &a, const std::string &b) {
  auto grams = [](const std::string &s) {
    std::u32string cps = CodePoints(s);
    if (cps.empty()) return std::vector<std::u32string>{};
    if (cps.size() < 2) cps = U"\x02" + cps + U"\x02";
    std::vector<std::u32string> out;
    for (size_t i = 0; i + 1 < cps.size(); ++i) out.push_back(cps.substr(i, 2));
    return out;
  };
  std::vector<std::u32string> x = grams(a), y = grams(b);
  if (x.empty() && y.empty()) return 0;
  std::vector<bool> used(y.size(), false);
  int common = 0;
  for (const auto &g : x) {
    for (size_t j = 0; j < y.size(); ++j) {
      if (!used[j] && y[j] == g) {
        used[j] = true;
        ++common;
        break;
      }
    }
  }
  return 2.0 * common / static_cast<double>(x.size() + y.size());
}

std::string RandomTerm(SeededRng &rng) {
  static const std::vector<std::string> alphabet = {"a", "b", "c", " ", "咳", "嗽", "痛", "头"};
  std::string s;
  const size_t n = rng.Below(7);
  for (size_t i = 0; i < n; ++i) s += alphabet[rng.Below(alphabet.size())];
  return s;
}

}  // namespace

TEST_CASE("bigrams") {
  CHECK(linking::Bigrams("cough").size() == 4);
  CHECK(linking::Bigrams("咳嗽").size() == 1);
  CHECK(linking::Bigrams("咳").size() == 2);  // padded
  CHECK(linking::Bigrams("").empty());
  CHECK(linking::BigramDice("dry cough", "dry cough") == 1.0);
  CHECK(linking::BigramDice("咳", "嗽") == 0.0);
}

TEST_CASE("dice matches the brute-force scorer on random pairs") {
  SeededRng rng(2024);
  for (int i = 0; i < 1000; ++i) {
    const std::string a = RandomTerm(rng), b = RandomTerm(rng);
    CHECK(linking::BigramDice(a, b) == doctest::Approx(OracleDice(a, b)).epsilon(1e-12));
    CHECK(linking::BigramDice(a, b) == linking::BigramDice(b, a));
  }
  // "dry coughs" has 9 bigrams, "dry cough" 8, sharing all 8 of the latter.
  CHECK(OracleDice("dry coughs", "dry cough") == doctest::Approx(16.0 / 17.0));
  CHECK(linking::BigramDice("dry coughs", "dry cough") == doctest::Approx(16.0 / 17.0));
}

TEST_CASE("exact linking on the cough fixture") {
  testing::CoughFixture f = testing::BuildCoughFixture();
  CHECK(linking::LinkExact("cough", f.ontology) == ConceptId("C00000397"));
  CHECK(linking::LinkExact("咳嗽", f.ontology) == f.cough);
  CHECK(linking::LinkExact(" COUGH ", f.ontology) == f.cough);
  CHECK_FALSE(linking::LinkExact("zzzz-not-a-term", f.ontology).has_value());

  // Two active owners of one string can only come from hand-built records.
  OntologyRecords rec = f.ontology.ToRecords();
  const Atom &pref = *f.ontology.FindAtom(f.ontology.Get(f.cough).preferred_aui);
  rec.atoms.push_back({FormatId(IdKind::kAtom, ++rec.counters.aui), f.headache,
                       pref.sui, "MANUAL", std::nullopt});
  CHECK_ERROR(linking::LinkExact("咳嗽", Ontology::FromRecords(rec)),
              ErrorCode::kAmbiguousTerm);
}

TEST_CASE("candidate generation") {
  testing::CoughFixture f = testing::BuildCoughFixture();
  linking::DiceCandidateGenerator gen;
  auto exact = gen.Generate("dry cough", f.ontology, 5);
  REQUIRE_FALSE(exact.empty());
  CHECK(exact[0].cui == f.dry_cough);
  CHECK(exact[0].score == 1.0);

  auto near = gen.Generate("dry coughs", f.ontology, 5);
  REQUIRE_FALSE(near.empty());
  CHECK(near[0].cui == f.dry_cough);
  CHECK(near[0].score == doctest::Approx(OracleDice("dry coughs", "dry cough")));
  for (size_t i = 1; i < near.size(); ++i) {
    CHECK((near[i - 1].score > near[i].score ||
           (near[i - 1].score == near[i].score && near[i - 1].cui < near[i].cui)));
  }
  CHECK(gen.Generate("dry coughs", f.ontology, 1).size() == 1);
  CHECK(gen.Generate("qqqq", f.ontology, 1).empty());
  CHECK_ERROR(gen.Generate("cough", f.ontology, 0), ErrorCode::kInvalidArgument);

  // Chinese terms are scored only against Chinese synonyms.
  auto zh = gen.Generate("干咳嗽", f.ontology, 5);
  REQUIRE_FALSE(zh.empty());
  for (const auto &c : zh) CHECK(c.score > 0);
  CHECK(gen.Generate("干咳嗽", f.ontology, 5) == zh);
}

TEST_CASE("compound rule") {
  testing::CoughFixture f = testing::BuildCoughFixture();
  linking::RuleSet rules = linking::ResolveRules(
      io::ReadRulesTsv("head and facial skin pain\theadache|facial skin pain\n"
                       "coughing\tC00000397\n"),
      f.ontology);
  auto targets = rules.Apply("Head and facial skin pain");
  REQUIRE(targets.has_value());
  CHECK(*targets == std::vector<ConceptId>{f.headache, f.facial_skin_pain});
  CHECK(rules.Apply("coughing") == std::vector<ConceptId>{f.cough});
  CHECK_FALSE(rules.Apply("nothing").has_value());

  linking::DiceCandidateGenerator gen;
  auto r = linking::Link("head and facial skin pain", f.ontology, rules, gen);
  CHECK(r.status == LinkStatus::kRuleMapped);
  CHECK(r.targets == std::vector<ConceptId>{f.headache, f.facial_skin_pain});
  CHECK_FALSE(r.candidates.empty());  // kept for audit
  CHECK(linking::FormatLinkTsv(r).rfind("head and facial skin pain\tRuleMapped\t" +
                                            f.headache + "|" + f.facial_skin_pain + "\t",
                                        0) == 0);

  CHECK_ERROR(linking::ResolveRules(io::ReadRulesTsv("x\tno such term\n"), f.ontology),
              ErrorCode::kUnresolvedRuleTarget);
  CHECK_ERROR(linking::ResolveRules(io::ReadRulesTsv("x\tcough\nX\tcough\n"), f.ontology),
              ErrorCode::kDuplicateRule);
  // Merged targets resolve through forwarding.
  Ontology merged = f.ontology;
  merged.Merge(f.headache, f.facial_skin_pain);
  auto fwd = linking::ResolveRule({"face", {f.facial_skin_pain}, 1}, merged);
  CHECK(fwd.targets == std::vector<ConceptId>{f.headache});
}

TEST_CASE("pipeline precedence and thresholds") {
  testing::CoughFixture f = testing::BuildCoughFixture();
  linking::DiceCandidateGenerator gen;
  linking::RuleSet none;
  auto exact = linking::Link("Cough", f.ontology, none, gen);
  CHECK(exact.status == LinkStatus::kExact);
  CHECK(exact.targets == std::vector<ConceptId>{f.cough});
  CHECK(exact.candidates.empty());

  // Threshold sweep over the oracle score of the best candidate.
  const double best = OracleDice("dry coughs", "dry cough");
  for (double t : {0.0, 0.5, best - 1e-9, best, best + 1e-9, 1.0}) {
    auto r = linking::Link("dry coughs", f.ontology, none, gen, {t, 5});
    CHECK(r.status == (best >= t ? LinkStatus::kCandidates : LinkStatus::kUnmapped));
    CHECK(r.targets.empty());
    CHECK_FALSE(r.candidates.empty());
  }
  // A rule outranks candidates and never demotes.
  linking::RuleSet rules;
  rules.Add({"dry coughs", {f.dry_cough}});
  rules.Add({"cough", {f.headache}});
  CHECK(linking::Link("dry coughs", f.ontology, rules, gen).status == LinkStatus::kRuleMapped);
  CHECK(linking::Link("cough", f.ontology, rules, gen).status == LinkStatus::kExact);
  CHECK(linking::Link("qqqq", f.ontology, rules, gen).status == LinkStatus::kUnmapped);

  auto j = linking::ToJson(linking::Link("dry coughs", f.ontology, none, gen));
  CHECK(j["status"] == "Candidates");
}

TEST_CASE("evaluate_linking") {
  testing::CoughFixture f = testing::BuildCoughFixture();
  linking::DiceCandidateGenerator gen;
  CHECK_ERROR(linking::EvaluateLinking({}, f.ontology, gen), ErrorCode::kEmptyGold);

  // Every source repeated ten times, so the seeded split keeps each one in
  // the train part.
  std::vector<linking::MappingRule> gold;
  const std::vector<ConceptId> pool = {f.cough, f.dry_cough, f.headache, f.facial_skin_pain};
  for (int copy = 0; copy < 10; ++copy) {
    for (int t = 0; t < 40; ++t) {
      gold.push_back({"compound term " + std::to_string(t),
                      {pool[t % 4], pool[(t + 1) % 4]}});
    }
  }
  linking::EvaluationOptions opts;
  opts.seed = 17;
  // Precondition check of the fixture: replay the split.
  std::vector<size_t> order(gold.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  SeededRng rng(opts.seed);
  rng.Shuffle(std::span<size_t>(order));
  std::set<std::string> train;
  for (size_t i = 0; i < 320; ++i) train.insert(gold[order[i]].source);
  for (size_t i = 320; i < order.size(); ++i) REQUIRE(train.count(gold[order[i]].source));

  auto a = linking::EvaluateLinking(gold, f.ontology, gen, opts);
  auto b = linking::EvaluateLinking(gold, f.ontology, gen, opts);
  CHECK(a.train_size == 320);
  CHECK(a.test_size == 80);
  CHECK(a.accuracy.str() == "100.00");
  CHECK(a.rule.correct == 80);
  CHECK(linking::ToJson(a) == linking::ToJson(b));

  // Disjoint vocabulary: no rule fires, only candidates can score.
  std::vector<linking::MappingRule> disjoint;
  for (int t = 0; t < 20; ++t) {
    disjoint.push_back({std::string(1, static_cast<char>('a' + t)) + "xq" + std::to_string(t),
                        {f.cough}});
  }
  auto d = linking::EvaluateLinking(disjoint, f.ontology, gen, opts);
  CHECK(d.rule.predicted == 0);
  CHECK(d.correct == d.candidate.correct + d.exact.correct);
}
