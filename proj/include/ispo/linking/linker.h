#ifndef ISPO_LINKING_LINKER_H_
#define ISPO_LINKING_LINKER_H_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ispo/core/fixed.h"
#include "ispo/core/ontology.h"
#include "ispo/io/tsv.h"
#include "json.hpp"

namespace ispo::linking {

// Character bigrams of `normalized`, over code points. Strings shorter than
// two code points are padded with a boundary sentinel on both sides.
std::vector<std::u32string> Bigrams(std::string_view normalized);

// Multiset Dice coefficient of the two bigram bags; 0 when both are empty.
double BigramDice(std::string_view a, std::string_view b);

// The unique active concept whose synonym ring holds normalize(term).
// Throws AmbiguousTerm when two active concepts share the string.
std::optional<ConceptId> LinkExact(std::string_view term,
                                   const Ontology &ontology);

struct Candidate {
  ConceptId cui;
  double score = 0;
  bool operator==(const Candidate &) const = default;
};

class CandidateGenerator {
 public:
  virtual ~CandidateGenerator() = default;
  // At most k candidates, sorted by (score desc, cui asc), scores in (0, 1].
  virtual std::vector<Candidate> Generate(std::string_view term,
                                          const Ontology &ontology,
                                          int k) const = 0;
};

// Scores a concept by the best Dice match over its synonyms in the term's
// language.
class DiceCandidateGenerator : public CandidateGenerator {
 public:
  std::vector<Candidate> Generate(std::string_view term,
                                  const Ontology &ontology,
                                  int k) const override;
};

struct MappingRule {
  std::string source;  // normalized
  std::vector<ConceptId> targets;
  bool operator==(const MappingRule &) const = default;
};

class RuleSet {
 public:
  // Throws DuplicateRule.
  void Add(MappingRule rule);
  // Exact normalized lookup; targets in rule order.
  std::optional<std::vector<ConceptId>> Apply(std::string_view term) const;
  const std::map<std::string, MappingRule> &rules() const { return rules_; }
  size_t size() const { return rules_.size(); }

 private:
  std::map<std::string, MappingRule> rules_;
};

// A target that names an existing concept id resolves to it (following merge
// forwarding); any other target is linked as a term string. Throws
// UnresolvedRuleTarget.
MappingRule ResolveRule(const io::RawRule &raw, const Ontology &ontology);
RuleSet ResolveRules(const std::vector<io::RawRule> &raw,
                     const Ontology &ontology);

enum class LinkStatus { kExact, kRuleMapped, kCandidates, kUnmapped };
std::string_view LinkStatusName(LinkStatus status);

struct LinkResult {
  std::string source_term;
  LinkStatus status = LinkStatus::kUnmapped;
  std::vector<ConceptId> targets;
  std::vector<Candidate> candidates;
};

struct LinkOptions {
  double threshold = 0.5;
  int k = 5;
};

LinkResult Link(std::string_view term, const Ontology &ontology,
                const RuleSet &rules, const CandidateGenerator &generator,
                const LinkOptions &options = {});

// `term<TAB>status<TAB>cui|cui<TAB>cui:score|cui:score`
std::string FormatLinkTsv(const LinkResult &result);
nlohmann::json ToJson(const LinkResult &result);

struct StageStats {
  int64_t predicted = 0;
  int64_t correct = 0;
};

struct LinkingEvaluation {
  int64_t train_size = 0;
  int64_t test_size = 0;
  int64_t correct = 0;
  Fixed accuracy;  // percent
  StageStats exact;
  StageStats rule;
  StageStats candidate;
  int64_t unmapped = 0;
};

struct EvaluationOptions {
  double split_ratio = 0.8;
  uint64_t seed = 0;
  LinkOptions link;
};

// Seeded shuffle, rules from the first floor(n * split_ratio) pairs (first
// occurrence of a source wins), exact + rule + top-1 candidate scored on the
// rest by exact target-set match. Throws EmptyGold.
LinkingEvaluation EvaluateLinking(const std::vector<MappingRule> &gold,
                                  const Ontology &ontology,
                                  const CandidateGenerator &generator,
                                  const EvaluationOptions &options = {});
nlohmann::json ToJson(const LinkingEvaluation &evaluation);

}  // namespace ispo::linking

#endif  // ISPO_LINKING_LINKER_H_
