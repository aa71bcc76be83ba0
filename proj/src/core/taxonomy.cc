#include "ispo/core/taxonomy.h"

#include <utility>
#include <vector>

namespace ispo {

std::map<std::string, ConceptId> SeedTopCategories(Ontology *ontology,
                                                   std::string_view source) {
  std::map<std::string, ConceptId> out;
  for (std::string_view label : kTopCategories) {
    out.emplace(std::string(label),
                ontology->CreateConcept(label, Language::kEn, std::nullopt,
                                        source));
  }
  return out;
}

std::map<std::string, ConceptId> SeedTongueAndPulse(Ontology *ontology,
                                                    const ConceptId &tcm_root,
                                                    std::string_view source) {
  using Group = std::pair<std::string_view, std::vector<std::string_view>>;
  const std::vector<std::pair<std::string_view, std::vector<Group>>> layout = {
      {"Tongue manifestation",
       {{"Tongue quality", {"Tongue color", "Tongue shape", "Tongue condition"}},
        {"Tongue fur", {"Fur character", "Fur color"}},
        {"Sublingual vessel", {}}}},
      {"Pulse manifestation",
       {{"Floating pulse class", {}},
        {"Deep pulse class", {}},
        {"Slow pulse class", {}},
        {"Rapid pulse class", {}},
        {"Feeble pulse class", {}},
        {"Excess pulse class", {}},
        {"Unusual pulse class", {}}}},
  };

  std::map<std::string, ConceptId> out;
  auto add = [&](std::string_view label, const ConceptId &parent) {
    ConceptId cui =
        ontology->CreateConcept(label, Language::kEn, parent, source);
    out.emplace(std::string(label), cui);
    return cui;
  };
  for (const auto &[branch, groups] : layout) {
    ConceptId branch_cui = add(branch, tcm_root);
    for (const auto &[group, leaves] : groups) {
      ConceptId group_cui = add(group, branch_cui);
      for (std::string_view leaf : leaves) add(leaf, group_cui);
    }
  }
  return out;
}

}  // namespace ispo
