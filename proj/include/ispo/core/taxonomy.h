#ifndef ISPO_CORE_TAXONOMY_H_
#define ISPO_CORE_TAXONOMY_H_

#include <array>
#include <map>
#include <string>
#include <string_view>

#include "ispo/core/ontology.h"

namespace ispo {

// The twelve top-level categories in code order ("01".."12"): eleven
// anatomical-system groups and the TCM tongue and pulse signs.
inline constexpr std::array<std::string_view, 12> kTopCategories = {
    "Nervous system symptoms",
    "Respiratory system symptoms",
    "Circulatory system symptoms",
    "Digestive system symptoms",
    "Musculoskeletal system symptoms",
    "Urinary system symptoms",
    "Mental and behavioral symptoms",
    "Skin and integumentary system symptoms",
    "Reproductive system symptoms",
    "General symptoms",
    "Nutrition, metabolism, and development symptoms",
    "TCM tongue and pulse signs",
};

// Creates the twelve roots (English labels) and returns label -> CUI.
std::map<std::string, ConceptId> SeedTopCategories(
    Ontology *ontology, std::string_view source = "MANUAL");

// Adds the tongue and pulse manifestation sub-categories below `tcm_root`:
// tongue quality (color, shape, condition), tongue fur (character, color),
// sublingual vessel, and the seven pulse classes. Returns label -> CUI.
std::map<std::string, ConceptId> SeedTongueAndPulse(
    Ontology *ontology, const ConceptId &tcm_root,
    std::string_view source = "MANUAL");

}  // namespace ispo

#endif  // ISPO_CORE_TAXONOMY_H_
