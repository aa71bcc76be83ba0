#include "ispo/core/source.h"

#include <array>

namespace ispo {

namespace {

constexpr std::array<SourceInfo, 31> kSources = {{
    {"SDTC", "Shandong provincial hospital of TCM (hypertension EMRs)", SourceKind::kEmr},
    {"SXTC", "Shanxi Provincial Hospital of TCM EMRs", SourceKind::kEmr},
    {"HBTC-LIVER", "Hubei provincial hospital of TCM (liver disease EMRs)", SourceKind::kEmr},
    {"HBTC-COVID19", "Five hospitals in Hubei province (COVID-19 EMRs)", SourceKind::kEmr},
    {"DDTCMS", "Differential diagnosis of TCM symptoms", SourceKind::kModernBook},
    {"SCM", "Symptomatic study of traditional Chinese medicine", SourceKind::kModernBook},
    {"SSTTCM", "Study on standardization of terms of traditional Chinese medicine", SourceKind::kModernBook},
    {"TCMT", "Traditional Chinese Medicine Terms", SourceKind::kModernBook},
    {"CP", "Chinese pharmacopoeia", SourceKind::kModernBook},
    {"CTTCM", "Classification and Codes of Tongue Manifestation for Diagnosis in TCM", SourceKind::kModernBook},
    {"CPTCM", "Classification and Codes of Pulse Manifestation for Diagnosis in TCM", SourceKind::kModernBook},
    {"MYHC", "Ming Yi Hui Cui", SourceKind::kAncientBook},
    {"LZZC", "Lei Zheng Zhi Cai", SourceKind::kAncientBook},
    {"LZZN", "Lin Zheng Zhi Nan Yi An", SourceKind::kAncientBook},
    {"YFK", "Yi Fang Kao", SourceKind::kAncientBook},
    {"WRJW", "Wen Re Jing Wei", SourceKind::kAncientBook},
    {"TFD", "Shang Han Lun", SourceKind::kAncientBook},
    {"WBTB", "Wen Bing Tiao Bian", SourceKind::kAncientBook},
    {"LYTB", "Liu Yin Tiao Bian", SourceKind::kAncientBook},
    {"YJBY", "Yi Jia Bi Yong", SourceKind::kAncientBook},
    {"BCCY", "Ben Cao Chong Yuan", SourceKind::kAncientBook},
    {"BCDQ", "Ben Cao Dong Quan", SourceKind::kAncientBook},
    {"BHYJ", "Bi Hua Yi Jing", SourceKind::kAncientBook},
    {"ZBYHL", "Zhu Bing Yuan Hou Lun", SourceKind::kAncientBook},
    {"RMSQ", "Ru Men Shi Qin", SourceKind::kAncientBook},
    {"UMLS", "Unified Medical Language System", SourceKind::kBiomedicalVocabulary},
    {"HPO", "The Human Phenotype Ontology", SourceKind::kBiomedicalVocabulary},
    {"SO", "Symptom Ontology", SourceKind::kBiomedicalVocabulary},
    {"ICD-11", "International Classification of Diseases", SourceKind::kBiomedicalVocabulary},
    {"MeSH", "Medical Subject Headings", SourceKind::kBiomedicalVocabulary},
    {"MANUAL", "Curator edit", SourceKind::kManual},
}};

}  // namespace

std::span<const SourceInfo> KnownSources() { return kSources; }

const SourceInfo *FindSource(std::string_view id) {
  for (const SourceInfo &s : kSources) {
    if (s.id == id) return &s;
  }
  return nullptr;
}

std::string_view SourceKindName(SourceKind kind) {
  switch (kind) {
    case SourceKind::kEmr: return "emr";
    case SourceKind::kModernBook: return "modern_book";
    case SourceKind::kAncientBook: return "ancient_book";
    case SourceKind::kBiomedicalVocabulary: return "biomedical_vocabulary";
    case SourceKind::kManual: return "manual";
  }
  return "unknown";
}

}  // namespace ispo
