#ifndef ISPO_CORE_SOURCE_H_
#define ISPO_CORE_SOURCE_H_

#include <span>
#include <string>
#include <string_view>

namespace ispo {

enum class SourceKind {
  kEmr,
  kModernBook,
  kAncientBook,
  kBiomedicalVocabulary,
  kManual,
};

struct SourceInfo {
  std::string_view id;
  std::string_view name;
  SourceKind kind;
};

// The thirty contributing terminology sources plus MANUAL for curator edits.
std::span<const SourceInfo> KnownSources();

// nullptr when `id` is not a registered source.
const SourceInfo *FindSource(std::string_view id);

std::string_view SourceKindName(SourceKind kind);

inline constexpr std::string_view kManualSource = "MANUAL";

}  // namespace ispo

#endif  // ISPO_CORE_SOURCE_H_
