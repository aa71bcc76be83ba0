#ifndef ISPO_CORE_IDS_H_
#define ISPO_CORE_IDS_H_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ispo {

// Identifiers are a one-letter kind prefix followed by eight decimal digits.
// Zero padding makes lexicographic order equal to allocation order.
using ConceptId = std::string;  // C00000397
using StringId = std::string;   // S...
using AtomId = std::string;     // A...
using ContextId = std::string;  // X...

enum class IdKind : char {
  kConcept = 'C',
  kString = 'S',
  kAtom = 'A',
  kContext = 'X',
};

std::string FormatId(IdKind kind, uint64_t ordinal);
bool IsValidId(IdKind kind, std::string_view id);
inline bool IsConceptId(std::string_view id) {
  return IsValidId(IdKind::kConcept, id);
}

// Dotted hierarchical code: two-digit root segment, three-digit segments
// below it. The code of a child extends its parent's code by one segment.
class ClassificationCode {
 public:
  ClassificationCode() = default;

  static ClassificationCode Root(int ordinal);
  // Throws InvalidArgument when `text` is not a well-formed code.
  static ClassificationCode Parse(std::string_view text);

  ClassificationCode Child(int ordinal) const;
  // Replaces the leading `old_prefix` segments with `new_prefix`.
  ClassificationCode Rebase(const ClassificationCode &old_prefix,
                            const ClassificationCode &new_prefix) const;

  bool empty() const { return text_.empty(); }
  int depth() const;
  const std::string &str() const { return text_; }
  std::vector<std::string> segments() const;
  ClassificationCode parent() const;
  bool IsPrefixOf(const ClassificationCode &other) const;

  auto operator<=>(const ClassificationCode &) const = default;

 private:
  explicit ClassificationCode(std::string text) : text_(std::move(text)) {}
  std::string text_;
};

}  // namespace ispo

#endif  // ISPO_CORE_IDS_H_
