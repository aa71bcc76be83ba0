#ifndef ISPO_CORE_TEXT_H_
#define ISPO_CORE_TEXT_H_

#include <string>
#include <string_view>

namespace ispo {

enum class Language { kZh, kEn };

std::string_view LanguageName(Language language);
// Accepts "zh" / "en"; throws InvalidArgument otherwise.
Language ParseLanguage(std::string_view name);

// Canonical term key. Applies NFKC, trims, then collapses interior whitespace
// runs: removed entirely when every remaining character is CJK, otherwise
// replaced by a single space. Finally lowercases cased scripts.
std::string Normalize(std::string_view raw);

// True when every non-whitespace code point is a CJK ideograph, kana, hangul
// or CJK punctuation. Empty strings are not CJK-only.
bool IsCjkOnly(std::string_view utf8);

// zh when the text contains at least one Han ideograph, en otherwise.
Language DetectLanguage(std::string_view utf8);

// UTF-8 decode; invalid sequences decode to U+FFFD.
std::u32string CodePoints(std::string_view utf8);
std::string ToUtf8(std::u32string_view code_points);

size_t CodePointLength(std::string_view utf8);

// Terminal columns: wide and fullwidth characters count as two.
size_t DisplayWidth(std::string_view utf8);

}  // namespace ispo

#endif  // ISPO_CORE_TEXT_H_
