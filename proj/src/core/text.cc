#include "ispo/core/text.h"

#include <unicode/locid.h>
#include <unicode/normalizer2.h>
#include <unicode/uchar.h>
#include <unicode/unistr.h>
#include <unicode/uscript.h>

#include <vector>

#include "ispo/core/error.h"

namespace ispo {

namespace {

bool IsCjkCodePoint(UChar32 c) {
  UErrorCode status = U_ZERO_ERROR;
  UScriptCode script = uscript_getScript(c, &status);
  if (U_SUCCESS(status)) {
    switch (script) {
      case USCRIPT_HAN:
      case USCRIPT_HIRAGANA:
      case USCRIPT_KATAKANA:
      case USCRIPT_HANGUL:
      case USCRIPT_BOPOMOFO:
        return true;
      default:
        break;
    }
  }
  switch (ublock_getCode(c)) {
    case UBLOCK_CJK_SYMBOLS_AND_PUNCTUATION:
    case UBLOCK_HALFWIDTH_AND_FULLWIDTH_FORMS:
    case UBLOCK_CJK_COMPATIBILITY_FORMS:
    case UBLOCK_VERTICAL_FORMS:
      return true;
    default:
      return false;
  }
}

bool IsCjkOnly(const icu::UnicodeString &s) {
  bool any = false;
  for (int32_t i = 0; i < s.length(); i = s.moveIndex32(i, 1)) {
    UChar32 c = s.char32At(i);
    if (u_isUWhiteSpace(c)) continue;
    if (!IsCjkCodePoint(c)) return false;
    any = true;
  }
  return any;
}

}  // namespace

std::string_view LanguageName(Language language) {
  return language == Language::kZh ? "zh" : "en";
}

Language ParseLanguage(std::string_view name) {
  if (name == "zh") return Language::kZh;
  if (name == "en") return Language::kEn;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown language '" + std::string(name) + "'");
}

std::string Normalize(std::string_view raw) {
  UErrorCode status = U_ZERO_ERROR;
  const icu::Normalizer2 *nfkc = icu::Normalizer2::getNFKCInstance(status);
  if (U_FAILURE(status)) {
    throw Error(ErrorCode::kInvalidArgument, "NFKC normalizer unavailable");
  }
  icu::UnicodeString input = icu::UnicodeString::fromUTF8(
      icu::StringPiece(raw.data(), static_cast<int32_t>(raw.size())));
  icu::UnicodeString folded = nfkc->normalize(input, status);
  if (U_FAILURE(status)) folded = input;

  // Split into whitespace-separated tokens; this also trims.
  std::vector<icu::UnicodeString> tokens;
  icu::UnicodeString current;
  for (int32_t i = 0; i < folded.length(); i = folded.moveIndex32(i, 1)) {
    UChar32 c = folded.char32At(i);
    if (u_isUWhiteSpace(c)) {
      if (!current.isEmpty()) tokens.push_back(current);
      current.remove();
    } else {
      current.append(c);
    }
  }
  if (!current.isEmpty()) tokens.push_back(current);

  const bool cjk = IsCjkOnly(folded);
  icu::UnicodeString joined;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i > 0 && !cjk) joined.append(static_cast<UChar>(' '));
    joined.append(tokens[i]);
  }
  joined.toLower(icu::Locale::getRoot());

  std::string out;
  joined.toUTF8String(out);
  return out;
}

bool IsCjkOnly(std::string_view utf8) {
  return IsCjkOnly(icu::UnicodeString::fromUTF8(
      icu::StringPiece(utf8.data(), static_cast<int32_t>(utf8.size()))));
}

Language DetectLanguage(std::string_view utf8) {
  for (char32_t c : CodePoints(utf8)) {
    UErrorCode status = U_ZERO_ERROR;
    if (uscript_getScript(static_cast<UChar32>(c), &status) == USCRIPT_HAN &&
        U_SUCCESS(status)) {
      return Language::kZh;
    }
  }
  return Language::kEn;
}

std::u32string CodePoints(std::string_view utf8) {
  std::u32string out;
  out.reserve(utf8.size());
  size_t i = 0;
  const size_t n = utf8.size();
  while (i < n) {
    const auto b0 = static_cast<unsigned char>(utf8[i]);
    int extra;
    char32_t cp;
    if (b0 < 0x80) {
      extra = 0;
      cp = b0;
    } else if ((b0 & 0xE0) == 0xC0) {
      extra = 1;
      cp = b0 & 0x1F;
    } else if ((b0 & 0xF0) == 0xE0) {
      extra = 2;
      cp = b0 & 0x0F;
    } else if ((b0 & 0xF8) == 0xF0) {
      extra = 3;
      cp = b0 & 0x07;
    } else {
      out.push_back(U'�');
      ++i;
      continue;
    }
    bool ok = true;
    for (int k = 1; k <= extra; ++k) {
      if (i + k >= n) {
        ok = false;
        break;
      }
      const auto b = static_cast<unsigned char>(utf8[i + k]);
      if ((b & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (b & 0x3F);
    }
    if (!ok) {
      out.push_back(U'�');
      ++i;
      continue;
    }
    out.push_back(cp);
    i += extra + 1;
  }
  return out;
}

std::string ToUtf8(std::u32string_view code_points) {
  std::string out;
  out.reserve(code_points.size());
  for (char32_t c : code_points) {
    if (c < 0x80) {
      out.push_back(static_cast<char>(c));
    } else if (c < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (c >> 6)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else if (c < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (c >> 12)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (c >> 18)));
      out.push_back(static_cast<char>(0x80 | ((c >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((c >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (c & 0x3F)));
    }
  }
  return out;
}

size_t CodePointLength(std::string_view utf8) {
  size_t n = 0;
  for (char c : utf8) {
    if ((static_cast<unsigned char>(c) & 0xC0) != 0x80) ++n;
  }
  return n;
}

size_t DisplayWidth(std::string_view utf8) {
  size_t width = 0;
  for (char32_t c : CodePoints(utf8)) {
    int eaw = u_getIntPropertyValue(static_cast<UChar32>(c),
                                    UCHAR_EAST_ASIAN_WIDTH);
    width += (eaw == U_EA_WIDE || eaw == U_EA_FULLWIDTH) ? 2 : 1;
  }
  return width;
}

}  // namespace ispo
