#include "ispo/core/ids.h"

#include <cstdio>

#include "ispo/core/error.h"

namespace ispo {

namespace {

std::string Pad(int value, int width) {
  std::string digits = std::to_string(value);
  if (static_cast<int>(digits.size()) < width) {
    digits.insert(0, width - digits.size(), '0');
  }
  return digits;
}

bool AllDigits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace

std::string FormatId(IdKind kind, uint64_t ordinal) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%c%08llu", static_cast<char>(kind),
                static_cast<unsigned long long>(ordinal));
  return buf;
}

bool IsValidId(IdKind kind, std::string_view id) {
  return id.size() == 9 && id[0] == static_cast<char>(kind) &&
         AllDigits(id.substr(1));
}

ClassificationCode ClassificationCode::Root(int ordinal) {
  return ClassificationCode(Pad(ordinal, 2));
}

ClassificationCode ClassificationCode::Parse(std::string_view text) {
  size_t start = 0;
  int index = 0;
  while (true) {
    size_t dot = text.find('.', start);
    std::string_view seg = text.substr(
        start, dot == std::string_view::npos ? std::string_view::npos
                                             : dot - start);
    const size_t min_width = index == 0 ? 2 : 3;
    if (!AllDigits(seg) || seg.size() < min_width) {
      throw Error(ErrorCode::kInvalidArgument,
                  "malformed classification code '" + std::string(text) + "'");
    }
    if (dot == std::string_view::npos) break;
    start = dot + 1;
    ++index;
  }
  return ClassificationCode(std::string(text));
}

ClassificationCode ClassificationCode::Child(int ordinal) const {
  return ClassificationCode(text_ + "." + Pad(ordinal, 3));
}

ClassificationCode ClassificationCode::Rebase(
    const ClassificationCode &old_prefix,
    const ClassificationCode &new_prefix) const {
  if (!old_prefix.IsPrefixOf(*this)) {
    throw Error(ErrorCode::kInvalidArgument,
                old_prefix.str() + " is not a prefix of " + text_);
  }
  return ClassificationCode(new_prefix.text_ +
                            text_.substr(old_prefix.text_.size()));
}

int ClassificationCode::depth() const {
  if (text_.empty()) return 0;
  int n = 1;
  for (char c : text_) {
    if (c == '.') ++n;
  }
  return n;
}

std::vector<std::string> ClassificationCode::segments() const {
  std::vector<std::string> out;
  if (text_.empty()) return out;
  size_t start = 0;
  while (true) {
    size_t dot = text_.find('.', start);
    out.push_back(text_.substr(start, dot == std::string::npos
                                          ? std::string::npos
                                          : dot - start));
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  return out;
}

ClassificationCode ClassificationCode::parent() const {
  size_t dot = text_.rfind('.');
  if (dot == std::string::npos) return ClassificationCode();
  return ClassificationCode(text_.substr(0, dot));
}

bool ClassificationCode::IsPrefixOf(const ClassificationCode &other) const {
  if (text_.empty()) return true;
  if (other.text_.size() < text_.size()) return false;
  if (other.text_.compare(0, text_.size(), text_) != 0) return false;
  return other.text_.size() == text_.size() || other.text_[text_.size()] == '.';
}

}  // namespace ispo
