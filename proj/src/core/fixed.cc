#include "ispo/core/fixed.h"

#include "ispo/core/error.h"

namespace ispo {

namespace {

__int128 Pow10(int places) {
  __int128 p = 1;
  for (int i = 0; i < places; ++i) p *= 10;
  return p;
}

int64_t RoundHalfUp(__int128 num, __int128 den) {
  return static_cast<int64_t>((2 * num + den) / (2 * den));
}

}  // namespace

Fixed Fixed::Ratio(int64_t num, int64_t den, int places) {
  if (den <= 0 || num < 0 || places < 0) {
    throw Error(ErrorCode::kInvalidArgument, "ratio needs num >= 0, den > 0");
  }
  return Fixed(RoundHalfUp(static_cast<__int128>(num) * Pow10(places), den),
               places);
}

Fixed Fixed::Percent(int64_t num, int64_t den, int places) {
  if (den <= 0 || num < 0 || places < 0) {
    throw Error(ErrorCode::kInvalidArgument, "ratio needs num >= 0, den > 0");
  }
  return Fixed(
      RoundHalfUp(static_cast<__int128>(num) * 100 * Pow10(places), den),
      places);
}

double Fixed::value() const {
  return static_cast<double>(scaled_) / static_cast<double>(Pow10(places_));
}

std::string Fixed::str() const {
  std::string digits = std::to_string(scaled_);
  if (places_ == 0) return digits;
  if (static_cast<int>(digits.size()) <= places_) {
    digits.insert(0, places_ - digits.size() + 1, '0');
  }
  digits.insert(digits.size() - places_, ".");
  return digits;
}

}  // namespace ispo
