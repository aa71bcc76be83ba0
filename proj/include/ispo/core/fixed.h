#ifndef ISPO_CORE_FIXED_H_
#define ISPO_CORE_FIXED_H_

#include <cstdint>
#include <string>

namespace ispo {

// Decimal with a fixed number of places, produced by exact integer
// half-up rounding of a non-negative ratio. Report figures are printed at
// this precision; `scaled()` is the value times 10^places.
class Fixed {
 public:
  Fixed() = default;

  // num / den rounded half-up to `places` decimals. den must be positive.
  static Fixed Ratio(int64_t num, int64_t den, int places);
  // 100 * num / den, i.e. a percentage.
  static Fixed Percent(int64_t num, int64_t den, int places = 2);

  int64_t scaled() const { return scaled_; }
  int places() const { return places_; }
  double value() const;
  std::string str() const;

  bool operator==(const Fixed &) const = default;

 private:
  Fixed(int64_t scaled, int places) : scaled_(scaled), places_(places) {}
  int64_t scaled_ = 0;
  int places_ = 0;
};

}  // namespace ispo

#endif  // ISPO_CORE_FIXED_H_
