#ifndef ISPO_CORE_RANDOM_H_
#define ISPO_CORE_RANDOM_H_

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace ispo {

// Seeded generator with a platform-independent draw sequence. The standard
// distributions are implementation-defined, so bounded draws and shuffles
// are done here on top of the fully specified mt19937_64 engine.
class SeededRng {
 public:
  explicit SeededRng(uint64_t seed) : engine_(seed) {}

  // Uniform in [0, bound). `bound` must be positive.
  uint64_t Below(uint64_t bound) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    uint64_t draw;
    do {
      draw = engine_();
    } while (draw >= limit);
    return draw % bound;
  }

  // Fisher-Yates.
  template <typename T>
  void Shuffle(std::span<T> items) {
    for (size_t i = items.size(); i > 1; --i) {
      size_t j = static_cast<size_t>(Below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace ispo

#endif  // ISPO_CORE_RANDOM_H_
