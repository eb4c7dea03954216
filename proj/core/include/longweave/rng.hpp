#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace longweave {

// Deterministic RNG helper. std::uniform_int_distribution and std::shuffle
// are implementation-defined, so every draw that ends up in a persisted
// artifact goes through this wrapper instead.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  // Uniform draw in [0, n) via rejection sampling; exactly uniform.
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v = engine_();
    while (v >= limit) v = engine_();
    return v % n;
  }

  // Fisher-Yates with our own bounded draw, stable across platforms.
  template <typename T>
  void shuffle(std::vector<T>& items) {
    if (items.size() < 2) return;
    for (std::size_t i = items.size() - 1; i > 0; --i) {
      const std::size_t j = static_cast<std::size_t>(below(i + 1));
      if (i != j) std::swap(items[i], items[j]);
    }
  }

  // k distinct indices out of [0, n), returned sorted ascending.
  std::vector<std::size_t> sample_indices(std::size_t n, std::size_t k);

 private:
  std::mt19937_64 engine_;
};

} // namespace longweave
