#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace gromovlab {

/// Deterministic seeded generator with platform-independent helpers.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }
  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) { return n ? eng_() % n : 0; }
  int pick(int n) { return static_cast<int>(below(static_cast<std::uint64_t>(n))); }
  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[pick(static_cast<int>(v.size()))];
  }

private:
  std::mt19937_64 eng_;
};

}  // namespace gromovlab
