#pragma once

#include <cstdint>
#include <cmath>
#include <vector>

namespace ratecache {

// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Stream seed for cell (a, b) of a seeded search. Derived seeds make results
// independent of evaluation order, so parallel and sequential runs agree.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return mix64(mix64(mix64(seed) ^ a) ^ b);
}

// Minimal deterministic generator (splitmix64 stream). Portable across
// platforms, unlike the distributions in <random>.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    state_ += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1).
  double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Symmetric Dirichlet(1): normalized unit exponentials.
  std::vector<double> dirichlet_row(std::size_t n) {
    std::vector<double> row(n);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      row[i] = -std::log(1.0 - next_unit());
      sum += row[i];
    }
    if (sum < 1e-300) {
      for (double& x : row) x = 1.0 / static_cast<double>(n);
      return row;
    }
    for (double& x : row) x /= sum;
    return row;
  }

 private:
  std::uint64_t state_;
};

}  // namespace ratecache
