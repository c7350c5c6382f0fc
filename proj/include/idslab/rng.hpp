#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

namespace idslab {

/// One splitmix64 step applied to `x`; the first output of a splitmix64
/// generator seeded with `x`.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
  std::uint64_t z = x + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Seed for an independent stream derived from a parent seed.
constexpr std::uint64_t child_seed(std::uint64_t parent, std::uint64_t stream) noexcept {
  return splitmix64(parent + stream);
}

/// xoshiro256** seeded through a splitmix64 expansion. Output is identical on
/// every platform, which keeps splits, weight init and coalition sampling
/// reproducible across implementations.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(std::uint64_t seed) noexcept;

  result_type next() noexcept;
  result_type operator()() noexcept { return next(); }

  /// Uniform on [0, 1) with 53 bits of resolution.
  double uniform() noexcept;

  /// Unit normal via Box-Muller; the second variate of each pair is returned
  /// by the following call.
  double normal() noexcept;

  /// Fisher-Yates permutation of 0..n-1, swapping from index n-1 down to 1.
  std::vector<std::size_t> shuffle(std::size_t n);

  const std::array<std::uint64_t, 4>& state() const noexcept { return s_; }

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

 private:
  std::array<std::uint64_t, 4> s_{};
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace idslab
