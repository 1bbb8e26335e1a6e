#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace ltesim {

/// Random stream used by every simulation in the library.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. The derived draws below are written out explicitly instead of
/// going through <random> distributions, whose algorithms differ between
/// standard library implementations.
class Rng {
 public:
  using Engine = std::mt19937_64;

  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  explicit Rng(std::seed_seq& seq) : engine_(seq) {}

  /// Independent stream for (seed, stream index); the mapping is fixed, so a
  /// replica always gets the same stream no matter which worker runs it.
  static Rng stream(std::uint64_t seed, std::uint64_t index, std::uint32_t tag = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32),
                      tag, 0x6c746573u};
    return Rng(seq);
  }

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Exponential with the given mean (rate 1/mean).
  double exponential(double mean) { return -mean * std::log1p(-uniform()); }

  /// Uniform integer in [0, n), n > 0. Lemire's multiply-and-reject, unbiased.
  std::uint64_t index(std::uint64_t n) {
    __extension__ using u128 = unsigned __int128;
    u128 m = static_cast<u128>(engine_()) * n;
    auto low = static_cast<std::uint64_t>(m);
    if (low < n) {
      const std::uint64_t threshold = (0 - n) % n;
      while (low < threshold) {
        m = static_cast<u128>(engine_()) * n;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  Engine& engine() { return engine_; }

 private:
  Engine engine_;
};

}  // namespace ltesim
