// Counter-based splittable generator.
//
// Algorithm (pinned, so ports can reproduce the same distributions):
//   mix64(z):   z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9;
//               z = (z ^ (z >> 27)) * 0x94D049BB133111EB;  return z ^ (z >> 31)
//   key(seed)            = mix64(seed + G),  G = 0x9E3779B97F4A7C15
//   split(key, stream)   = mix64(key ^ mix64(stream + G))
//   value(key, counter)  = mix64(key + (counter + 1) * G)
//   uniform()            = (value >> 11) * 2^-53
// A stream is fully determined by (key, counter); no hidden state.

#ifndef HEAVISTEP_RNG_HPP
#define HEAVISTEP_RNG_HPP

#include <cstdint>

namespace heavistep {

inline constexpr std::uint64_t kGoldenGamma = 0x9E3779B97F4A7C15ULL;

constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed) : key_(mix64(seed + kGoldenGamma)) {}

  /// Independent child stream; does not advance this generator.
  CounterRng split(std::uint64_t stream) const {
    return CounterRng(Key{mix64(key_ ^ mix64(stream + kGoldenGamma))});
  }

  /// Value at an absolute position of this stream.
  std::uint64_t at(std::uint64_t counter) const { return mix64(key_ + (counter + 1) * kGoldenGamma); }

  std::uint64_t next() { return at(counter_++); }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Unbiased integer in [0, n); n must be > 0.
  std::uint64_t below(std::uint64_t n);

  std::uint64_t key() const { return key_; }
  std::uint64_t counter() const { return counter_; }

 private:
  struct Key {
    std::uint64_t value;
  };
  explicit CounterRng(Key k) : key_(k.value) {}

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

__extension__ typedef unsigned __int128 Uint128;

inline std::uint64_t CounterRng::below(std::uint64_t n) {
  // Lemire's multiply-and-reject.
  Uint128 m = static_cast<Uint128>(next()) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - n) % n;
    while (low < threshold) {
      m = static_cast<Uint128>(next()) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::uint64_t>(m >> 64);
}

}  // namespace heavistep

#endif  // HEAVISTEP_RNG_HPP
