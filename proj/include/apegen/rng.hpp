#pragma once

#include <cstdint>
#include <random>

namespace apegen {

// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Deterministic random stream. The engine and every draw below are fully
// specified (std::mt19937_64 output is fixed by the standard, and bounded
// draws use rejection sampling rather than library distributions), so a
// stream yields the same values on every platform.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t state) : engine_(state) {}

  std::uint64_t next() { return engine_(); }

  // Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound + 1) % bound;
    std::uint64_t x = engine_();
    while (x > limit) x = engine_();
    return x % bound;
  }

 private:
  std::mt19937_64 engine_;
};

// Stream for one sentence: a function of (seed, sentence_index) only, so
// output does not depend on processing order or worker count. The engine
// state is mix64(seed ^ mix64(sentence_index)).
inline RandomStream derive_rng(std::uint64_t seed, std::uint64_t sentence_index) {
  return RandomStream(mix64(seed ^ mix64(sentence_index)));
}

// Fisher-Yates over any random-access range.
template <typename It>
void deterministic_shuffle(It first, It last, RandomStream& rng) {
  const auto n = static_cast<std::uint64_t>(last - first);
  for (std::uint64_t i = n; i > 1; --i) {
    const auto j = rng.below(i);
    std::swap(first[i - 1], first[j]);
  }
}

}  // namespace apegen
