#pragma once

#include <cstdint>

namespace ppl::rng {

/* Deterministic randomness with a reproducibility contract:
 *
 *   - a 64-bit seed fully determines every draw;
 *   - the stream for row t of seed s is Stream(derive(s, t)), so rows can be
 *     generated in parallel or out of order and still reproduce the exact
 *     draws of a sequential pass.
 *
 * The generator is SplitMix64 (Steele, Lea, Flood: "Fast splittable
 * pseudorandom number generators", OOPSLA 2014): a Weyl sequence with
 * increment 0x9E3779B97F4A7C15 (2^64 / golden ratio) pushed through a
 * variant of the MurmurHash3 finalizer. It is tiny, statistically solid for
 * Monte Carlo use, and trivially seekable, which is all this library needs.
 */

inline constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ull;

// MurmurHash3-style finalizer; bijective on 64-bit words.
inline constexpr std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

// The documented (seed, index) -> stream-state derivation. Scrambling the
// index before xoring keeps nearby rows' states far apart; scrambling the
// combination decouples the result from either input alone.
inline constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t index) {
  return mix64(seed ^ mix64(index + kGolden));
}

class Stream {
 public:
  explicit constexpr Stream(std::uint64_t state) : state_(state) {}

  constexpr std::uint64_t next_u64() {
    state_ += kGolden;
    return mix64(state_);
  }

  // Uniform double in [0, 1), 53 random bits.
  constexpr double next_unit() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform integer in {0, ..., bound-1} via 128-bit multiply (Lemire).
  std::uint64_t next_below(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * bound) >> 64);
  }

 private:
  std::uint64_t state_;
};

// Stream that generates row `index` of the trajectory table for `seed`.
inline constexpr Stream row_stream(std::uint64_t seed, std::uint64_t index) {
  return Stream(derive(seed, index));
}

// Independent named substream, for deriving per-trial or per-purpose seeds
// from a master seed without draw-order coupling.
inline constexpr std::uint64_t derive_seed(std::uint64_t seed,
                                           std::uint64_t purpose,
                                           std::uint64_t index = 0) {
  return derive(derive(seed, purpose), index);
}

}  // namespace ppl::rng
