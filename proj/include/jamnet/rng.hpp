// rng.hpp -- seeded random streams with a fixed derivation discipline.
//
// Every experiment trial gets its own stream: seed = derive(master, {tags...}).
// Streams are mt19937_64; uniform doubles come from the top 53 bits so the
// mapping is pinned by this file, not by the standard library's distributions.
#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace jamnet {

// splitmix64 finalizer. Used only to mix seeds, never as the main generator.
inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Hash-chains the path components onto the master seed. derive(s, {a,b}) and
// derive(derive(s,{a}), {b}) agree, so call sites can extend paths piecewise.
// An empty path returns the master unchanged; Rng mixes its seed on entry, so
// the raw value is never used as generator state.
inline std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) {
  std::uint64_t s = master;
  for (std::uint64_t p : path) s = mix64(s ^ mix64(p));
  return s;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(mix64(seed)) {}

  // Uniform in [0, 1): 53 random bits scaled by 2^-53.
  double next_unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double next_in(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

  // Uniform integer in [0, n), n >= 1. Rejection-free modulo is fine here:
  // n is always tiny compared to 2^64, the bias is unobservable.
  std::uint64_t next_below(std::uint64_t n) { return eng_() % n; }

  std::uint64_t next_u64() { return eng_(); }

 private:
  std::mt19937_64 eng_;
};

}  // namespace jamnet
