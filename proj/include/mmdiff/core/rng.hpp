#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "mmdiff/core/types.hpp"

namespace mmdiff {

// Deterministic random source. Uniform variates come from mt19937_64 mapped
// to [0,1); normals use an explicit Box-Muller transform. Both mappings are
// spelled out here (rather than using std::*_distribution) so that seeded
// streams produce identical draws on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Independent child stream; mixing is stationary in (seed, index), so
  // stream k of a given Rng is reproducible regardless of draw order.
  Rng stream(std::uint64_t index) const;

  // Uniform on [0, 1).
  double uniform();

  // Standard normal via Box-Muller; generates pairs and caches the second.
  double normal();

  // Uniform integer on [0, n), rejection-sampled to avoid modulo bias.
  std::uint64_t integer(std::uint64_t n);

  // Draw an index from an (unnormalized, non-negative) weight vector.
  int categorical(const Vec& weights);

  // k distinct values from {0..n-1}, uniformly, via partial Fisher-Yates.
  std::vector<int> sample_without_replacement(int n, int k);

  // Fill with iid standard normals.
  Vec normal_vec(int n);

  std::uint64_t raw() { return gen_(); }

 private:
  explicit Rng(std::mt19937_64 gen) : gen_(gen) {}
  std::mt19937_64 gen_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

// SplitMix64 mixing step; used for stream derivation and seed hashing.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace mmdiff
