#include "mmdiff/core/rng.hpp"

#include <cmath>

#include "mmdiff/core/error.hpp"

namespace mmdiff {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng Rng::stream(std::uint64_t index) const {
  // Mix the generator's current seed-state fingerprint with the index. The
  // fingerprint is taken from a copy so the parent stream is not advanced.
  std::mt19937_64 probe = gen_;
  std::uint64_t fp = probe();
  return Rng(std::mt19937_64(splitmix64(fp ^ splitmix64(index + 1))));
}

double Rng::uniform() {
  // 53-bit mantissa: uniform on [0,1) with full double resolution.
  return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
  if (have_cached_) {
    have_cached_ = false;
    return cached_;
  }
  // Box-Muller on (0,1] x [0,1).
  double u1 = 1.0 - uniform();
  double u2 = uniform();
  double radius = std::sqrt(-2.0 * std::log(u1));
  double angle = 6.283185307179586476925286766559 * u2;
  cached_ = radius * std::sin(angle);
  have_cached_ = true;
  return radius * std::cos(angle);
}

std::uint64_t Rng::integer(std::uint64_t n) {
  if (n == 0) throw DomainError("Rng::integer: n must be positive");
  std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t draw;
  do {
    draw = gen_();
  } while (draw >= limit);
  return draw % n;
}

int Rng::categorical(const Vec& weights) {
  const int n = static_cast<int>(weights.size());
  if (n == 0) throw DomainError("Rng::categorical: empty weight vector");
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    if (weights[i] < 0.0)
      throw DomainError("Rng::categorical: negative weight");
    total += weights[i];
  }
  if (total <= 0.0)
    throw DegenerateError("Rng::categorical: weights sum to zero");
  double u = uniform() * total;
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    acc += weights[i];
    if (u < acc) return i;
  }
  return n - 1;  // guard against accumulated rounding
}

std::vector<int> Rng::sample_without_replacement(int n, int k) {
  if (k < 0 || k > n)
    throw DomainError("Rng::sample_without_replacement: need 0 <= k <= n");
  std::vector<int> pool(n);
  for (int i = 0; i < n; ++i) pool[i] = i;
  for (int i = 0; i < k; ++i) {
    int j = i + static_cast<int>(integer(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

Vec Rng::normal_vec(int n) {
  Vec out(n);
  for (int i = 0; i < n; ++i) out[i] = normal();
  return out;
}

}  // namespace mmdiff
