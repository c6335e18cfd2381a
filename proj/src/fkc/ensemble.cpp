#include "mmdiff/fkc/ensemble.hpp"

#include <cmath>
#include <utility>

#include "mmdiff/core/error.hpp"

namespace mmdiff::fkc {

Vec normalized_weights(const Ensemble& ensemble) {
  const int k = ensemble.size();
  if (k < 1) throw DegenerateError("ensemble: no particles");
  Vec logw(k);
  for (int i = 0; i < k; ++i) logw[i] = ensemble.particles[i].log_weight;
  const double shift = logw.maxCoeff();
  if (!std::isfinite(shift))
    throw DegenerateError("ensemble: no particle carries finite weight");
  const Vec w = (logw.array() - shift).exp();
  return w / w.sum();
}

double ess(const Ensemble& ensemble) {
  const Vec w = normalized_weights(ensemble);
  return 1.0 / w.squaredNorm();
}

std::vector<int> resample(Ensemble& ensemble, Rng& rng) {
  const Vec w = normalized_weights(ensemble);
  const int k = ensemble.size();
  const double reset = -std::log(static_cast<double>(k));
  std::vector<int> chosen(static_cast<std::size_t>(k));
  std::vector<Particle> offspring;
  offspring.reserve(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) {
    const int src = rng.categorical(w);
    chosen[static_cast<std::size_t>(i)] = src;
    offspring.push_back(ensemble.particles[static_cast<std::size_t>(src)]);
    offspring.back().log_weight = reset;
  }
  ensemble.particles = std::move(offspring);
  return chosen;
}

}  // namespace mmdiff::fkc
