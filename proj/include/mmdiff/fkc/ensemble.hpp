#pragma once

#include <vector>

#include "mmdiff/core/rng.hpp"
#include "mmdiff/core/types.hpp"

namespace mmdiff::fkc {

struct Particle {
  JointState state;
  double log_weight = 0.0;
};

struct Ensemble {
  std::vector<Particle> particles;

  int size() const { return static_cast<int>(particles.size()); }
};

// Normalized weights through a stabilized log-sum-exp.  Throws
// DegenerateError when no particle carries finite weight.
Vec normalized_weights(const Ensemble& ensemble);

// Effective sample size 1 / sum(w^2) on normalized weights; always in
// [1, K].
double ess(const Ensemble& ensemble);

// Multinomial resampling: K independent draws proportional to weight,
// states copied, every log-weight reset to log(1/K).  Returns the chosen
// source index per offspring so callers can carry side arrays along.
std::vector<int> resample(Ensemble& ensemble, Rng& rng);

}  // namespace mmdiff::fkc
