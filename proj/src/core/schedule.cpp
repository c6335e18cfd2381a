#include "mmdiff/core/schedule.hpp"

#include <cmath>

#include "mmdiff/core/error.hpp"

namespace mmdiff {

std::vector<double> noise_steps(const NoiseSchedule& schedule) {
  if (schedule.n_steps < 1)
    throw ConfigError("noise_steps: n_steps must be >= 1");
  if (schedule.sigma_min <= 0.0 || schedule.sigma_max < schedule.sigma_min)
    throw ConfigError("noise_steps: need sigma_max >= sigma_min > 0");
  if (schedule.rho <= 0.0) throw ConfigError("noise_steps: rho must be > 0");

  const double inv_rho = 1.0 / schedule.rho;
  const double hi = std::pow(schedule.sigma_max, inv_rho);
  const double lo = std::pow(schedule.sigma_min, inv_rho);
  const int T = schedule.n_steps;

  std::vector<double> levels(T + 1);
  for (int i = 0; i <= T; ++i) {
    double u = static_cast<double>(i) / T;
    levels[i] = std::pow(hi + u * (lo - hi), schedule.rho);
  }
  // Pin the endpoints exactly; pow round-trips can drift in the last ulp.
  levels.front() = schedule.sigma_max;
  levels.back() = schedule.sigma_min;
  return levels;
}

double alpha(const MaskSchedule& schedule, double r) {
  if (r < 0.0 || r > 1.0)
    throw DomainError("alpha: mask time r must lie in [0,1]");
  switch (schedule.family) {
    case MaskSchedule::Family::Linear:
      return 1.0 - r;
    case MaskSchedule::Family::Power:
      return 1.0 - std::pow(r, schedule.exponent);
  }
  throw ConfigError("alpha: unknown schedule family");
}

double alpha_derivative(const MaskSchedule& schedule, double r) {
  if (r < 0.0 || r > 1.0)
    throw DomainError("alpha_derivative: mask time r must lie in [0,1]");
  switch (schedule.family) {
    case MaskSchedule::Family::Linear:
      return -1.0;
    case MaskSchedule::Family::Power:
      return -schedule.exponent * std::pow(r, schedule.exponent - 1.0);
  }
  throw ConfigError("alpha_derivative: unknown schedule family");
}

TimeCoupling make_time_coupling(const NoiseSchedule& noise) {
  TimeCoupling coupling;
  coupling.t = noise_steps(noise);
  const int T = noise.n_steps;
  coupling.tau.resize(T + 1);
  coupling.r.resize(T + 1);
  for (int i = 0; i <= T; ++i) {
    coupling.tau[i] = static_cast<double>(i) / T;
    coupling.r[i] = 1.0 - coupling.tau[i];
  }
  // Pin exact endpoints: (t, r) runs from (sigma_max, 1) to (~0, 0).
  coupling.r.front() = 1.0;
  coupling.r.back() = 0.0;
  return coupling;
}

}  // namespace mmdiff
