#pragma once

#include <vector>

#include "mmdiff/core/types.hpp"

namespace mmdiff {

// Structure noise-level schedule: rho-power interpolation between sigma_max
// and sigma_min over n_steps intervals.
struct NoiseSchedule {
  double sigma_max = 160.0;
  double sigma_min = 0.0004;
  double rho = 7.0;
  double sigma_data = 16.0;
  int n_steps = 200;
};

// Levels [c_0 .. c_T]: c_i = (smax^(1/rho) + (i/T)(smin^(1/rho) -
// smax^(1/rho)))^rho. Strictly decreasing when sigma_max > sigma_min.
std::vector<double> noise_steps(const NoiseSchedule& schedule);

// Token survival schedule alpha(r): fraction of tokens still unmasked at
// mask time r. Linear: alpha = 1 - r. Power: alpha = 1 - r^exponent, which
// concentrates unmasking late in the trajectory.
struct MaskSchedule {
  enum class Family { Linear, Power };
  Family family = Family::Linear;
  double exponent = 1.0;

  static MaskSchedule linear() { return {Family::Linear, 1.0}; }
  static MaskSchedule power(double e) { return {Family::Power, e}; }
};

// alpha in [0,1], alpha(0)=1, alpha(1)=0, monotone non-increasing.
double alpha(const MaskSchedule& schedule, double r);

// d(alpha)/dr; used by the masked cross-entropy weighting.
double alpha_derivative(const MaskSchedule& schedule, double r);

// Joint time grid over a trajectory: step i of T maps unified time
// tau_i = i/T to the structure level t_i (from noise_steps) and the mask
// time r_i = 1 - i/T (remaining step fraction). The mask-schedule family
// then determines the unmask fraction alpha(r_i) at that step.
struct TimeCoupling {
  std::vector<double> tau;  // 0 .. 1, length T+1
  std::vector<double> t;    // sigma_max .. ~0
  std::vector<double> r;    // 1 .. 0

  int n_steps() const { return static_cast<int>(tau.size()) - 1; }
};

TimeCoupling make_time_coupling(const NoiseSchedule& noise);

}  // namespace mmdiff
