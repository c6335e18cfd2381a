#pragma once

#include <cmath>

#include "mmdiff/core/config.hpp"
#include "mmdiff/core/schedule.hpp"

namespace mmdiff::sample {

// Which reverse kernel advances the token sequence each step.
enum class SequenceKernel {
  Standard,      // masked positions unmask once and are final
  PathPlanning,  // unmask + remask every step (self-correcting)
};

// Structure-step and loop controls.
struct SamplerConfig {
  double gamma_0 = 0.8;      // churn amplitude (1.6 for conditioned runs)
  double gamma_min = 1.0;    // churn active while the next level exceeds this
  double noise_scale = 0.1;  // lambda, scales the injected churn noise
  double step_scale = 1.5;   // eta, scales the Euler update
  int n_steps = 200;
  bool do_noisy_guidance = false;
  bool augment = false;  // centre + random rotation each step (3D only)
  SequenceKernel kernel = SequenceKernel::PathPlanning;
  // Default order applies guidance to raw logits and tempers the blend;
  // flipping tempers each pass before blending.
  bool temper_before_guidance = false;

  void validate() const;
  static SamplerConfig from_config(const Config& cfg);
};

// Two-pass guidance settings. The windows gate each branch on normalized
// time: structure refinement while t_hat/sigma_max is inside (end, start),
// sequence refinement while the mask time r is inside (end, start).
struct GuidanceConfig {
  double omega_struct = 1.5;  // carried for config parity; the structure
                              // branch blends with `rescale` below
  double omega_seq = 2.0;     // logit interpolation weight on the main pass
  double psi_seq = 0.6;       // mask time the condition sequence is raised to
  double psi_struct = 0.8;    // structure level the condition is raised to
  double rescale = 0.7;       // phi, weight on the rescaled guided prediction
  double start = 0.8;         // window upper edge (exclusive)
  double end = 0.3;           // window lower edge (exclusive)

  void validate() const;
  static GuidanceConfig from_config(const Config& cfg);
};

// Entropy-adaptive logit temperature: a global step level sharpened or
// flattened per position by how far the position's entropy sits below the
// ceiling h_max.
struct TemperatureConfig {
  double tau_high = 0.8;  // global temperature while r >= r_switch
  double tau_low = 0.1;   // global temperature once r < r_switch
  double r_switch = 0.2;
  double beta = 1.0;   // entropy coupling strength
  double gamma = 1.0;  // exponent on r
  double h_max = std::log(20.0);

  double global_at(double r) const { return r >= r_switch ? tau_high : tau_low; }

  void validate() const;
  static TemperatureConfig from_config(const Config& cfg);
};

}  // namespace mmdiff::sample
