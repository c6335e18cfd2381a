#pragma once

#include <functional>

#include "mmdiff/core/config.hpp"
#include "mmdiff/core/rng.hpp"
#include "mmdiff/core/types.hpp"
#include "mmdiff/denoise/denoiser.hpp"
#include "mmdiff/fkc/ensemble.hpp"
#include "mmdiff/sample/joint.hpp"

namespace mmdiff::fkc {

// Exponential tilt of one categorical row:
//   probs_v  ∝ base_v * exp(beta * delta_v),
//   log_z    = log( sum_v base_v e^{beta delta_v} / sum_v base_v ).
// Computed in ratio form with a max shift so that beta == 0 or an all-zero
// delta returns the renormalized base row bit-for-bit and log_z == 0.0.
struct TiltedRow {
  Vec probs;
  double log_z = 0.0;
};

TiltedRow tilted_row(const Vec& base, const Vec& delta, double beta);

// Inverse-temperature ramp over mask time tau in [0, 1].
struct BetaSchedule {
  double beta_final = 1.0;
  bool linear_ramp = false;  // false: constant beta_final

  double at(double tau) const {
    return linear_ramp ? beta_final * tau : beta_final;
  }
};

// Scalar objective over a denoised state.  `value` receives the denoiser's
// posterior-mean coordinates and the current sequence.
struct Reward {
  std::function<double(const Vec& x0_hat, const SequenceState& seq)> value;
};

enum class ResamplePolicy {
  kEssThreshold,    // resample when ESS < ess_fraction * K
  kEveryStepUntil,  // resample every step while tau < tau_stop
};

struct MmConfig {
  BetaSchedule beta;
  int n_particles = 64;
  ResamplePolicy policy = ResamplePolicy::kEssThreshold;
  double ess_fraction = 0.5;
  double tau_stop = 0.6;
  // Evaluate the reward on the denoiser's clean prediction (default) or
  // directly on the noisy coordinates.
  bool reward_on_denoised = true;
  // Optional gradient of the probe reward with respect to the noisy
  // coordinates (pulled back through the denoiser).  When set, each step
  // with fresh injected noise adds a mean shift (beta/2) * variance * grad
  // and the weights absorb the exact change of measure.
  std::function<Vec(const Vec& x, double t, const SequenceState& seq,
                    double r)>
      grad_pullback;

  void validate() const;
  static MmConfig from_config(const Config& config);
};

struct MmResult {
  Ensemble ensemble;
  // (n_steps + 1) x K: log-weights after each step's increment, recorded
  // before any resampling that follows the step (row 0 = initial).
  Mat log_weight_trace;
  // Effective sample size at the same points (entry 0 = initial).
  Vec ess_trace;
  // n_steps x K: per-step weight increments.
  Mat increment_trace;
};

// Reward-tilted sampling: runs K particles of the joint sampler and keeps
// importance weights so that the weighted ensemble targets
//   q(x, s)  ∝  p(x, s) * exp(beta * R(x, s)).
// Token draws are tilted toward rewarding unmaskings; weights absorb the
// tilt normalizers and the change in the reward look-ahead between steps.
MmResult steer_mm(const denoise::Denoiser& model, const Reward& reward,
                  const sample::SampleOptions& options, const MmConfig& config,
                  Rng& rng);

}  // namespace mmdiff::fkc
