#pragma once

#include <vector>

#include "mmdiff/core/config.hpp"
#include "mmdiff/core/rng.hpp"
#include "mmdiff/core/types.hpp"
#include "mmdiff/denoise/denoiser.hpp"
#include "mmdiff/fkc/ensemble.hpp"
#include "mmdiff/sample/joint.hpp"

namespace mmdiff::fkc {

// Two-model superposition steering.  Each particle follows a blend of the
// "on" (binder-target) and "off" (competitor) denoisers,
//   delta = (1 - beta) * delta_on + beta * delta_off,
// with the off-model prediction rigidly aligned onto the on-model one over
// the protein atoms before blending; ligand rows always follow the on
// model.  Importance weights track the mismatch between the blended
// proposal and the tilted target.
struct SgConfig {
  double beta = -0.5;
  int n_particles = 4;
  // Resample every step while the mask time is below this value.
  double tau_stop = 0.6;
  // Blend sequence logits with the same beta (otherwise on-model logits).
  bool guide_sequence = false;
  // Flip the sign of the weight increment (algorithm-box convention).
  bool algorithm_box_sign = false;
  // Rows of the coordinate block (atom indices) that belong to the ligand.
  std::vector<int> ligand_atoms;

  void validate() const;
  static SgConfig from_config(const Config& config);
};

struct SgResult {
  Ensemble ensemble;
  // (n_steps + 1) x K: log-weights after each step's increment, recorded
  // before any resampling that follows the step (row 0 = initial).
  Mat log_weight_trace;
  // Effective sample size at the same points (entry 0 = initial).
  Vec ess_trace;
  // n_steps x K: per-step weight increments.
  Mat increment_trace;
};

SgResult steer_sg(const denoise::Denoiser& on_model,
                  const denoise::Denoiser& off_model,
                  const sample::SampleOptions& options, const SgConfig& config,
                  Rng& rng);

}  // namespace mmdiff::fkc
