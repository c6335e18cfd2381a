#pragma once

#include <vector>

#include "mmdiff/core/rng.hpp"
#include "mmdiff/core/schedule.hpp"
#include "mmdiff/core/types.hpp"
#include "mmdiff/denoise/denoiser.hpp"
#include "mmdiff/sample/config.hpp"

namespace mmdiff::sample {

// Everything one reverse trajectory needs.
struct SampleOptions {
  SamplerConfig sampler;
  GuidanceConfig guidance;
  TemperatureConfig temperature;
  NoiseSchedule noise;  // n_steps is taken from `sampler`
  MaskSchedule masks;
  CoordMode coord_mode = CoordMode::Toy;
  bool record_trajectory = false;
};

struct SampleResult {
  JointState final_state;
  // Snapshot before the first step plus one per step when requested.
  std::vector<JointState> trajectory;
};

// Centres the coordinates and applies a uniformly random rotation (drawn via
// normalized quaternions). Requires 3D coordinates.
ContinuousState centre_random_augmentation(const ContinuousState& x, Rng& rng);

// Full reverse-time joint loop: coordinates start at sigma_max * N(0, I),
// tokens start fully masked; each step churns and Euler-updates the
// coordinates and advances the tokens with the configured kernel toward the
// unmask target alpha(r). The final sequence holds no masks.
SampleResult sample_joint(const denoise::Denoiser& den,
                          const SampleOptions& opt, Rng& rng);

}  // namespace mmdiff::sample
