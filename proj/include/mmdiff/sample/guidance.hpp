#pragma once

#include "mmdiff/core/rng.hpp"
#include "mmdiff/core/schedule.hpp"
#include "mmdiff/core/types.hpp"
#include "mmdiff/denoise/denoiser.hpp"
#include "mmdiff/sample/config.hpp"

namespace mmdiff::sample {

// Two-pass guidance around one conditional denoiser call.
//
// Structure branch (while t_hat/sigma_max is inside (end, start)): the
// sequence condition is bridge-corrupted up to mask time psi_seq, a second
// pass is run against it, its prediction is rescaled by the ratio of the two
// predictions' standard deviations, and the result is blended with weight
// `rescale` into the conditional prediction.
//
// Sequence branch (while r is inside (end, start)): the coordinates are
// noised up to level psi_struct, a second pass is run against them, and the
// logits are interpolated as omega_seq * cond + (1 - omega_seq) * guided.
//
// Outside both windows the conditional outputs pass through untouched and no
// randomness is consumed. The guidance condition must be strictly more
// noised than the state: psi_seq <= r or psi_struct <= t_hat inside an
// active window is a configuration error.
//
// When `temper_first` is non-null each pass's logits are tempered before the
// sequence-branch blend (the flipped application order).
DenoiserOutput noisy_guidance(const ContinuousState& x_noisy, double t_hat,
                              const SequenceState& seq, double r,
                              const denoise::Denoiser& den,
                              const GuidanceConfig& cfg,
                              const NoiseSchedule& noise,
                              const MaskSchedule& masks, Rng& rng,
                              const TemperatureConfig* temper_first = nullptr);

}  // namespace mmdiff::sample
