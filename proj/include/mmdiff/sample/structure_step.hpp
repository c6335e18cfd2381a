#pragma once

#include <functional>

#include "mmdiff/core/rng.hpp"
#include "mmdiff/core/types.hpp"
#include "mmdiff/sample/config.hpp"

namespace mmdiff::sample {

// Coordinates after the churn phase: the level is raised from c_prev to
// t_hat = c_prev*(gamma+1) and matching Gaussian noise is injected.
struct ChurnStep {
  ContinuousState x_noisy;
  double t_hat = 0.0;
  // Per-coordinate variance of the injected noise,
  // noise_scale^2 * (t_hat^2 - c_prev^2); zero when the churn gate is closed.
  double injected_variance = 0.0;
};

// Churn phase of one reverse step from level c_prev toward c_next. The gate
// opens (gamma = gamma_0) only while c_next > gamma_min. No randomness is
// consumed when the injected noise is exactly zero.
ChurnStep churn(const ContinuousState& x, double c_prev, double c_next,
                const SamplerConfig& cfg, Rng& rng);

// Euler phase: x <- x_noisy + step_scale * (c_next - t_hat) * delta with
// delta = (x_noisy - denoised)/t_hat.
ContinuousState structure_update(const ContinuousState& x_noisy,
                                 const ContinuousState& denoised, double t_hat,
                                 double c_next, double step_scale);

// Clean-coordinate prediction evaluated on the churned state at its raised
// level; the caller closes over the denoiser and any sequence conditioning.
using DenoiseFn =
    std::function<ContinuousState(const ContinuousState& x_noisy, double t_hat)>;

// One full reverse structure step: churn, denoise at (x_noisy, t_hat), Euler.
ContinuousState structure_step(const ContinuousState& x,
                               const DenoiseFn& denoised, double c_prev,
                               double c_next, const SamplerConfig& cfg,
                               Rng& rng);

}  // namespace mmdiff::sample
