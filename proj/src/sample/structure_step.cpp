#include "mmdiff/sample/structure_step.hpp"

#include <cmath>

#include "mmdiff/core/error.hpp"

namespace mmdiff::sample {

void SamplerConfig::validate() const {
  if (noise_scale < 0.0)
    throw ConfigError("sampler: noise_scale must be >= 0");
  if (step_scale <= 0.0) throw ConfigError("sampler: step_scale must be > 0");
  if (gamma_0 < 0.0) throw ConfigError("sampler: gamma_0 must be >= 0");
  if (n_steps < 1) throw ConfigError("sampler: n_steps must be >= 1");
}

SamplerConfig SamplerConfig::from_config(const Config& cfg) {
  SamplerConfig out;
  const std::string s = "sampler";
  out.gamma_0 = cfg.get_double_or(s, "gamma_0", out.gamma_0);
  out.gamma_min = cfg.get_double_or(s, "gamma_min", out.gamma_min);
  out.noise_scale = cfg.get_double_or(s, "noise_scale", out.noise_scale);
  out.step_scale = cfg.get_double_or(s, "step_scale", out.step_scale);
  out.n_steps = static_cast<int>(cfg.get_int_or(s, "n_steps", out.n_steps));
  out.do_noisy_guidance =
      cfg.get_bool_or(s, "do_noisy_guidance", out.do_noisy_guidance);
  out.augment = cfg.get_bool_or(s, "augment", out.augment);
  const std::string kernel = cfg.get_string_or(s, "kernel", "path_planning");
  if (kernel == "standard") {
    out.kernel = SequenceKernel::Standard;
  } else if (kernel == "path_planning") {
    out.kernel = SequenceKernel::PathPlanning;
  } else {
    throw ConfigError("sampler: unknown kernel '" + kernel + "'");
  }
  out.temper_before_guidance = cfg.get_bool_or(s, "temper_before_guidance",
                                               out.temper_before_guidance);
  out.validate();
  return out;
}

ChurnStep churn(const ContinuousState& x, double c_prev, double c_next,
                const SamplerConfig& cfg, Rng& rng) {
  if (!(c_prev > c_next) || c_next < 0.0)
    throw DomainError("structure step: levels must satisfy c_prev > c_next >= 0");
  const double gamma = c_next > cfg.gamma_min ? cfg.gamma_0 : 0.0;
  ChurnStep out;
  out.t_hat = c_prev * (gamma + 1.0);
  if (out.t_hat <= 0.0)
    throw DomainError("structure step: degenerate step (t_hat = 0)");
  out.x_noisy = x;
  const double spread = out.t_hat * out.t_hat - c_prev * c_prev;
  out.injected_variance = cfg.noise_scale * cfg.noise_scale * spread;
  if (out.injected_variance > 0.0) {
    out.x_noisy.coords +=
        std::sqrt(out.injected_variance) * rng.normal_vec(x.dim());
  }
  return out;
}

ContinuousState structure_update(const ContinuousState& x_noisy,
                                 const ContinuousState& denoised, double t_hat,
                                 double c_next, double step_scale) {
  if (x_noisy.dim() != denoised.dim())
    throw DomainError("structure step: denoised dimension mismatch");
  ContinuousState out = x_noisy;
  const Vec delta = (x_noisy.coords - denoised.coords) / t_hat;
  out.coords = x_noisy.coords + step_scale * (c_next - t_hat) * delta;
  return out;
}

ContinuousState structure_step(const ContinuousState& x,
                               const DenoiseFn& denoised, double c_prev,
                               double c_next, const SamplerConfig& cfg,
                               Rng& rng) {
  const ChurnStep ch = churn(x, c_prev, c_next, cfg, rng);
  return structure_update(ch.x_noisy, denoised(ch.x_noisy, ch.t_hat), ch.t_hat,
                          c_next, cfg.step_scale);
}

}  // namespace mmdiff::sample
