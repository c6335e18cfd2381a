#include "mmdiff/sample/guidance.hpp"

#include <cmath>

#include "mmdiff/core/corrupt.hpp"
#include "mmdiff/core/error.hpp"
#include "mmdiff/sample/sequence_step.hpp"

namespace mmdiff::sample {

void GuidanceConfig::validate() const {
  if (!(end < start))
    throw ConfigError("guidance: window must satisfy end < start");
  if (rescale < 0.0 || rescale > 1.0)
    throw ConfigError("guidance: rescale must lie in [0, 1]");
  if (psi_seq < 0.0 || psi_seq > 1.0)
    throw ConfigError("guidance: psi_seq must lie in [0, 1]");
  if (psi_struct <= 0.0)
    throw ConfigError("guidance: psi_struct must be > 0");
}

GuidanceConfig GuidanceConfig::from_config(const Config& cfg) {
  GuidanceConfig out;
  const std::string s = "guidance";
  out.omega_struct = cfg.get_double_or(s, "omega_struct", out.omega_struct);
  out.omega_seq = cfg.get_double_or(s, "omega_seq", out.omega_seq);
  out.psi_seq = cfg.get_double_or(s, "psi_seq", out.psi_seq);
  out.psi_struct = cfg.get_double_or(s, "psi_struct", out.psi_struct);
  out.rescale = cfg.get_double_or(s, "rescale", out.rescale);
  out.start = cfg.get_double_or(s, "start", out.start);
  out.end = cfg.get_double_or(s, "end", out.end);
  out.validate();
  return out;
}

namespace {

double stddev(const Vec& v) {
  if (v.size() == 0) return 0.0;
  const double mean = v.mean();
  return std::sqrt((v.array() - mean).square().sum() / v.size());
}

}  // namespace

DenoiserOutput noisy_guidance(const ContinuousState& x_noisy, double t_hat,
                              const SequenceState& seq, double r,
                              const denoise::Denoiser& den,
                              const GuidanceConfig& cfg,
                              const NoiseSchedule& noise,
                              const MaskSchedule& masks, Rng& rng,
                              const TemperatureConfig* temper_first) {
  cfg.validate();
  DenoiserOutput cond = den.denoise(x_noisy, t_hat, seq, r);
  if (temper_first != nullptr)
    cond.logits = temper_logits(cond.logits, r, *temper_first);
  DenoiserOutput out = cond;

  const double t_norm = t_hat / noise.sigma_max;
  if (t_norm > cfg.end && t_norm < cfg.start) {
    if (cfg.psi_seq <= r)
      throw ConfigError(
          "guidance: psi_seq must exceed the current mask time r");
    const SequenceState seq_ng = corrupt_discrete_bridge(
        seq, r, cfg.psi_seq, den.vocabulary(), masks, rng);
    const DenoiserOutput guided =
        den.denoise(x_noisy, t_hat, seq_ng, cfg.psi_seq);
    const double sd_cond = stddev(cond.x0_hat.coords);
    const double sd_guided = stddev(guided.x0_hat.coords);
    const double ratio = sd_guided > 0.0 ? sd_cond / sd_guided : 1.0;
    out.x0_hat.coords = cfg.rescale * (ratio * guided.x0_hat.coords) +
                        (1.0 - cfg.rescale) * cond.x0_hat.coords;
  }

  if (r > cfg.end && r < cfg.start) {
    if (cfg.psi_struct <= t_hat)
      throw ConfigError(
          "guidance: psi_struct must exceed the current structure level");
    ContinuousState x_ng = x_noisy;
    const double extra =
        std::sqrt(cfg.psi_struct * cfg.psi_struct - t_hat * t_hat);
    x_ng.coords += extra * rng.normal_vec(x_noisy.dim());
    DenoiserOutput guided = den.denoise(x_ng, cfg.psi_struct, seq, r);
    if (temper_first != nullptr)
      guided.logits = temper_logits(guided.logits, r, *temper_first);
    out.logits =
        cfg.omega_seq * cond.logits + (1.0 - cfg.omega_seq) * guided.logits;
  }

  return out;
}

}  // namespace mmdiff::sample
