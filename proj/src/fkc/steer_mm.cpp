#include "mmdiff/fkc/steer_mm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "mmdiff/core/error.hpp"
#include "mmdiff/sample/sequence_step.hpp"
#include "mmdiff/sample/structure_step.hpp"

namespace mmdiff::fkc {

TiltedRow tilted_row(const Vec& base, const Vec& delta, double beta) {
  if (base.size() == 0) throw DomainError("tilted row: empty base row");
  if (base.size() != delta.size())
    throw DomainError("tilted row: base and delta sizes differ");

  double shift = -std::numeric_limits<double>::infinity();
  for (Eigen::Index v = 0; v < base.size(); ++v) {
    if (base[v] < 0.0)
      throw DomainError("tilted row: negative base probability");
    if (base[v] == 0.0) continue;
    const double e = beta * delta[v];
    if (!std::isfinite(e))
      throw DataError("tilted row: non-finite tilt exponent");
    shift = std::max(shift, e);
  }
  if (!std::isfinite(shift))
    throw DomainError("tilted row: base row has no positive mass");

  Vec tilted = Vec::Zero(base.size());
  for (Eigen::Index v = 0; v < base.size(); ++v)
    if (base[v] > 0.0) tilted[v] = base[v] * std::exp(beta * delta[v] - shift);

  const double tilted_sum = tilted.sum();
  const double base_sum = base.sum();
  TiltedRow out;
  out.probs = tilted / tilted_sum;
  out.log_z = shift + std::log(tilted_sum / base_sum);
  return out;
}

void MmConfig::validate() const {
  if (n_particles < 1)
    throw ConfigError("steer_mm: n_particles must be at least 1");
  if (!(ess_fraction > 0.0 && ess_fraction <= 1.0))
    throw ConfigError("steer_mm: ess_fraction must lie in (0, 1]");
  if (!(tau_stop >= 0.0 && tau_stop <= 1.0))
    throw ConfigError("steer_mm: tau_stop must lie in [0, 1]");
  if (!std::isfinite(beta.beta_final))
    throw ConfigError("steer_mm: beta_final must be finite");
}

MmConfig MmConfig::from_config(const Config& config) {
  MmConfig out;
  const std::string sec = "steer_mm";
  out.beta.beta_final =
      config.get_double_or(sec, "beta_final", out.beta.beta_final);
  out.beta.linear_ramp =
      config.get_bool_or(sec, "linear_ramp", out.beta.linear_ramp);
  out.n_particles = static_cast<int>(
      config.get_int_or(sec, "n_particles", out.n_particles));
  const std::string policy =
      config.get_string_or(sec, "resample_policy", "ess_threshold");
  if (policy == "ess_threshold") {
    out.policy = ResamplePolicy::kEssThreshold;
  } else if (policy == "every_step_until") {
    out.policy = ResamplePolicy::kEveryStepUntil;
  } else {
    throw ConfigError("steer_mm: unknown resample_policy '" + policy + "'");
  }
  out.ess_fraction = config.get_double_or(sec, "ess_fraction", out.ess_fraction);
  out.tau_stop = config.get_double_or(sec, "tau_stop", out.tau_stop);
  out.reward_on_denoised =
      config.get_bool_or(sec, "reward_on_denoised", out.reward_on_denoised);
  out.validate();
  return out;
}

MmResult steer_mm(const denoise::Denoiser& model, const Reward& reward,
                  const sample::SampleOptions& opt, const MmConfig& cfg,
                  Rng& root) {
  cfg.validate();
  opt.sampler.validate();
  opt.temperature.validate();
  if (!reward.value)
    throw ConfigError("steer_mm: a reward value function is required");
  if (opt.sampler.do_noisy_guidance)
    throw ConfigError("steer_mm: two-pass guidance cannot be combined with "
                      "reward steering");
  if (opt.sampler.kernel != sample::SequenceKernel::Standard)
    throw ConfigError(
        "steer_mm: reward tilting requires the standard sequence kernel");
  if (opt.sampler.augment && opt.coord_mode != CoordMode::Atoms3D)
    throw ConfigError("steer_mm: augmentation requires 3D coordinates");
  if (opt.coord_mode == CoordMode::Atoms3D && model.coord_dim() % 3 != 0)
    throw ConfigError(
        "steer_mm: 3D mode needs a coordinate count divisible by 3");

  NoiseSchedule sched = opt.noise;
  sched.n_steps = opt.sampler.n_steps;
  const std::vector<double> levels = noise_steps(sched);
  const TimeCoupling grid = make_time_coupling(sched);
  const int T = sched.n_steps;
  const int K = cfg.n_particles;
  const Vocabulary vocab = model.vocabulary();

  // Reward look-ahead: value of the denoised prediction at the given state
  // (or of the noisy coordinates themselves when the switch is off).
  const auto probe = [&](const ContinuousState& x, double t,
                         const SequenceState& s, double r) {
    const double value =
        cfg.reward_on_denoised
            ? reward.value(model.denoise(x, t, s, r).x0_hat.coords, s)
            : reward.value(x.coords, s);
    if (!std::isfinite(value))
      throw DataError("steer_mm: reward returned a non-finite value");
    return value;
  };

  std::vector<Rng> streams;
  streams.reserve(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k)
    streams.push_back(root.stream(static_cast<std::uint64_t>(k)));
  Rng resample_rng = root.stream(static_cast<std::uint64_t>(K));

  Ensemble ens;
  ens.particles.resize(static_cast<std::size_t>(K));
  // Carried look-ahead value per particle, always matching its current
  // (structure, sequence, level, mask time); only maintained while the
  // relevant beta is non-zero.
  Vec cache = Vec::Zero(K);
  const double beta0 = cfg.beta.at(grid.tau[0]);
  const double log_uniform = -std::log(static_cast<double>(K));
  for (int k = 0; k < K; ++k) {
    Particle& p = ens.particles[static_cast<std::size_t>(k)];
    p.state.structure.mode = opt.coord_mode;
    p.state.structure.coords =
        levels[0] *
        streams[static_cast<std::size_t>(k)].normal_vec(model.coord_dim());
    p.state.seq.tokens.assign(static_cast<std::size_t>(model.sequence_length()),
                              vocab.mask_id());
    p.state.tau = 0.0;
    p.state.t = levels[0];
    p.state.r = 1.0;
    p.log_weight = log_uniform;
    if (beta0 != 0.0) {
      cache[k] = probe(p.state.structure, levels[0], p.state.seq, 1.0);
      p.log_weight += beta0 * cache[k];
    }
  }

  MmResult res;
  res.log_weight_trace = Mat(T + 1, K);
  res.ess_trace = Vec(T + 1);
  res.increment_trace = Mat::Zero(T, K);
  for (int k = 0; k < K; ++k)
    res.log_weight_trace(0, k) =
        ens.particles[static_cast<std::size_t>(k)].log_weight;
  res.ess_trace[0] = ess(ens);

  for (int i = 1; i <= T; ++i) {
    const double c_prev = levels[static_cast<std::size_t>(i - 1)];
    const double c_next = levels[static_cast<std::size_t>(i)];
    const double r_prev = grid.r[static_cast<std::size_t>(i - 1)];
    const double r_next = grid.r[static_cast<std::size_t>(i)];
    const double tau_next = grid.tau[static_cast<std::size_t>(i)];
    const double beta_prev = cfg.beta.at(grid.tau[static_cast<std::size_t>(i - 1)]);
    const double beta_next = cfg.beta.at(tau_next);
    const double a_prev = alpha(opt.masks, r_prev);
    const double a_next = alpha(opt.masks, r_next);

    for (int k = 0; k < K; ++k) {
      Particle& p = ens.particles[static_cast<std::size_t>(k)];
      Rng& rng = streams[static_cast<std::size_t>(k)];
      double dlogw = 0.0;

      if (opt.sampler.augment) {
        p.state.structure =
            sample::centre_random_augmentation(p.state.structure, rng);
        // The rotation changes the denoiser input, so the carried look-ahead
        // is stale and must be refreshed at the augmented state.
        if (beta_prev != 0.0)
          cache[k] = probe(p.state.structure, c_prev, p.state.seq, r_prev);
      }

      const ContinuousState x_prev = p.state.structure;
      sample::ChurnStep ch =
          sample::churn(x_prev, c_prev, c_next, opt.sampler, rng);

      // Mean-shift the injected churn noise along the reward gradient and
      // absorb the exact Gaussian change of measure into the weight.
      if (cfg.grad_pullback && beta_prev != 0.0 && ch.injected_variance > 0.0) {
        const Vec grad =
            cfg.grad_pullback(x_prev.coords, c_prev, p.state.seq, r_prev);
        if (grad.size() != x_prev.coords.size())
          throw DataError("steer_mm: reward gradient has wrong dimension");
        const Vec shift = 0.5 * beta_prev * ch.injected_variance * grad;
        ch.x_noisy.coords += shift;
        dlogw += (shift.squaredNorm() -
                  2.0 * shift.dot(ch.x_noisy.coords - x_prev.coords)) /
                 (2.0 * ch.injected_variance);
      }

      const DenoiserOutput out =
          model.denoise(ch.x_noisy, ch.t_hat, p.state.seq, r_prev);
      const ContinuousState x_next = sample::structure_update(
          ch.x_noisy, out.x0_hat, ch.t_hat, c_next, opt.sampler.step_scale);
      const Mat logits = sample::temper_logits(out.logits, r_prev, opt.temperature);

      if (beta_prev == 0.0) {
        p.state.seq = sample::ancestral_unmask_step(p.state.seq, logits, a_prev,
                                                    a_next, vocab, rng);
      } else {
        // Tilted ancestral kernel: each masked position's unmask/stay choice
        // and token row are reweighted by exp(beta * (look-ahead change));
        // every row normalizer joins the weight so the tilt is accounted for
        // exactly.  Probes evaluate at the pre-churn state; `running` tracks
        // the look-ahead of the partially updated sequence.
        SequenceState seq = p.state.seq;
        double running = cache[k];
        const double remaining = 1.0 - a_prev;
        const double u =
            remaining <= 0.0 ? 1.0
                             : std::min(1.0, (a_next - a_prev) / remaining);
        Vec probes = Vec::Zero(vocab.size);
        Vec deltas = Vec::Zero(vocab.size);
        for (int j = 0; j < seq.length(); ++j) {
          if (!vocab.is_mask(seq.tokens[static_cast<std::size_t>(j)])) continue;
          const Vec base = sample::softmax_row(logits, j);
          SequenceState probe_seq = seq;
          for (int v = 0; v < vocab.size; ++v) {
            probes[v] = 0.0;
            deltas[v] = 0.0;
            if (base[v] <= 0.0) continue;
            probe_seq.tokens[static_cast<std::size_t>(j)] = v;
            probes[v] = probe(x_prev, c_prev, probe_seq, r_prev);
            deltas[v] = probes[v] - running;
          }
          const TiltedRow row = tilted_row(base, deltas, beta_prev);
          const double ratio = std::exp(row.log_z);
          const double z = 1.0 + u * (ratio - 1.0);
          dlogw += std::log1p(u * (ratio - 1.0));
          if (rng.uniform() < u * ratio / z) {
            const int tok = rng.categorical(row.probs);
            seq.tokens[static_cast<std::size_t>(j)] = tok;
            running = probes[tok];
          }
        }
        p.state.seq = std::move(seq);
        dlogw -= beta_prev * running;
      }

      p.state.structure = x_next;
      p.state.tau = tau_next;
      p.state.t = c_next;
      p.state.r = r_next;

      if (beta_next != 0.0) {
        cache[k] = probe(p.state.structure, c_next, p.state.seq, r_next);
        dlogw += beta_next * cache[k];
      }

      p.log_weight += dlogw;
      res.increment_trace(i - 1, k) = dlogw;
    }

    for (int k = 0; k < K; ++k)
      res.log_weight_trace(i, k) =
          ens.particles[static_cast<std::size_t>(k)].log_weight;
    res.ess_trace[i] = ess(ens);

    const bool do_resample =
        cfg.policy == ResamplePolicy::kEssThreshold
            ? res.ess_trace[i] < cfg.ess_fraction * K
            : tau_next < cfg.tau_stop;
    if (do_resample) {
      const std::vector<int> chosen = resample(ens, resample_rng);
      const Vec old_cache = cache;
      for (int k = 0; k < K; ++k)
        cache[k] = old_cache[chosen[static_cast<std::size_t>(k)]];
    }
  }

  res.ensemble = std::move(ens);
  return res;
}

}  // namespace mmdiff::fkc
