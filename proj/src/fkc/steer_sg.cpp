#include "mmdiff/fkc/steer_sg.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "mmdiff/core/error.hpp"
#include "mmdiff/geom/kabsch.hpp"
#include "mmdiff/sample/sequence_step.hpp"
#include "mmdiff/sample/structure_step.hpp"

namespace mmdiff::fkc {
namespace {

Points as_points(const Vec& coords) {
  const Eigen::Index n = coords.size() / 3;
  return Eigen::Map<const Eigen::Matrix<double, 3, Eigen::Dynamic>>(
             coords.data(), 3, n)
      .transpose();
}

Vec as_coords(const Points& pts) {
  Vec out(pts.rows() * 3);
  Eigen::Map<Eigen::Matrix<double, 3, Eigen::Dynamic>>(out.data(), 3,
                                                       pts.rows()) =
      pts.transpose();
  return out;
}

}  // namespace

void SgConfig::validate() const {
  if (n_particles < 1)
    throw ConfigError("steer_sg: n_particles must be at least 1");
  if (!(tau_stop >= 0.0 && tau_stop <= 1.0))
    throw ConfigError("steer_sg: tau_stop must lie in [0, 1]");
  if (!std::isfinite(beta))
    throw ConfigError("steer_sg: beta must be finite");
  for (const int a : ligand_atoms)
    if (a < 0)
      throw ConfigError("steer_sg: ligand atom indices must be non-negative");
}

SgConfig SgConfig::from_config(const Config& config) {
  SgConfig out;
  const std::string sec = "steer_sg";
  out.beta = config.get_double_or(sec, "beta", out.beta);
  out.n_particles = static_cast<int>(
      config.get_int_or(sec, "n_particles", out.n_particles));
  out.tau_stop = config.get_double_or(sec, "tau_stop", out.tau_stop);
  out.guide_sequence =
      config.get_bool_or(sec, "guide_sequence", out.guide_sequence);
  out.algorithm_box_sign =
      config.get_bool_or(sec, "algorithm_box_sign", out.algorithm_box_sign);
  if (config.has(sec, "ligand_atoms")) {
    for (const double d : config.get_double_list(sec, "ligand_atoms")) {
      const double r = std::round(d);
      if (d != r)
        throw ConfigError("steer_sg: ligand_atoms entries must be integers");
      out.ligand_atoms.push_back(static_cast<int>(r));
    }
  }
  out.validate();
  return out;
}

SgResult steer_sg(const denoise::Denoiser& on_model,
                  const denoise::Denoiser& off_model,
                  const sample::SampleOptions& opt, const SgConfig& cfg,
                  Rng& root) {
  cfg.validate();
  opt.sampler.validate();
  opt.temperature.validate();
  if (opt.sampler.do_noisy_guidance)
    throw ConfigError("steer_sg: two-pass guidance cannot be combined with "
                      "two-model steering");
  if (on_model.coord_dim() != off_model.coord_dim() ||
      on_model.sequence_length() != off_model.sequence_length() ||
      on_model.vocabulary().size != off_model.vocabulary().size)
    throw ConfigError("steer_sg: on/off models disagree on state shape");
  if (opt.sampler.augment && opt.coord_mode != CoordMode::Atoms3D)
    throw ConfigError("steer_sg: augmentation requires 3D coordinates");
  if (opt.coord_mode == CoordMode::Atoms3D && on_model.coord_dim() % 3 != 0)
    throw ConfigError(
        "steer_sg: 3D mode needs a coordinate count divisible by 3");
  if (opt.coord_mode != CoordMode::Atoms3D && !cfg.ligand_atoms.empty())
    throw ConfigError("steer_sg: ligand atoms require 3D coordinates");

  NoiseSchedule sched = opt.noise;
  sched.n_steps = opt.sampler.n_steps;
  const std::vector<double> levels = noise_steps(sched);
  const TimeCoupling grid = make_time_coupling(sched);
  const int T = sched.n_steps;
  const int K = cfg.n_particles;
  const Vocabulary vocab = on_model.vocabulary();

  const int n_atoms =
      opt.coord_mode == CoordMode::Atoms3D ? on_model.coord_dim() / 3 : 0;
  std::vector<bool> ligand_row(static_cast<std::size_t>(n_atoms), false);
  for (const int a : cfg.ligand_atoms) {
    if (a >= n_atoms)
      throw ConfigError("steer_sg: ligand atom index out of range");
    ligand_row[static_cast<std::size_t>(a)] = true;
  }

  std::vector<Rng> streams;
  streams.reserve(static_cast<std::size_t>(K));
  for (int k = 0; k < K; ++k)
    streams.push_back(root.stream(static_cast<std::uint64_t>(k)));
  Rng resample_rng = root.stream(static_cast<std::uint64_t>(K));

  Ensemble ens;
  ens.particles.resize(static_cast<std::size_t>(K));
  const double log_uniform = -std::log(static_cast<double>(K));
  for (int k = 0; k < K; ++k) {
    Particle& p = ens.particles[static_cast<std::size_t>(k)];
    p.state.structure.mode = opt.coord_mode;
    p.state.structure.coords =
        levels[0] * streams[static_cast<std::size_t>(k)].normal_vec(
                        on_model.coord_dim());
    p.state.seq.tokens.assign(
        static_cast<std::size_t>(on_model.sequence_length()), vocab.mask_id());
    p.state.tau = 0.0;
    p.state.t = levels[0];
    p.state.r = 1.0;
    p.log_weight = log_uniform;
  }

  SgResult res;
  res.log_weight_trace = Mat(T + 1, K);
  res.ess_trace = Vec(T + 1);
  res.increment_trace = Mat::Zero(T, K);
  for (int k = 0; k < K; ++k)
    res.log_weight_trace(0, k) = ens.particles[static_cast<std::size_t>(k)].log_weight;
  res.ess_trace[0] = ess(ens);

  for (int i = 1; i <= T; ++i) {
    const double c_prev = levels[static_cast<std::size_t>(i - 1)];
    const double c_next = levels[static_cast<std::size_t>(i)];
    const double r_prev = grid.r[static_cast<std::size_t>(i - 1)];
    const double r_next = grid.r[static_cast<std::size_t>(i)];
    const double tau_next = grid.tau[static_cast<std::size_t>(i)];

    for (int k = 0; k < K; ++k) {
      Particle& p = ens.particles[static_cast<std::size_t>(k)];
      Rng& rng = streams[static_cast<std::size_t>(k)];

      if (opt.sampler.augment)
        p.state.structure =
            sample::centre_random_augmentation(p.state.structure, rng);

      const sample::ChurnStep ch =
          sample::churn(p.state.structure, c_prev, c_next, opt.sampler, rng);
      const DenoiserOutput out_on =
          on_model.denoise(ch.x_noisy, ch.t_hat, p.state.seq, r_prev);
      const DenoiserOutput out_off =
          off_model.denoise(ch.x_noisy, ch.t_hat, p.state.seq, r_prev);

      Vec off_coords = out_off.x0_hat.coords;
      if (opt.coord_mode == CoordMode::Atoms3D) {
        const Points off_pts = as_points(off_coords);
        const Points on_pts = as_points(out_on.x0_hat.coords);
        const int n_protein =
            n_atoms - static_cast<int>(cfg.ligand_atoms.size());
        if (n_protein < 3)
          throw DomainError(
              "steer_sg: frame alignment needs at least 3 protein atoms");
        Points off_protein(n_protein, 3);
        Points on_protein(n_protein, 3);
        int row = 0;
        for (int a = 0; a < n_atoms; ++a) {
          if (ligand_row[static_cast<std::size_t>(a)]) continue;
          off_protein.row(row) = off_pts.row(a);
          on_protein.row(row) = on_pts.row(a);
          ++row;
        }
        const geom::AlignmentResult align = geom::kabsch(off_protein, on_protein);
        off_coords = as_coords(align.apply(off_pts));
      }

      const double t_hat = ch.t_hat;
      const Vec delta_on = (ch.x_noisy.coords - out_on.x0_hat.coords) / t_hat;
      const Vec delta_off = (ch.x_noisy.coords - off_coords) / t_hat;
      Vec delta = (1.0 - cfg.beta) * delta_on + cfg.beta * delta_off;
      for (int a = 0; a < n_atoms; ++a)
        if (ligand_row[static_cast<std::size_t>(a)])
          delta.segment<3>(3 * a) = delta_on.segment<3>(3 * a);
      p.state.structure.coords =
          ch.x_noisy.coords + opt.sampler.step_scale * (c_next - t_hat) * delta;

      const Vec score_gap = (out_on.x0_hat.coords - off_coords) / (t_hat * t_hat);
      double dw = t_hat * cfg.beta * (cfg.beta - 1.0) * score_gap.squaredNorm() *
                  (c_next - t_hat);
      if (cfg.algorithm_box_sign) dw = -dw;
      p.log_weight += dw;
      res.increment_trace(i - 1, k) = dw;

      Mat logits = cfg.guide_sequence
                       ? Mat((1.0 - cfg.beta) * out_on.logits +
                             cfg.beta * out_off.logits)
                       : out_on.logits;
      logits = sample::temper_logits(logits, r_prev, opt.temperature);
      const double kappa = alpha(opt.masks, r_next);
      if (opt.sampler.kernel == sample::SequenceKernel::PathPlanning) {
        p.state.seq =
            sample::path_planning_step(p.state.seq, logits, kappa, vocab, rng);
      } else {
        p.state.seq = sample::ancestral_unmask_step(
            p.state.seq, logits, alpha(opt.masks, r_prev), kappa, vocab, rng);
      }

      p.state.tau = tau_next;
      p.state.t = c_next;
      p.state.r = r_next;
    }

    for (int k = 0; k < K; ++k)
      res.log_weight_trace(i, k) =
          ens.particles[static_cast<std::size_t>(k)].log_weight;
    res.ess_trace[i] = ess(ens);
    if (tau_next < cfg.tau_stop) resample(ens, resample_rng);
  }

  res.ensemble = std::move(ens);
  return res;
}

}  // namespace mmdiff::fkc
