#include "mmdiff/sample/joint.hpp"

#include <Eigen/Geometry>

#include "mmdiff/core/error.hpp"
#include "mmdiff/sample/guidance.hpp"
#include "mmdiff/sample/sequence_step.hpp"
#include "mmdiff/sample/structure_step.hpp"

namespace mmdiff::sample {

ContinuousState centre_random_augmentation(const ContinuousState& x,
                                           Rng& rng) {
  require_3d(x, "centre random augmentation");
  Eigen::Quaterniond q;
  do {
    q = Eigen::Quaterniond(rng.normal(), rng.normal(), rng.normal(),
                           rng.normal());
  } while (q.norm() < 1e-12);
  const Mat3 R = q.normalized().toRotationMatrix();

  ContinuousState out = x;
  Eigen::Map<Eigen::Matrix<double, 3, Eigen::Dynamic>> pts(out.coords.data(),
                                                           3, out.dim() / 3);
  const Vec3 centroid = pts.rowwise().mean();
  pts.colwise() -= centroid;
  pts = R * pts;
  return out;
}

SampleResult sample_joint(const denoise::Denoiser& den,
                          const SampleOptions& opt, Rng& rng) {
  opt.sampler.validate();
  opt.temperature.validate();
  if (opt.sampler.do_noisy_guidance) opt.guidance.validate();
  if (opt.sampler.augment && opt.coord_mode != CoordMode::Atoms3D)
    throw ConfigError("sample: augmentation requires 3D coordinates");
  if (opt.coord_mode == CoordMode::Atoms3D && den.coord_dim() % 3 != 0)
    throw ConfigError("sample: 3D mode needs a coordinate count divisible by 3");

  NoiseSchedule sched = opt.noise;
  sched.n_steps = opt.sampler.n_steps;
  const std::vector<double> levels = noise_steps(sched);
  const TimeCoupling grid = make_time_coupling(sched);
  const int T = sched.n_steps;
  const Vocabulary vocab = den.vocabulary();

  JointState state;
  state.structure.mode = opt.coord_mode;
  state.structure.coords = levels[0] * rng.normal_vec(den.coord_dim());
  state.seq.tokens.assign(static_cast<std::size_t>(den.sequence_length()),
                          vocab.mask_id());
  state.tau = 0.0;
  state.t = levels[0];
  state.r = 1.0;

  SampleResult res;
  if (opt.record_trajectory) res.trajectory.push_back(state);

  for (int i = 1; i <= T; ++i) {
    const double c_prev = levels[static_cast<std::size_t>(i - 1)];
    const double c_next = levels[static_cast<std::size_t>(i)];
    const double r_prev = grid.r[static_cast<std::size_t>(i - 1)];
    const double r_next = grid.r[static_cast<std::size_t>(i)];

    if (opt.sampler.augment)
      state.structure = centre_random_augmentation(state.structure, rng);

    const ChurnStep ch = churn(state.structure, c_prev, c_next, opt.sampler, rng);

    DenoiserOutput den_out;
    if (opt.sampler.do_noisy_guidance) {
      den_out = noisy_guidance(
          ch.x_noisy, ch.t_hat, state.seq, r_prev, den, opt.guidance, sched,
          opt.masks, rng,
          opt.sampler.temper_before_guidance ? &opt.temperature : nullptr);
    } else {
      den_out = den.denoise(ch.x_noisy, ch.t_hat, state.seq, r_prev);
    }

    state.structure = structure_update(ch.x_noisy, den_out.x0_hat, ch.t_hat,
                                       c_next, opt.sampler.step_scale);

    Mat logits = std::move(den_out.logits);
    if (!(opt.sampler.do_noisy_guidance && opt.sampler.temper_before_guidance))
      logits = temper_logits(logits, r_prev, opt.temperature);

    const double kappa = alpha(opt.masks, r_next);
    if (opt.sampler.kernel == SequenceKernel::PathPlanning) {
      state.seq = path_planning_step(state.seq, logits, kappa, vocab, rng);
    } else {
      state.seq = ancestral_unmask_step(state.seq, logits,
                                        alpha(opt.masks, r_prev), kappa, vocab,
                                        rng);
    }

    state.tau = grid.tau[static_cast<std::size_t>(i)];
    state.t = c_next;
    state.r = r_next;
    if (opt.record_trajectory) res.trajectory.push_back(state);
  }

  res.final_state = state;
  return res;
}

}  // namespace mmdiff::sample
