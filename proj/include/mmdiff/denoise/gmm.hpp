#pragma once

#include "mmdiff/core/rng.hpp"
#include "mmdiff/core/types.hpp"
#include "mmdiff/denoise/denoiser.hpp"

namespace mmdiff::denoise {

// Isotropic Gaussian mixture with shared variance sigma0^2.  Under the
// variance-exploding forward process x_t = x_0 + t*eps, every posterior
// quantity below is available in closed form, which is what makes this model
// usable as an exact reference for the continuous sampler.
struct GaussianMixture {
  Vec weights;   // K, positive, sums to 1
  Mat means;     // K x d
  double sigma0 = 1.0;

  int components() const { return static_cast<int>(weights.size()); }
  int dim() const { return static_cast<int>(means.cols()); }
  void validate() const;
};

// Posterior responsibilities p(component | x_t) under noise level t
// (component variance inflated to sigma0^2 + t^2).
Vec gm_responsibilities(const GaussianMixture& model, const Vec& x, double t);

// Exact posterior mean E[x_0 | x_t]: sum_k w_k(x_t) * m_k(x_t) with
// m_k = (sigma0^2 x_t + t^2 mu_k) / (sigma0^2 + t^2).
Vec gm_denoise(const GaussianMixture& model, const Vec& x, double t);

// log p_t(x), the marginal density of x_t.
double gm_log_marginal(const GaussianMixture& model, const Vec& x, double t);

// grad_x log p_t(x) = (gm_denoise(x) - x) / t^2, computed directly.
Vec gm_score(const GaussianMixture& model, const Vec& x, double t);

// J(x)^T g where J = d gm_denoise / d x; needed when a reward is evaluated
// on the denoised prediction and its gradient is pulled back to x_t.
Vec gm_denoise_vjp(const GaussianMixture& model, const Vec& x, double t,
                   const Vec& g);

// Draws x_0 from the mixture itself.
Vec gm_sample(const GaussianMixture& model, Rng& rng);

// Denoiser wrapper; the sequence modality is empty (length 0).
class GmmDenoiser final : public Denoiser {
 public:
  explicit GmmDenoiser(GaussianMixture model);

  DenoiserOutput denoise(const ContinuousState& x, double t,
                         const SequenceState& seq, double r) const override;
  Vocabulary vocabulary() const override { return Vocabulary{2}; }
  int sequence_length() const override { return 0; }
  int coord_dim() const override { return model_.dim(); }

  const GaussianMixture& model() const { return model_; }

 private:
  GaussianMixture model_;
};

}  // namespace mmdiff::denoise
