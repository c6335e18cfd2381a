#pragma once

#include <vector>

#include "mmdiff/core/rng.hpp"
#include "mmdiff/core/types.hpp"
#include "mmdiff/denoise/denoiser.hpp"

namespace mmdiff::denoise {

// Joint sequence/structure toy distribution with a latent component c:
//   c ~ weights;  x | c ~ N(mu_c, sigma0^2 I);
//   token at component_position = c;
//   token at every other position p ~ tables[c].row(p), independently.
// The exact joint posterior over c given any mix of continuous and token
// evidence is a K-term Bayes computation, so the exact denoiser, its
// Jacobian, and every marginal are available in closed form.
struct CoupledToyModel {
  Vec weights;               // K mixture weights
  Mat means;                 // K x d component means
  double sigma0 = 1.0;
  int L = 0;                 // sequence length
  int V = 0;                 // real vocabulary size (K <= V)
  int component_position = 0;
  std::vector<Mat> tables;   // per component: L x V, rows are categoricals
                             // (row at component_position is ignored)

  int components() const { return static_cast<int>(weights.size()); }
  int dim() const { return static_cast<int>(means.cols()); }
  void validate() const;

  // Exact probability of a full token string (marginalized over x).
  double token_prob(const std::vector<int>& tokens) const;
};

// p(c | x_t at level t, observed tokens); masked positions contribute
// nothing.  Throws ImpossibleEvidenceError when no component supports the
// observed pattern.
Vec coupled_posterior(const CoupledToyModel& model, const Vec& x, double t,
                      const std::vector<int>& tokens);

// E[x_0 | evidence] under the component posterior.
Vec coupled_denoise_mean(const CoupledToyModel& model, const Vec& x, double t,
                         const std::vector<int>& tokens);

// J^T g with J = d coupled_denoise_mean / d x at fixed tokens.
Vec coupled_denoise_vjp(const CoupledToyModel& model, const Vec& x, double t,
                        const std::vector<int>& tokens, const Vec& g);

// Draws (component, tokens, x) from the joint model.
struct CoupledSample {
  int component = 0;
  std::vector<int> tokens;
  Vec x;
};
CoupledSample coupled_sample(const CoupledToyModel& model, Rng& rng);

class CoupledDenoiser final : public Denoiser {
 public:
  explicit CoupledDenoiser(CoupledToyModel model);

  DenoiserOutput denoise(const ContinuousState& x, double t,
                         const SequenceState& seq, double r) const override;
  Vocabulary vocabulary() const override { return Vocabulary{model_.V}; }
  int sequence_length() const override { return model_.L; }
  int coord_dim() const override { return model_.dim(); }

  const CoupledToyModel& model() const { return model_; }

 private:
  CoupledToyModel model_;
};

}  // namespace mmdiff::denoise
