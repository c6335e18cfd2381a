#include "mmdiff/denoise/gmm.hpp"

#include <cmath>

#include "mmdiff/core/error.hpp"

namespace mmdiff::denoise {

namespace {

constexpr double kLog2Pi = 1.8378770664093454836;

// Per-component log N(x; mu_k, v I) plus log weight, returned as a vector.
Vec component_log_joint(const GaussianMixture& model, const Vec& x, double t) {
  const double v = model.sigma0 * model.sigma0 + t * t;
  const int K = model.components();
  const int d = model.dim();
  Vec out(K);
  for (int k = 0; k < K; ++k) {
    const double sq = (x - model.means.row(k).transpose()).squaredNorm();
    out[k] = std::log(model.weights[k]) -
             0.5 * (d * (kLog2Pi + std::log(v)) + sq / v);
  }
  return out;
}

double log_sum_exp(const Vec& v) {
  const double m = v.maxCoeff();
  return m + std::log((v.array() - m).exp().sum());
}

void check_input(const GaussianMixture& model, const Vec& x, double t) {
  if (x.size() != model.dim())
    throw DomainError("gaussian mixture: input dimension mismatch");
  if (t < 0.0) throw DomainError("gaussian mixture: noise level must be >= 0");
}

}  // namespace

void GaussianMixture::validate() const {
  if (components() < 1) throw ConfigError("gaussian mixture: no components");
  if (means.rows() != components())
    throw ConfigError("gaussian mixture: weights/means size mismatch");
  if (sigma0 <= 0.0)
    throw ConfigError("gaussian mixture: sigma0 must be positive");
  if ((weights.array() <= 0.0).any())
    throw ConfigError("gaussian mixture: weights must be positive");
  if (std::abs(weights.sum() - 1.0) > 1e-9)
    throw ConfigError("gaussian mixture: weights must sum to 1");
}

Vec gm_responsibilities(const GaussianMixture& model, const Vec& x, double t) {
  check_input(model, x, t);
  const Vec lj = component_log_joint(model, x, t);
  const double lz = log_sum_exp(lj);
  return (lj.array() - lz).exp();
}

Vec gm_denoise(const GaussianMixture& model, const Vec& x, double t) {
  check_input(model, x, t);
  const double v = model.sigma0 * model.sigma0 + t * t;
  const Vec rho = gm_responsibilities(model, x, t);
  Vec out = Vec::Zero(x.size());
  for (int k = 0; k < model.components(); ++k) {
    const Vec mk = (model.sigma0 * model.sigma0 * x +
                    t * t * model.means.row(k).transpose()) /
                   v;
    out += rho[k] * mk;
  }
  return out;
}

double gm_log_marginal(const GaussianMixture& model, const Vec& x, double t) {
  check_input(model, x, t);
  return log_sum_exp(component_log_joint(model, x, t));
}

Vec gm_score(const GaussianMixture& model, const Vec& x, double t) {
  check_input(model, x, t);
  if (t <= 0.0) throw DomainError("gaussian mixture: score needs t > 0");
  return (gm_denoise(model, x, t) - x) / (t * t);
}

Vec gm_denoise_vjp(const GaussianMixture& model, const Vec& x, double t,
                   const Vec& g) {
  check_input(model, x, t);
  if (g.size() != x.size())
    throw DomainError("gaussian mixture: cotangent dimension mismatch");
  const double s0sq = model.sigma0 * model.sigma0;
  const double v = s0sq + t * t;
  const Vec rho = gm_responsibilities(model, x, t);
  Vec mu_bar = Vec::Zero(x.size());
  for (int k = 0; k < model.components(); ++k)
    mu_bar += rho[k] * model.means.row(k).transpose();
  Vec out = (s0sq / v) * g;
  for (int k = 0; k < model.components(); ++k) {
    const Vec mk = (s0sq * x + t * t * model.means.row(k).transpose()) / v;
    const Vec grad_rho = rho[k] * (model.means.row(k).transpose() - mu_bar) / v;
    out += grad_rho * mk.dot(g);
  }
  return out;
}

Vec gm_sample(const GaussianMixture& model, Rng& rng) {
  const int k = rng.categorical(model.weights);
  Vec x = model.means.row(k).transpose();
  for (int i = 0; i < x.size(); ++i) x[i] += model.sigma0 * rng.normal();
  return x;
}

GmmDenoiser::GmmDenoiser(GaussianMixture model) : model_(std::move(model)) {
  model_.validate();
}

DenoiserOutput GmmDenoiser::denoise(const ContinuousState& x, double t,
                                    const SequenceState& seq, double) const {
  if (!seq.tokens.empty())
    throw DomainError("gaussian mixture denoiser has no sequence modality");
  DenoiserOutput out;
  out.x0_hat.mode = x.mode;
  out.x0_hat.coords = gm_denoise(model_, x.coords, t);
  out.logits.resize(0, vocabulary().size);
  return out;
}

}  // namespace mmdiff::denoise
