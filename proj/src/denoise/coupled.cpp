#include "mmdiff/denoise/coupled.hpp"

#include <cmath>


#include "mmdiff/core/error.hpp"
#include "mmdiff/denoise/gmm.hpp"

namespace mmdiff::denoise {

namespace {



// Prior weights reweighted by the observed-token likelihood only (no
// Gaussian factor): w_c proportional to pi_c * prod_p p(token_p | c).
// Components excluded by the evidence get weight zero.
Vec token_prior_weights(const CoupledToyModel& model,
                        const std::vector<int>& tokens) {
  if (static_cast<int>(tokens.size()) != model.L)
    throw DomainError("coupled model: sequence length mismatch");
  const int K = model.components();
  Vec w = model.weights;
  for (int c = 0; c < K; ++c) {
    for (int p = 0; p < model.L; ++p) {
      const int tok = tokens[static_cast<std::size_t>(p)];
      if (tok < 0 || tok > model.V)
        throw DomainError("coupled model: token out of range");
      if (tok == model.V) continue;  // masked
      if (p == model.component_position) {
        if (tok != c) w[c] = 0.0;
      } else {
        w[c] *= model.tables[static_cast<std::size_t>(c)](p, tok);
      }
    }
  }
  if (w.maxCoeff() <= 0.0)
    throw ImpossibleEvidenceError(
        "coupled model: observed pattern has zero probability");
  return w;
}

// Mixture with the token evidence folded into the weights; the Gaussian
// helpers in gmm.cpp then supply every continuous quantity, and their
// responsibilities equal the coupled component posterior.
GaussianMixture effective_mixture(const CoupledToyModel& model,
                                  const std::vector<int>& tokens) {
  GaussianMixture mix;
  mix.weights = token_prior_weights(model, tokens);
  mix.means = model.means;
  mix.sigma0 = model.sigma0;
  return mix;
}

}  // namespace

void CoupledToyModel::validate() const {
  const int K = components();
  if (K < 1) throw ConfigError("coupled model: no components");
  if (means.rows() != K)
    throw ConfigError("coupled model: weights/means size mismatch");
  if (sigma0 <= 0.0) throw ConfigError("coupled model: sigma0 must be positive");
  if ((weights.array() <= 0.0).any())
    throw ConfigError("coupled model: weights must be positive");
  if (std::abs(weights.sum() - 1.0) > 1e-9)
    throw ConfigError("coupled model: weights must sum to 1");
  if (L < 1) throw ConfigError("coupled model: sequence length must be >= 1");
  if (V < 2) throw ConfigError("coupled model: vocabulary must be >= 2");
  if (K > V)
    throw ConfigError(
        "coupled model: components must fit in the vocabulary (K <= V)");
  if (component_position < 0 || component_position >= L)
    throw ConfigError("coupled model: component position out of range");
  if (static_cast<int>(tables.size()) != K)
    throw ConfigError("coupled model: one table per component required");
  for (const Mat& table : tables) {
    if (table.rows() != L || table.cols() != V)
      throw ConfigError("coupled model: table must be L x V");
    for (int p = 0; p < L; ++p) {
      if (p == component_position) continue;
      if ((table.row(p).array() < 0.0).any() ||
          std::abs(table.row(p).sum() - 1.0) > 1e-9)
        throw ConfigError("coupled model: table rows must be distributions");
    }
  }
}

double CoupledToyModel::token_prob(const std::vector<int>& tokens) const {
  if (static_cast<int>(tokens.size()) != L)
    throw DomainError("coupled model: sequence length mismatch");
  double total = 0.0;
  for (int c = 0; c < components(); ++c) {
    if (tokens[static_cast<std::size_t>(component_position)] != c) continue;
    double p = weights[c];
    for (int pos = 0; pos < L; ++pos) {
      if (pos == component_position) continue;
      const int tok = tokens[static_cast<std::size_t>(pos)];
      if (tok < 0 || tok >= V)
        throw DomainError("coupled model: token out of range");
      p *= tables[static_cast<std::size_t>(c)](pos, tok);
    }
    total += p;
  }
  return total;
}

Vec coupled_posterior(const CoupledToyModel& model, const Vec& x, double t,
                      const std::vector<int>& tokens) {
  return gm_responsibilities(effective_mixture(model, tokens), x, t);
}

Vec coupled_denoise_mean(const CoupledToyModel& model, const Vec& x, double t,
                         const std::vector<int>& tokens) {
  return gm_denoise(effective_mixture(model, tokens), x, t);
}

Vec coupled_denoise_vjp(const CoupledToyModel& model, const Vec& x, double t,
                        const std::vector<int>& tokens, const Vec& g) {
  return gm_denoise_vjp(effective_mixture(model, tokens), x, t, g);
}

CoupledSample coupled_sample(const CoupledToyModel& model, Rng& rng) {
  CoupledSample s;
  s.component = rng.categorical(model.weights);
  s.tokens.assign(static_cast<std::size_t>(model.L), 0);
  for (int p = 0; p < model.L; ++p) {
    if (p == model.component_position) {
      s.tokens[static_cast<std::size_t>(p)] = s.component;
    } else {
      s.tokens[static_cast<std::size_t>(p)] = rng.categorical(
          model.tables[static_cast<std::size_t>(s.component)].row(p).transpose());
    }
  }
  s.x = model.means.row(s.component).transpose();
  for (int i = 0; i < s.x.size(); ++i) s.x[i] += model.sigma0 * rng.normal();
  return s;
}

CoupledDenoiser::CoupledDenoiser(CoupledToyModel model)
    : model_(std::move(model)) {
  model_.validate();
}

DenoiserOutput CoupledDenoiser::denoise(const ContinuousState& x, double t,
                                        const SequenceState& seq,
                                        double) const {
  const Vec rho = coupled_posterior(model_, x.coords, t, seq.tokens);
  const double v = model_.sigma0 * model_.sigma0 + t * t;

  DenoiserOutput out;
  out.x0_hat.mode = x.mode;
  out.x0_hat.coords = Vec::Zero(x.coords.size());
  for (int c = 0; c < model_.components(); ++c) {
    const Vec mc = (model_.sigma0 * model_.sigma0 * x.coords +
                    t * t * model_.means.row(c).transpose()) /
                   v;
    out.x0_hat.coords += rho[c] * mc;
  }

  out.logits.resize(model_.L, model_.V);
  for (int p = 0; p < model_.L; ++p) {
    const int tok = seq.tokens[static_cast<std::size_t>(p)];
    if (tok < model_.V) {
      out.logits.row(p).setConstant(kNegInfLogit);
      out.logits(p, tok) = 0.0;
    } else if (p == model_.component_position) {
      out.logits.row(p).setConstant(kNegInfLogit);
      for (int c = 0; c < model_.components(); ++c)
        out.logits(p, c) = rho[c] > 0.0 ? std::log(rho[c]) : kNegInfLogit;
    } else {
      for (int v_tok = 0; v_tok < model_.V; ++v_tok) {
        double q = 0.0;
        for (int c = 0; c < model_.components(); ++c)
          q += rho[c] * model_.tables[static_cast<std::size_t>(c)](p, v_tok);
        out.logits(p, v_tok) = q > 0.0 ? std::log(q) : kNegInfLogit;
      }
    }
  }
  return out;
}

}  // namespace mmdiff::denoise
