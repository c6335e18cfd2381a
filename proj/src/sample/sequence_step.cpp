#include "mmdiff/sample/sequence_step.hpp"

#include <cmath>

#include "mmdiff/core/error.hpp"

namespace mmdiff::sample {

void TemperatureConfig::validate() const {
  if (tau_high <= 0.0 || tau_low <= 0.0)
    throw ConfigError("temperature: global temperatures must be > 0");
  if (h_max <= 0.0) throw ConfigError("temperature: h_max must be > 0");
}

TemperatureConfig TemperatureConfig::from_config(const Config& cfg) {
  TemperatureConfig out;
  const std::string s = "temperature";
  out.tau_high = cfg.get_double_or(s, "tau_high", out.tau_high);
  out.tau_low = cfg.get_double_or(s, "tau_low", out.tau_low);
  out.r_switch = cfg.get_double_or(s, "r_switch", out.r_switch);
  out.beta = cfg.get_double_or(s, "beta", out.beta);
  out.gamma = cfg.get_double_or(s, "gamma", out.gamma);
  out.h_max = cfg.get_double_or(s, "h_max", out.h_max);
  out.validate();
  return out;
}

Vec softmax_row(const Mat& logits, int row) {
  Vec p = logits.row(row).transpose();
  p.array() -= p.maxCoeff();
  p = p.array().exp();
  p /= p.sum();
  return p;
}

namespace {

double entropy(const Vec& p) {
  double h = 0.0;
  for (int v = 0; v < p.size(); ++v)
    if (p(v) > 0.0) h -= p(v) * std::log(p(v));
  return h;
}

void check_shape(const SequenceState& x_r, const Mat& logits,
                 const Vocabulary& vocab, const char* where) {
  if (logits.rows() != x_r.length() || logits.cols() != vocab.size)
    throw DomainError(std::string(where) + ": logit shape mismatch");
}

}  // namespace

Mat temper_logits(const Mat& logits, double r, const TemperatureConfig& cfg) {
  cfg.validate();
  const double global = cfg.global_at(r);
  const double ramp = std::pow(r, cfg.gamma);
  Mat out = logits;
  for (int l = 0; l < logits.rows(); ++l) {
    const double h = entropy(softmax_row(logits, l));
    const double tau =
        global * (1.0 + ramp * cfg.beta * (cfg.h_max - h) / cfg.h_max);
    out.row(l) /= tau;
  }
  return out;
}

std::vector<int> sample_rows(const Mat& logits, Rng& rng) {
  std::vector<int> draws(static_cast<std::size_t>(logits.rows()));
  for (int l = 0; l < logits.rows(); ++l)
    draws[static_cast<std::size_t>(l)] = rng.categorical(softmax_row(logits, l));
  return draws;
}

SequenceState path_planning_step(const SequenceState& x_r, const Mat& logits,
                                 double kappa, const Vocabulary& vocab,
                                 Rng& rng) {
  if (kappa < 0.0 || kappa > 1.0)
    throw DomainError("path planning: kappa must lie in [0, 1]");
  check_shape(x_r, logits, vocab, "path planning");
  const int L = x_r.length();
  const int n_unmask = kappa >= 1.0 ? L : static_cast<int>(kappa * L);

  const std::vector<int> z = sample_rows(logits, rng);
  const std::vector<int> chosen = rng.sample_without_replacement(L, n_unmask);

  SequenceState out;
  out.tokens.assign(static_cast<std::size_t>(L), vocab.mask_id());
  for (int j : chosen) {
    const int cur = x_r.tokens[static_cast<std::size_t>(j)];
    out.tokens[static_cast<std::size_t>(j)] =
        vocab.is_mask(cur) ? z[static_cast<std::size_t>(j)] : cur;
  }
  return out;
}

SequenceState ancestral_unmask_step(const SequenceState& x_r,
                                    const Mat& logits, double alpha_prev,
                                    double alpha_next, const Vocabulary& vocab,
                                    Rng& rng) {
  if (alpha_next < alpha_prev)
    throw DomainError("ancestral unmask: alpha must not decrease");
  check_shape(x_r, logits, vocab, "ancestral unmask");
  const double remaining = 1.0 - alpha_prev;
  const double p_unmask =
      remaining <= 0.0
          ? 1.0
          : std::min(1.0, (alpha_next - alpha_prev) / remaining);

  SequenceState out = x_r;
  for (int j = 0; j < x_r.length(); ++j) {
    if (!vocab.is_mask(x_r.tokens[static_cast<std::size_t>(j)])) continue;
    if (rng.uniform() < p_unmask)
      out.tokens[static_cast<std::size_t>(j)] =
          rng.categorical(softmax_row(logits, j));
  }
  return out;
}

}  // namespace mmdiff::sample
