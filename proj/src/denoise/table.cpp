#include "mmdiff/denoise/table.hpp"

#include <cmath>

#include "mmdiff/core/error.hpp"

namespace mmdiff::denoise {

namespace {

constexpr std::int64_t kMemoPatternLimit = 100000;

Mat logits_from_conditionals(const Mat& cond, const std::vector<int>& tokens,
                             int V) {
  const int L = static_cast<int>(tokens.size());
  Mat logits(L, V);
  for (int i = 0; i < L; ++i) {
    if (tokens[i] < V) {
      logits.row(i).setConstant(kNegInfLogit);
      logits(i, tokens[i]) = 0.0;
    } else {
      for (int v = 0; v < V; ++v)
        logits(i, v) =
            cond(i, v) > 0.0 ? std::log(cond(i, v)) : kNegInfLogit;
    }
  }
  return logits;
}

}  // namespace

std::int64_t DiscreteTable::states() const {
  std::int64_t n = 1;
  for (int i = 0; i < L; ++i) n *= V;
  return n;
}

std::int64_t DiscreteTable::index_of(const std::vector<int>& tokens) const {
  if (static_cast<int>(tokens.size()) != L)
    throw DomainError("discrete table: sequence length mismatch");
  std::int64_t idx = 0;
  for (int i = 0; i < L; ++i) {
    if (tokens[i] < 0 || tokens[i] >= V)
      throw DomainError("discrete table: token out of range");
    idx = idx * V + tokens[i];
  }
  return idx;
}

std::vector<int> DiscreteTable::tokens_of(std::int64_t index) const {
  std::vector<int> tokens(static_cast<std::size_t>(L));
  for (int i = L - 1; i >= 0; --i) {
    tokens[static_cast<std::size_t>(i)] = static_cast<int>(index % V);
    index /= V;
  }
  return tokens;
}

double DiscreteTable::prob(const std::vector<int>& tokens) const {
  return probs[index_of(tokens)];
}

void DiscreteTable::validate() const {
  if (L < 1 || L > 8)
    throw ConfigError("discrete table: length must be in [1, 8]");
  if (V < 2 || V > 6)
    throw ConfigError("discrete table: vocabulary must be in [2, 6]");
  if (probs.size() != states())
    throw ConfigError("discrete table: wrong number of entries");
  if ((probs.array() < 0.0).any())
    throw ConfigError("discrete table: negative probability");
  if (std::abs(probs.sum() - 1.0) > 1e-9)
    throw ConfigError("discrete table: probabilities must sum to 1");
}

TableDenoiser::TableDenoiser(DiscreteTable table) : table_(std::move(table)) {
  table_.validate();
  std::int64_t n_patterns = 1;
  for (int i = 0; i < table_.L; ++i) {
    n_patterns *= table_.V + 1;
    if (n_patterns > kMemoPatternLimit) break;
  }
  if (n_patterns <= kMemoPatternLimit) {
    memoized_ = true;
    memo_.resize(static_cast<std::size_t>(n_patterns));
    feasible_.assign(static_cast<std::size_t>(n_patterns), 0);
    std::vector<int> tokens(static_cast<std::size_t>(table_.L), 0);
    for (std::int64_t p = 0; p < n_patterns; ++p) {
      std::int64_t rem = p;
      for (int i = table_.L - 1; i >= 0; --i) {
        tokens[static_cast<std::size_t>(i)] =
            static_cast<int>(rem % (table_.V + 1));
        rem /= table_.V + 1;
      }
      try {
        memo_[static_cast<std::size_t>(p)] = compute_logits(tokens);
        feasible_[static_cast<std::size_t>(p)] = 1;
      } catch (const ImpossibleEvidenceError&) {
        feasible_[static_cast<std::size_t>(p)] = 0;
      }
    }
  }
}

std::int64_t TableDenoiser::pattern_index(
    const std::vector<int>& tokens) const {
  std::int64_t idx = 0;
  for (int i = 0; i < table_.L; ++i) {
    const int tok = tokens[static_cast<std::size_t>(i)];
    if (tok < 0 || tok > table_.V)
      throw DomainError("discrete table: token out of range");
    idx = idx * (table_.V + 1) + tok;
  }
  return idx;
}

Mat TableDenoiser::compute_logits(const std::vector<int>& tokens) const {
  const int L = table_.L;
  const int V = table_.V;
  Mat cond = Mat::Zero(L, V);
  double total = 0.0;
  const std::int64_t n = table_.states();
  for (std::int64_t idx = 0; idx < n; ++idx) {
    const double p = table_.probs[idx];
    if (p == 0.0) continue;
    // Decode and test consistency with the observed tokens.
    std::int64_t rem = idx;
    int decoded[8];
    for (int i = L - 1; i >= 0; --i) {
      decoded[i] = static_cast<int>(rem % V);
      rem /= V;
    }
    bool ok = true;
    for (int i = 0; i < L && ok; ++i) {
      const int obs = tokens[static_cast<std::size_t>(i)];
      if (obs < V && decoded[i] != obs) ok = false;
    }
    if (!ok) continue;
    total += p;
    for (int i = 0; i < L; ++i) cond(i, decoded[i]) += p;
  }
  if (total <= 0.0)
    throw ImpossibleEvidenceError(
        "discrete table: observed pattern has zero probability");
  cond /= total;
  return logits_from_conditionals(cond, tokens, V);
}

Mat TableDenoiser::conditional_logits(const SequenceState& seq) const {
  if (static_cast<int>(seq.tokens.size()) != table_.L)
    throw DomainError("discrete table: sequence length mismatch");
  if (memoized_) {
    const std::int64_t p = pattern_index(seq.tokens);
    if (!feasible_[static_cast<std::size_t>(p)])
      throw ImpossibleEvidenceError(
          "discrete table: observed pattern has zero probability");
    return memo_[static_cast<std::size_t>(p)];
  }
  return compute_logits(seq.tokens);
}

DenoiserOutput TableDenoiser::denoise(const ContinuousState& x, double,
                                      const SequenceState& seq, double) const {
  if (x.coords.size() != 0)
    throw DomainError("table denoiser has no continuous modality");
  DenoiserOutput out;
  out.x0_hat = x;
  out.logits = conditional_logits(seq);
  return out;
}

}  // namespace mmdiff::denoise
