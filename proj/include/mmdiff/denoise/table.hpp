#pragma once

#include <cstdint>
#include <vector>

#include "mmdiff/core/types.hpp"
#include "mmdiff/denoise/denoiser.hpp"

namespace mmdiff::denoise {

// Explicit joint distribution over V^L token strings, small enough to
// enumerate.  Entries are stored lexicographically with position 0 as the
// most significant digit.
struct DiscreteTable {
  int L = 0;
  int V = 0;
  Vec probs;  // V^L entries, non-negative, sums to 1

  std::int64_t states() const;
  std::int64_t index_of(const std::vector<int>& tokens) const;
  std::vector<int> tokens_of(std::int64_t index) const;
  double prob(const std::vector<int>& tokens) const;
  void validate() const;
};

// Exact conditional denoiser: for each masked position the logits encode
// p(x0 = v | observed tokens) by full-joint marginalization; observed
// positions return one-hot rows.  When the observed-pattern space (V+1)^L is
// small the conditionals are precomputed for every pattern at construction,
// so later calls are table lookups and remain thread-safe.
class TableDenoiser final : public Denoiser {
 public:
  explicit TableDenoiser(DiscreteTable table);

  DenoiserOutput denoise(const ContinuousState& x, double t,
                         const SequenceState& seq, double r) const override;
  Vocabulary vocabulary() const override { return Vocabulary{table_.V}; }
  int sequence_length() const override { return table_.L; }
  int coord_dim() const override { return 0; }

  // Log-probability rows for the given partially masked sequence.
  Mat conditional_logits(const SequenceState& seq) const;

  const DiscreteTable& table() const { return table_; }

 private:
  Mat compute_logits(const std::vector<int>& tokens) const;
  std::int64_t pattern_index(const std::vector<int>& tokens) const;

  DiscreteTable table_;
  bool memoized_ = false;
  std::vector<Mat> memo_;             // logits per observed pattern
  std::vector<std::uint8_t> feasible_;  // pattern has positive marginal
};

}  // namespace mmdiff::denoise
