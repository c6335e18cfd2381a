#pragma once

#include <vector>

#include "mmdiff/core/rng.hpp"
#include "mmdiff/core/types.hpp"
#include "mmdiff/sample/config.hpp"

namespace mmdiff::sample {

// Per-position entropy-adaptive tempering: divides each row by
// tau = global(r) * (1 + r^gamma * beta * (h_max - H)/h_max), where H is the
// entropy of the row's softmax. Positive scaling, so the row argmax is
// preserved.
Mat temper_logits(const Mat& logits, double r, const TemperatureConfig& cfg);

// Max-shifted softmax of one logit row; kNegInfLogit entries underflow to 0.
Vec softmax_row(const Mat& logits, int row);

// One categorical draw per row from the row's softmax.
std::vector<int> sample_rows(const Mat& logits, Rng& rng);

// Unmask-and-remask reverse kernel: draws a candidate token per position,
// uniformly picks floor(kappa*L) positions to hold real tokens (masked ones
// take their candidate, already-unmasked ones keep their token), and remasks
// every other position. Exactly L - floor(kappa*L) masks remain.
SequenceState path_planning_step(const SequenceState& x_r, const Mat& logits,
                                 double kappa, const Vocabulary& vocab,
                                 Rng& rng);

// Standard ancestral kernel: each masked position unmasks with probability
// (alpha_next - alpha_prev)/(1 - alpha_prev), drawing its token from the
// position's softmax; unmasked positions are final.
SequenceState ancestral_unmask_step(const SequenceState& x_r,
                                    const Mat& logits, double alpha_prev,
                                    double alpha_next, const Vocabulary& vocab,
                                    Rng& rng);

}  // namespace mmdiff::sample
