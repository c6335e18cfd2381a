#pragma once

#include "mmdiff/core/rng.hpp"
#include "mmdiff/core/schedule.hpp"
#include "mmdiff/core/types.hpp"

namespace mmdiff {

// Forward masking process: each token is independently replaced by the mask
// sentinel with probability 1 - alpha(r). Tokens already masked stay masked,
// so composing corruptions never unmasks.
SequenceState corrupt_discrete(const SequenceState& x0, double r,
                               const Vocabulary& vocab,
                               const MaskSchedule& schedule, Rng& rng);

// Forward bridge from mask time r_from to the more-corrupted r_to > r_from:
// each currently unmasked token is masked with probability
// 1 - alpha(r_to)/alpha(r_from), so a state at level r_from lands exactly at
// level r_to in distribution. Used to build a more-noised guidance condition
// from a partially unmasked sequence.
SequenceState corrupt_discrete_bridge(const SequenceState& x_r, double r_from,
                                      double r_to, const Vocabulary& vocab,
                                      const MaskSchedule& schedule, Rng& rng);

// Forward coordinate noising at level t: x0 + t * eps, eps iid standard
// normal per coordinate.
ContinuousState corrupt_continuous(const ContinuousState& x0, double t,
                                   Rng& rng);

}  // namespace mmdiff
