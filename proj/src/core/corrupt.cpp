#include "mmdiff/core/corrupt.hpp"

#include "mmdiff/core/error.hpp"

namespace mmdiff {

SequenceState corrupt_discrete(const SequenceState& x0, double r,
                               const Vocabulary& vocab,
                               const MaskSchedule& schedule, Rng& rng) {
  const double keep = alpha(schedule, r);
  SequenceState out = x0;
  for (int& token : out.tokens) {
    if (vocab.is_mask(token)) continue;
    if (rng.uniform() >= keep) token = vocab.mask_id();
  }
  return out;
}

SequenceState corrupt_discrete_bridge(const SequenceState& x_r, double r_from,
                                      double r_to, const Vocabulary& vocab,
                                      const MaskSchedule& schedule, Rng& rng) {
  if (r_to < r_from)
    throw DomainError("corrupt_discrete_bridge: target time must be >= source");
  const double a_from = alpha(schedule, r_from);
  const double a_to = alpha(schedule, r_to);
  if (a_from <= 0.0) return x_r;  // already fully masked in distribution
  const double keep = a_to / a_from;
  SequenceState out = x_r;
  for (int& token : out.tokens) {
    if (vocab.is_mask(token)) continue;
    if (rng.uniform() >= keep) token = vocab.mask_id();
  }
  return out;
}

ContinuousState corrupt_continuous(const ContinuousState& x0, double t,
                                   Rng& rng) {
  if (t < 0.0) throw DomainError("corrupt_continuous: noise level t must be >= 0");
  ContinuousState out = x0;
  if (t == 0.0) return out;
  for (int i = 0; i < out.coords.size(); ++i) out.coords[i] += t * rng.normal();
  return out;
}

}  // namespace mmdiff
