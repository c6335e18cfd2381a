#pragma once

#include "mmdiff/core/types.hpp"

namespace mmdiff::denoise {

// Contract shared by every denoiser: given coordinates at structure noise
// level t and tokens at sequence mask time r, predict the clean coordinates
// and per-position log-probabilities over real tokens (the mask token is
// never predicted; observed positions come back one-hot).
//
// Implementations must be pure and thread-safe: the same inputs always give
// the same outputs and concurrent calls may share one instance.
class Denoiser {
 public:
  virtual ~Denoiser() = default;

  virtual DenoiserOutput denoise(const ContinuousState& x, double t,
                                 const SequenceState& seq, double r) const = 0;

  virtual Vocabulary vocabulary() const = 0;
  virtual int sequence_length() const = 0;
  virtual int coord_dim() const = 0;
};

}  // namespace mmdiff::denoise
