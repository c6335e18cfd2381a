#pragma once

#include <Eigen/Core>
#include <algorithm>
#include <string>
#include <vector>

#include "mmdiff/core/error.hpp"

namespace mmdiff {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;
// Point sets are stored one row per point.
using Points = Eigen::Matrix<double, Eigen::Dynamic, 3>;

// Token alphabet: `size` real tokens indexed 0..size-1, plus a mask sentinel
// stored as the last index.
struct Vocabulary {
  int size = 0;

  int mask_id() const { return size; }
  bool is_mask(int token) const { return token == size; }
  bool valid(int token) const { return token >= 0 && token <= size; }
};

// A fixed-length token sequence; entries are real tokens or the mask id.
struct SequenceState {
  std::vector<int> tokens;

  int length() const { return static_cast<int>(tokens.size()); }
};

inline int count_masked(const SequenceState& s, const Vocabulary& vocab) {
  return static_cast<int>(
      std::count(s.tokens.begin(), s.tokens.end(), vocab.mask_id()));
}

inline double mask_fraction(const SequenceState& s, const Vocabulary& vocab) {
  if (s.tokens.empty()) return 0.0;
  return static_cast<double>(count_masked(s, vocab)) / s.length();
}

// Coordinate payload. Toy mode treats `coords` as an abstract vector in R^d;
// Atoms3D mode stores flattened xyz triples and unlocks rotation/geometry
// operations, which refuse toy-mode states.
enum class CoordMode { Toy, Atoms3D };

struct ContinuousState {
  Vec coords;
  CoordMode mode = CoordMode::Toy;

  int dim() const { return static_cast<int>(coords.size()); }
};

inline void require_3d(const ContinuousState& x, const char* where) {
  if (x.mode != CoordMode::Atoms3D || x.coords.size() % 3 != 0) {
    throw DomainError(std::string(where) +
                      ": operation requires 3D atom coordinates");
  }
}

// Joint sequence/structure state at unified time tau, with the per-modality
// noise coordinates it maps to: structure level t >= 0 and mask time r in
// [0,1].
struct JointState {
  SequenceState seq;
  ContinuousState structure;
  double tau = 0.0;
  double t = 0.0;
  double r = 0.0;
};

// Denoiser contract output: predicted clean coordinates plus per-position
// logits over the real-token alphabet. The mask column is conceptually -inf
// and is never materialized; logits are log-probabilities over real tokens.
struct DenoiserOutput {
  ContinuousState x0_hat;
  Mat logits;  // L x V, rows log-normalized over real tokens
};

// Large negative sentinel standing in for -inf logits; keeps arithmetic
// (softmax, tempering) finite.
inline constexpr double kNegInfLogit = -1e9;

}  // namespace mmdiff
