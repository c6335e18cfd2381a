#pragma once

#include <vector>

#include "mmdiff/core/types.hpp"

namespace mmdiff::geom {

struct AlignmentResult {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();
  double rmsd = 0.0;
  std::vector<int> permutation;  // filled by assignment-based metrics

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
  Points apply(const Points& pts) const;
};

// Least-squares rigid superposition: finds the proper rotation R and
// translation s minimizing sum_i w_i ||R p_i + s - q_i||^2 (reflections are
// corrected via the determinant sign fix).  Weights default to uniform.
//
// Throws DegenerateError when the weighted covariance has rank < 2, where
// the optimal rotation is not determined.
AlignmentResult kabsch(const Points& P, const Points& Q,
                       const Vec* weights = nullptr);

}  // namespace mmdiff::geom
