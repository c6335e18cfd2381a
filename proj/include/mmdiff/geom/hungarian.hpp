#pragma once

#include <vector>

#include "mmdiff/core/types.hpp"

namespace mmdiff::geom {

struct Assignment {
  std::vector<int> permutation;  // permutation[row] = assigned column
  double cost = 0.0;
};

// Optimal linear-sum assignment on a square cost matrix (O(n^3) potentials
// algorithm).  Throws DomainError on non-square or non-finite input.
Assignment hungarian(const Mat& cost);

}  // namespace mmdiff::geom
