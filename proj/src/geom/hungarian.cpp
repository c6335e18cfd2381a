#include "mmdiff/geom/hungarian.hpp"

#include <cmath>
#include <limits>

#include "mmdiff/core/error.hpp"

namespace mmdiff::geom {

// Shortest-augmenting-path formulation with row/column potentials (the
// Jonker-Volgenant variant of the Hungarian method), O(n^3).
Assignment hungarian(const Mat& cost) {
  const int n = static_cast<int>(cost.rows());
  if (cost.cols() != n) throw DomainError("hungarian: matrix must be square");
  if (n == 0) throw DomainError("hungarian: empty matrix");
  if (!cost.allFinite())
    throw DomainError("hungarian: costs must be finite");

  const double inf = std::numeric_limits<double>::infinity();
  // 1-based with a virtual row/column 0.
  std::vector<double> u(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<double> v(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<int> match(static_cast<std::size_t>(n) + 1, 0);  // column -> row
  std::vector<int> way(static_cast<std::size_t>(n) + 1, 0);

  for (int i = 1; i <= n; ++i) {
    match[0] = i;
    int j0 = 0;
    std::vector<double> minv(static_cast<std::size_t>(n) + 1, inf);
    std::vector<char> used(static_cast<std::size_t>(n) + 1, 0);
    do {
      used[static_cast<std::size_t>(j0)] = 1;
      const int i0 = match[static_cast<std::size_t>(j0)];
      double delta = inf;
      int j1 = -1;
      for (int j = 1; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[static_cast<std::size_t>(i0)] -
                           v[static_cast<std::size_t>(j)];
        if (cur < minv[static_cast<std::size_t>(j)]) {
          minv[static_cast<std::size_t>(j)] = cur;
          way[static_cast<std::size_t>(j)] = j0;
        }
        if (minv[static_cast<std::size_t>(j)] < delta) {
          delta = minv[static_cast<std::size_t>(j)];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[static_cast<std::size_t>(j)]) {
          u[static_cast<std::size_t>(match[static_cast<std::size_t>(j)])] += delta;
          v[static_cast<std::size_t>(j)] -= delta;
        } else {
          minv[static_cast<std::size_t>(j)] -= delta;
        }
      }
      j0 = j1;
    } while (match[static_cast<std::size_t>(j0)] != 0);
    // Augment along the alternating path.
    do {
      const int j1 = way[static_cast<std::size_t>(j0)];
      match[static_cast<std::size_t>(j0)] = match[static_cast<std::size_t>(j1)];
      j0 = j1;
    } while (j0);
  }

  Assignment result;
  result.permutation.assign(static_cast<std::size_t>(n), -1);
  for (int j = 1; j <= n; ++j)
    result.permutation[static_cast<std::size_t>(match[static_cast<std::size_t>(j)] - 1)] =
        j - 1;
  for (int i = 0; i < n; ++i)
    result.cost += cost(i, result.permutation[static_cast<std::size_t>(i)]);
  return result;
}

}  // namespace mmdiff::geom
