#include "mmdiff/geom/motif.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "mmdiff/core/error.hpp"
#include "mmdiff/geom/hungarian.hpp"

namespace mmdiff::geom {

namespace {

constexpr int kIterations = 3;

Points centered(const Points& pts) {
  return pts.rowwise() - pts.colwise().mean();
}

double chem_distance(const MotifFrame& A, const MotifFrame& B, int i, int j) {
  if (A.types[static_cast<std::size_t>(i)] == B.types[static_cast<std::size_t>(j)])
    return 0.0;
  if (A.classes[static_cast<std::size_t>(i)] ==
      B.classes[static_cast<std::size_t>(j)])
    return 0.5;
  return 1.0;
}

Points permuted(const Points& pts, const std::vector<int>& perm) {
  Points out(pts.rows(), 3);
  for (int i = 0; i < pts.rows(); ++i)
    out.row(i) = pts.row(perm[static_cast<std::size_t>(i)]);
  return out;
}

// Alternates Hungarian assignment with Kabsch alignment.  `chem` adds the
// chemical term (scaled by beta, distances scaled by alpha) to the
// assignment cost.  Returns the terminal assignment and the alignment of B
// onto A computed on it.
AlignmentResult alternate(const MotifFrame& A, const MotifFrame& B,
                          bool chem, double alpha, double beta) {
  const int K = A.size();
  const Points Ac = centered(A.ca);
  const Points Bc = centered(B.ca);

  AlignmentResult align;  // transforms B onto A; starts as identity
  std::vector<int> perm;
  for (int it = 0; it < kIterations; ++it) {
    const Points Bt = align.apply(Bc);
    Mat cost(K, K);
    for (int i = 0; i < K; ++i)
      for (int j = 0; j < K; ++j) {
        const double d2 = (Ac.row(i) - Bt.row(j)).squaredNorm();
        cost(i, j) = chem ? alpha * d2 + beta * chem_distance(A, B, i, j)
                          : d2;
      }
    perm = hungarian(cost).permutation;
    align = kabsch(permuted(Bc, perm), Ac);
  }
  align.permutation = perm;
  return align;
}

Mat internal_distances(const Points& pts) {
  const int K = static_cast<int>(pts.rows());
  Mat D(K, K);
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < K; ++j)
      D(i, j) = (pts.row(i) - pts.row(j)).norm();
  return D;
}

// Alignment-based metrics need K >= 3; the rotation-free Frobenius metric
// only needs a distance pair (K >= 2).
void check_pair(const MotifFrame& A, const MotifFrame& B, int min_k) {
  A.validate();
  B.validate();
  if (A.size() != B.size())
    throw DomainError("motif metrics: frames must have equal residue count");
  if (A.size() < min_k)
    throw DomainError("motif metrics: need at least " + std::to_string(min_k) +
                      " residues");
}

}  // namespace

void MotifFrame::validate() const {
  if (size() < 1) throw DomainError("motif frame: empty frame");
  if (static_cast<int>(types.size()) != size() ||
      static_cast<int>(classes.size()) != size())
    throw DomainError("motif frame: positions/types/classes size mismatch");
  if (!ca.allFinite())
    throw DomainError("motif frame: positions must be finite");
}

MotifFrame MotifFrame::from_types(Points positions,
                                  std::vector<int> residue_types) {
  MotifFrame frame;
  frame.ca = std::move(positions);
  frame.classes.reserve(residue_types.size());
  for (int t : residue_types) frame.classes.push_back(protein::chem_class(t));
  frame.types = std::move(residue_types);
  return frame;
}

AlignmentResult motif_rmsd(const MotifFrame& A, const MotifFrame& B) {
  check_pair(A, B, 3);
  return alternate(A, B, /*chem=*/false, 1.0, 0.0);
}

double chem_cost(const MotifFrame& A, const MotifFrame& B, double alpha,
                 double beta) {
  check_pair(A, B, 3);
  const AlignmentResult align = alternate(A, B, /*chem=*/true, alpha, beta);
  const Points Ac = centered(A.ca);
  const Points Bt = align.apply(permuted(centered(B.ca), align.permutation));
  double total = 0.0;
  for (int i = 0; i < A.size(); ++i) {
    const double d = (Ac.row(i) - Bt.row(i)).norm();
    total += alpha * d +
             beta * chem_distance(A, B, i,
                                  align.permutation[static_cast<std::size_t>(i)]);
  }
  return total / A.size();
}

double lddt(const MotifFrame& A, const MotifFrame& B) {
  check_pair(A, B, 3);
  const std::vector<int> perm = motif_rmsd(A, B).permutation;
  const Mat DA = internal_distances(A.ca);
  const Mat DB = internal_distances(B.ca);
  const double thresholds[4] = {0.5, 1.0, 2.0, 4.0};
  const int K = A.size();
  int preserved = 0;
  int pairs = 0;
  for (int i = 0; i < K; ++i)
    for (int j = i + 1; j < K; ++j) {
      const double diff = std::abs(
          DA(i, j) - DB(perm[static_cast<std::size_t>(i)],
                        perm[static_cast<std::size_t>(j)]));
      ++pairs;
      for (double thr : thresholds)
        if (diff < thr) ++preserved;
    }
  return static_cast<double>(preserved) / (4.0 * pairs);
}

double frobenius_distance(const MotifFrame& A, const MotifFrame& B) {
  check_pair(A, B, 2);
  const Mat DA = internal_distances(A.ca);
  const Mat DB = internal_distances(B.ca);
  const int K = A.size();

  // The first assignment has no permutation to align the profile columns,
  // so it is seeded from sorted distance profiles, which do not depend on
  // residue ordering; this keeps the metric invariant under relabeling.
  Mat sa(K, K), sb(K, K);
  for (int i = 0; i < K; ++i) {
    Vec row = DA.row(i);
    std::sort(row.data(), row.data() + K);
    sa.row(i) = row;
    row = DB.row(i);
    std::sort(row.data(), row.data() + K);
    sb.row(i) = row;
  }
  Mat cost(K, K);
  for (int i = 0; i < K; ++i)
    for (int j = 0; j < K; ++j)
      cost(i, j) = (sa.row(i) - sb.row(j)).squaredNorm();
  std::vector<int> perm = hungarian(cost).permutation;

  for (int it = 0; it < kIterations; ++it) {
    for (int i = 0; i < K; ++i)
      for (int j = 0; j < K; ++j) {
        double c = 0.0;
        for (int m = 0; m < K; ++m) {
          const double diff =
              DA(i, m) - DB(j, perm[static_cast<std::size_t>(m)]);
          c += diff * diff;
        }
        cost(i, j) = c;
      }
    perm = hungarian(cost).permutation;
  }

  double sum = 0.0;
  for (int i = 0; i < K; ++i)
    for (int j = i + 1; j < K; ++j) {
      const double diff = DA(i, j) - DB(perm[static_cast<std::size_t>(i)],
                                        perm[static_cast<std::size_t>(j)]);
      sum += diff * diff;
    }
  return std::sqrt(sum / (0.5 * K * (K - 1)));
}

double motif_distance(const MotifFrame& A, const MotifFrame& B,
                      MotifMetric metric) {
  switch (metric) {
    case MotifMetric::Rmsd: return motif_rmsd(A, B).rmsd;
    case MotifMetric::ChemCost: return chem_cost(A, B);
    case MotifMetric::OneMinusLddt: return 1.0 - lddt(A, B);
    case MotifMetric::Frobenius: return frobenius_distance(A, B);
  }
  throw DomainError("motif metrics: unknown metric");
}

std::vector<double> nn_diversity(const std::vector<MotifFrame>& motifs,
                                 MotifMetric metric) {
  const int n = static_cast<int>(motifs.size());
  if (n < 2)
    throw DomainError("nearest-neighbour diversity: need at least 2 motifs");
  std::vector<double> nn(static_cast<std::size_t>(n),
                         std::numeric_limits<double>::infinity());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double d = motif_distance(motifs[static_cast<std::size_t>(i)],
                                      motifs[static_cast<std::size_t>(j)],
                                      metric);
      nn[static_cast<std::size_t>(i)] = std::min(nn[static_cast<std::size_t>(i)], d);
      nn[static_cast<std::size_t>(j)] = std::min(nn[static_cast<std::size_t>(j)], d);
    }
  return nn;
}

std::vector<int> complete_linkage_labels(const Mat& dist, double threshold) {
  const int n = static_cast<int>(dist.rows());
  if (n == 0) throw DomainError("clustering: empty distance matrix");
  if (dist.cols() != n) throw DomainError("clustering: matrix must be square");

  std::vector<std::vector<int>> clusters;
  for (int i = 0; i < n; ++i) clusters.push_back({i});

  auto linkage = [&](const std::vector<int>& a, const std::vector<int>& b) {
    double worst = 0.0;
    for (int i : a)
      for (int j : b) worst = std::max(worst, dist(i, j));
    return worst;
  };

  for (;;) {
    double best = std::numeric_limits<double>::infinity();
    int bi = -1, bj = -1;
    for (std::size_t i = 0; i < clusters.size(); ++i)
      for (std::size_t j = i + 1; j < clusters.size(); ++j) {
        const double d = linkage(clusters[i], clusters[j]);
        if (d < best) {
          best = d;
          bi = static_cast<int>(i);
          bj = static_cast<int>(j);
        }
      }
    if (bi < 0 || best > threshold) break;
    clusters[static_cast<std::size_t>(bi)].insert(
        clusters[static_cast<std::size_t>(bi)].end(),
        clusters[static_cast<std::size_t>(bj)].begin(),
        clusters[static_cast<std::size_t>(bj)].end());
    clusters.erase(clusters.begin() + bj);
  }

  std::vector<int> labels(static_cast<std::size_t>(n), -1);
  for (std::size_t c = 0; c < clusters.size(); ++c)
    for (int i : clusters[c]) labels[static_cast<std::size_t>(i)] = static_cast<int>(c);
  return labels;
}

double cluster_ratio(const std::vector<MotifFrame>& motifs, double threshold) {
  const int n = static_cast<int>(motifs.size());
  if (n == 0) throw DomainError("cluster ratio: empty motif set");
  Mat dist = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double d = motif_rmsd(motifs[static_cast<std::size_t>(i)],
                                  motifs[static_cast<std::size_t>(j)])
                           .rmsd;
      dist(i, j) = dist(j, i) = d;
    }
  const std::vector<int> labels = complete_linkage_labels(dist, threshold);
  int n_clusters = 0;
  for (int l : labels) n_clusters = std::max(n_clusters, l + 1);
  return static_cast<double>(n_clusters) / n;
}

}  // namespace mmdiff::geom
