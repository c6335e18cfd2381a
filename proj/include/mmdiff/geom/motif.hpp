#pragma once

#include <vector>

#include "mmdiff/core/protein.hpp"
#include "mmdiff/core/types.hpp"
#include "mmdiff/geom/kabsch.hpp"

namespace mmdiff::geom {

// A K-residue motif: C-alpha positions plus residue identities.  Chemical
// classes default to the residue-type table but may be overridden.
struct MotifFrame {
  Points ca;                // K x 3
  std::vector<int> types;   // residue tokens
  std::vector<protein::ChemClass> classes;

  int size() const { return static_cast<int>(ca.rows()); }
  void validate() const;

  static MotifFrame from_types(Points positions, std::vector<int> residue_types);
};

// Assignment-based RMSD: center both frames, then alternate Hungarian
// matching on squared distances with Kabsch alignment on the matched pairs
// for three iterations; reports the RMSD under the terminal assignment.
// The terminal assignment is stored in the result's permutation.
AlignmentResult motif_rmsd(const MotifFrame& A, const MotifFrame& B);

// Combined spatial-chemical distance: the assignment is solved on
// alpha*d^2 + beta*D_chem (D_chem = 0 identical type, 0.5 same class,
// 1 otherwise), alternated with Kabsch; the report is the mean of
// alpha*d + beta*D_chem (unsquared distance) under the final matching.
double chem_cost(const MotifFrame& A, const MotifFrame& B, double alpha = 1.0,
                 double beta = 5.0);

// Fraction of internal pairwise distances preserved within thresholds
// {0.5, 1, 2, 4} A under the spatial assignment from motif_rmsd.
double lddt(const MotifFrame& A, const MotifFrame& B);

// Rotation-free comparison of internal C-alpha distance matrices under a
// permutation refined by three Hungarian iterations:
// sqrt( (1/C(K,2)) * sum_{i<j} (D_A(i,j) - D_B(perm(i),perm(j)))^2 ).
double frobenius_distance(const MotifFrame& A, const MotifFrame& B);

enum class MotifMetric { Rmsd, ChemCost, OneMinusLddt, Frobenius };

double motif_distance(const MotifFrame& A, const MotifFrame& B,
                      MotifMetric metric);

// Nearest-neighbour distance of each motif to the rest of the set.
std::vector<double> nn_diversity(const std::vector<MotifFrame>& motifs,
                                 MotifMetric metric);

// Complete-linkage agglomerative clustering on pairwise motif RMSD;
// returns n_clusters / n_motifs.
double cluster_ratio(const std::vector<MotifFrame>& motifs,
                     double threshold = 2.0);

// Cluster labels from complete-linkage clustering of an explicit distance
// matrix (used by cluster_ratio and by design-selection caps).
std::vector<int> complete_linkage_labels(const Mat& dist, double threshold);

}  // namespace mmdiff::geom
