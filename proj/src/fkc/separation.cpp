#include "mmdiff/fkc/separation.hpp"

#include <algorithm>
#include <limits>

#include "mmdiff/core/error.hpp"
#include "mmdiff/geom/kabsch.hpp"

namespace mmdiff::fkc {
namespace {

struct SplitFold {
  Points protein;
  Vec3 ligand_centroid = Vec3::Zero();
};

SplitFold split(const geom::AtomCloud& fold) {
  int n_protein = 0;
  int n_ligand = 0;
  for (const auto& atom : fold.atoms) (atom.is_ligand ? n_ligand : n_protein)++;
  if (n_ligand == 0)
    throw DataError("specificity separation: fold has no ligand atoms");
  if (n_protein == 0)
    throw DataError("specificity separation: fold has no protein atoms");

  SplitFold out;
  out.protein.resize(n_protein, 3);
  int row = 0;
  for (const auto& atom : fold.atoms) {
    if (atom.is_ligand) {
      out.ligand_centroid += atom.pos;
    } else {
      out.protein.row(row++) = atom.pos.transpose();
    }
  }
  out.ligand_centroid /= n_ligand;
  return out;
}

}  // namespace

SeparationResult specificity_separation(
    const std::vector<geom::AtomCloud>& on_folds,
    const std::vector<geom::AtomCloud>& off_folds, double threshold) {
  if (on_folds.empty() || off_folds.empty())
    throw DataError(
        "specificity separation: need at least one fold on each side");

  std::vector<SplitFold> on;
  std::vector<SplitFold> off;
  on.reserve(on_folds.size());
  off.reserve(off_folds.size());
  for (const auto& fold : on_folds) on.push_back(split(fold));
  for (const auto& fold : off_folds) off.push_back(split(fold));

  double best = std::numeric_limits<double>::infinity();
  for (const auto& a : on) {
    for (const auto& b : off) {
      if (a.protein.rows() != b.protein.rows())
        throw DataError(
            "specificity separation: protein atom counts differ between folds");
      const geom::AlignmentResult align = geom::kabsch(b.protein, a.protein);
      const double dist =
          (a.ligand_centroid - align.apply(b.ligand_centroid)).norm();
      best = std::min(best, dist);
    }
  }

  SeparationResult res;
  res.min_rmsd = best;
  res.separated = best > threshold;
  return res;
}

}  // namespace mmdiff::fkc
