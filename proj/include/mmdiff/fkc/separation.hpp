#pragma once

#include <vector>

#include "mmdiff/geom/atom_cloud.hpp"

namespace mmdiff::fkc {

struct SeparationResult {
  double min_rmsd = 0.0;
  bool separated = false;
};

// Specificity check between on-target and off-target folds.  For every
// (on, off) pair the structures are rigidly aligned over their protein
// atoms, then the distance between the ligand centroids is recorded; the
// pair set is judged separated when the minimum distance exceeds the
// threshold (Angstrom).  Throws DataError when any fold lacks ligand or
// protein atoms.
SeparationResult specificity_separation(
    const std::vector<geom::AtomCloud>& on_folds,
    const std::vector<geom::AtomCloud>& off_folds, double threshold = 6.0);

}  // namespace mmdiff::fkc
