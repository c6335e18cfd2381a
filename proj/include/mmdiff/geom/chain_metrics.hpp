#pragma once

#include <vector>

#include "mmdiff/geom/atom_cloud.hpp"

namespace mmdiff::geom {

struct ContactOrderResult {
  double rco = 0.0;
  int n_contacts = 0;
  int chain_length = 0;
  bool no_contacts = false;  // RCO reported as 0 by convention
};

// Relative contact order over C-alpha contacts: pairs with distance < 8 A
// and sequence separation >= 12; RCO = sum |i-j| / (L * N), 0 when N = 0.
ContactOrderResult relative_contact_order(const AtomCloud& cloud,
                                          double contact_distance = 8.0,
                                          int min_separation = 12);

// Root-mean-square distance to the centroid, over C-alpha atoms by default
// or over all atoms.
double radius_of_gyration(const AtomCloud& cloud, bool all_atoms = false);

struct CodesignabilityResult {
  bool pass = false;
  double backbone_rmsd = 0.0;
  std::vector<double> ligand_centroid_distances;
};

// A design is co-designable against its refold when the protein backbone
// superposes within `rmsd_cutoff` and, in that aligned frame, every ligand
// centroid (heavy atoms only, grouped by chain) lies within
// `centroid_cutoff` of its counterpart.
CodesignabilityResult codesignable(const AtomCloud& design,
                                   const AtomCloud& refold,
                                   double rmsd_cutoff = 2.0,
                                   double centroid_cutoff = 2.0);

}  // namespace mmdiff::geom
