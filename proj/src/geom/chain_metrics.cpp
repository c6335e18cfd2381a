#include "mmdiff/geom/chain_metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mmdiff/core/error.hpp"
#include "mmdiff/geom/kabsch.hpp"

namespace mmdiff::geom {

namespace {

struct CaAtom {
  int residue_index;
  Vec3 pos;
};

std::vector<CaAtom> calpha_trace(const AtomCloud& cloud) {
  std::vector<CaAtom> cas;
  for (const Atom& a : cloud.atoms)
    if (!a.is_ligand && a.name == "CA")
      cas.push_back(CaAtom{a.residue_index, a.pos});
  if (cas.empty())
    throw DataError("contact order: no C-alpha atoms in cloud");
  std::sort(cas.begin(), cas.end(),
            [](const CaAtom& a, const CaAtom& b) {
              return a.residue_index < b.residue_index;
            });
  return cas;
}

Points backbone_positions(const AtomCloud& cloud) {
  std::vector<Vec3> pos;
  for (const Atom& a : cloud.atoms)
    if (!a.is_ligand && a.is_backbone) pos.push_back(a.pos);
  Points out(static_cast<int>(pos.size()), 3);
  for (std::size_t i = 0; i < pos.size(); ++i)
    out.row(static_cast<int>(i)) = pos[i].transpose();
  return out;
}

// Heavy-atom centroids of ligand groups keyed by chain id.
std::map<char, Vec3> ligand_centroids(const AtomCloud& cloud) {
  std::map<char, Vec3> sums;
  std::map<char, int> counts;
  for (const Atom& a : cloud.atoms) {
    if (!a.is_ligand || !a.is_heavy()) continue;
    auto [it, fresh] = sums.try_emplace(a.chain_id, Vec3::Zero());
    it->second += a.pos;
    ++counts[a.chain_id];
  }
  for (auto& [chain, sum] : sums) sum /= counts[chain];
  return sums;
}

}  // namespace

ContactOrderResult relative_contact_order(const AtomCloud& cloud,
                                          double contact_distance,
                                          int min_separation) {
  const std::vector<CaAtom> cas = calpha_trace(cloud);
  const int L = static_cast<int>(cas.size());

  ContactOrderResult result;
  result.chain_length = L;
  long long separation_sum = 0;
  for (int i = 0; i < L; ++i)
    for (int j = i + 1; j < L; ++j) {
      const int sep = cas[static_cast<std::size_t>(j)].residue_index -
                      cas[static_cast<std::size_t>(i)].residue_index;
      if (sep < min_separation) continue;
      if ((cas[static_cast<std::size_t>(i)].pos -
           cas[static_cast<std::size_t>(j)].pos)
              .norm() < contact_distance) {
        ++result.n_contacts;
        separation_sum += sep;
      }
    }
  if (result.n_contacts == 0) {
    result.no_contacts = true;
    result.rco = 0.0;
  } else {
    result.rco = static_cast<double>(separation_sum) /
                 (static_cast<double>(L) * result.n_contacts);
  }
  return result;
}

double radius_of_gyration(const AtomCloud& cloud, bool all_atoms) {
  Points pts;
  if (all_atoms) {
    if (cloud.atoms.empty()) throw DataError("radius of gyration: empty cloud");
    pts = cloud.positions();
  } else {
    const std::vector<CaAtom> cas = calpha_trace(cloud);
    pts.resize(static_cast<int>(cas.size()), 3);
    for (std::size_t i = 0; i < cas.size(); ++i)
      pts.row(static_cast<int>(i)) = cas[i].pos.transpose();
  }
  const Points centered = pts.rowwise() - pts.colwise().mean();
  return std::sqrt(centered.rowwise().squaredNorm().mean());
}

CodesignabilityResult codesignable(const AtomCloud& design,
                                   const AtomCloud& refold, double rmsd_cutoff,
                                   double centroid_cutoff) {
  const Points bb_design = backbone_positions(design);
  const Points bb_refold = backbone_positions(refold);
  if (bb_design.rows() != bb_refold.rows())
    throw DataError("codesignable: backbone atom count mismatch");
  if (bb_design.rows() < 3)
    throw DataError("codesignable: too few backbone atoms");

  // Align the design onto the refold; ligands ride along in the same frame.
  const AlignmentResult align = kabsch(bb_design, bb_refold);

  CodesignabilityResult result;
  result.backbone_rmsd = align.rmsd;

  const std::map<char, Vec3> lig_design = ligand_centroids(design);
  const std::map<char, Vec3> lig_refold = ligand_centroids(refold);
  if (lig_design.size() != lig_refold.size())
    throw DataError("codesignable: ligand group count mismatch");

  bool ligands_ok = true;
  for (const auto& [chain, centroid] : lig_design) {
    const auto it = lig_refold.find(chain);
    if (it == lig_refold.end())
      throw DataError("codesignable: unmatched ligand chain");
    const double d = (align.apply(centroid) - it->second).norm();
    result.ligand_centroid_distances.push_back(d);
    if (!(d < centroid_cutoff)) ligands_ok = false;
  }
  result.pass = align.rmsd < rmsd_cutoff && ligands_ok;
  return result;
}

}  // namespace mmdiff::geom
