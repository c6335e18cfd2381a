#pragma once

#include <string>
#include <vector>

#include "mmdiff/core/types.hpp"

namespace mmdiff::geom {

struct Atom {
  Vec3 pos = Vec3::Zero();
  std::string name;      // PDB atom name, e.g. "CA"
  std::string element;   // element symbol, e.g. "C"
  int residue_index = 0;
  int residue_type = 0;  // residue token
  std::string residue_name;
  char chain_id = 'A';
  bool is_ligand = false;
  bool is_backbone = false;

  bool is_heavy() const { return element != "H" && element != "h"; }
};

struct AtomCloud {
  std::vector<Atom> atoms;

  int size() const { return static_cast<int>(atoms.size()); }

  Points positions() const {
    Points out(size(), 3);
    for (int i = 0; i < size(); ++i)
      out.row(i) = atoms[static_cast<std::size_t>(i)].pos.transpose();
    return out;
  }
};

}  // namespace mmdiff::geom
