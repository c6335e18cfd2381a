#pragma once

#include <vector>

#include "mmdiff/core/config.hpp"
#include "mmdiff/core/types.hpp"

namespace mmdiff::reward {

// Which residue pairs are eligible for a soft contact.
enum class PairRule { kDisulfide, kCationPi };

// Soft-contact shape: sigmoid((d0 - d)/tau), gated by residue classes and a
// minimum sequence separation.  `tau` here is the sigmoid sharpness in
// Angstrom, unrelated to the sampler's unified time.
struct ContactRewardSpec {
  double d0 = 4.5;    // contact midpoint distance (Angstrom)
  double tau = 0.3;   // sigmoid sharpness (Angstrom)
  int delta_min = 3;  // minimum sequence separation |i - j|
  PairRule rule = PairRule::kDisulfide;

  static ContactRewardSpec disulfide();  // (4.5, 0.3, 3), Cys-Cys pairs
  static ContactRewardSpec cation_pi();  // (8.0, 0.5, 4), {Arg,Lys} x aromatic

  // [reward] section: `preset = disulfide | cation_pi` picks the defaults;
  // explicit d0 / tau / delta_min / rule keys override individual fields.
  static ContactRewardSpec from_config(const Config& config);

  void validate() const;  // d0 > 0, tau > 0, delta_min >= 0
};

// Per-residue class flags deciding pair eligibility.  Masked and unknown
// tokens belong to no class, so undetermined positions never earn reward.
struct ResidueClassMasks {
  std::vector<bool> is_cys;
  std::vector<bool> is_cation;    // Arg, Lys
  std::vector<bool> is_aromatic;  // Phe, Tyr, Trp, His

  int length() const { return static_cast<int>(is_cys.size()); }

  static ResidueClassMasks from_tokens(const std::vector<int>& tokens);
};

// Virtual C-beta from backbone N, CA, C by the standard ideal-geometry
// construction (fixed coefficients on b = CA - N, c = C - CA and b x c).
// Equivariant under rigid motion.  Throws GeometryError when the three atoms
// are collinear or coincident.
Vec3 reconstruct_cbeta(const Vec3& n, const Vec3& ca, const Vec3& c);

// L x L strictly upper-triangular soft-contact matrix over C-beta positions:
// c_ij = sigmoid((d0 - |cb_i - cb_j|) / tau) for eligible pairs i < j with
// j - i >= delta_min, zero elsewhere.  Entries lie in [0, 1].
Mat soft_contacts(const Points& cbeta, const ResidueClassMasks& masks,
                  const ContactRewardSpec& spec);

// R = sum_i log(1 + sum_j c_ij); nonnegative, zero iff every contact is zero.
double contact_reward(const Mat& contacts);

// Backbone layout used by the flat-coordinate entry points: residue i owns
// nine consecutive doubles, the xyz triples of N, CA, C in that order.
double contact_reward(const Vec& backbone, const ResidueClassMasks& masks,
                      const ContactRewardSpec& spec);

// Exact chain-rule gradient of the backbone reward through the sigmoid
// contacts and the C-beta construction; same layout as `backbone`.  Throws
// GeometryError when an eligible C-beta pair coincides (the distance
// gradient is singular there).
Vec contact_reward_gradient(const Vec& backbone,
                            const ResidueClassMasks& masks,
                            const ContactRewardSpec& spec);

}  // namespace mmdiff::reward
