#include "mmdiff/reward/contact.hpp"

#include <Eigen/Geometry>
#include <cmath>
#include <string>

#include "mmdiff/core/error.hpp"
#include "mmdiff/core/protein.hpp"

namespace mmdiff::reward {

namespace {

// Ideal-geometry virtual C-beta coefficients for
//   Cb = CA + kA * (b x c) + kB * b + kC * c,  b = CA - N, c = C - CA.
constexpr double kA = -0.58273431;
constexpr double kB = 0.56802827;
constexpr double kC = -0.54067466;

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

bool pair_eligible(const ResidueClassMasks& masks,
                   const ContactRewardSpec& spec, int i, int j) {
  if (j - i < spec.delta_min) return false;
  switch (spec.rule) {
    case PairRule::kDisulfide:
      return masks.is_cys[static_cast<std::size_t>(i)] &&
             masks.is_cys[static_cast<std::size_t>(j)];
    case PairRule::kCationPi:
      return (masks.is_cation[static_cast<std::size_t>(i)] &&
              masks.is_aromatic[static_cast<std::size_t>(j)]) ||
             (masks.is_aromatic[static_cast<std::size_t>(i)] &&
              masks.is_cation[static_cast<std::size_t>(j)]);
  }
  return false;
}

PairRule rule_from_name(const std::string& name) {
  if (name == "disulfide") return PairRule::kDisulfide;
  if (name == "cation_pi") return PairRule::kCationPi;
  throw ConfigError("reward: unknown pair rule '" + name +
                    "' (expected disulfide or cation_pi)");
}

Points cbeta_points(const Vec& backbone, int n_residues) {
  Points cb(n_residues, 3);
  for (int i = 0; i < n_residues; ++i) {
    const Vec3 n = backbone.segment<3>(9 * i);
    const Vec3 ca = backbone.segment<3>(9 * i + 3);
    const Vec3 c = backbone.segment<3>(9 * i + 6);
    cb.row(i) = reconstruct_cbeta(n, ca, c).transpose();
  }
  return cb;
}

int residue_count(const Vec& backbone, const ResidueClassMasks& masks,
                  const char* where) {
  const int n = masks.length();
  if (backbone.size() != 9LL * n) {
    throw DataError(std::string(where) + ": backbone has " +
                    std::to_string(backbone.size()) + " coordinates but " +
                    std::to_string(n) +
                    " residues need 9 each (N, CA, C xyz)");
  }
  return n;
}

}  // namespace

ContactRewardSpec ContactRewardSpec::disulfide() {
  return ContactRewardSpec{4.5, 0.3, 3, PairRule::kDisulfide};
}

ContactRewardSpec ContactRewardSpec::cation_pi() {
  return ContactRewardSpec{8.0, 0.5, 4, PairRule::kCationPi};
}

ContactRewardSpec ContactRewardSpec::from_config(const Config& config) {
  ContactRewardSpec spec;
  if (config.has("reward", "preset")) {
    const std::string preset = config.get_string("reward", "preset");
    if (preset == "disulfide") {
      spec = disulfide();
    } else if (preset == "cation_pi") {
      spec = cation_pi();
    } else {
      throw ConfigError("reward: unknown preset '" + preset +
                        "' (expected disulfide or cation_pi)");
    }
  }
  spec.d0 = config.get_double_or("reward", "d0", spec.d0);
  spec.tau = config.get_double_or("reward", "tau", spec.tau);
  spec.delta_min = static_cast<int>(
      config.get_int_or("reward", "delta_min", spec.delta_min));
  if (config.has("reward", "rule")) {
    spec.rule = rule_from_name(config.get_string("reward", "rule"));
  }
  spec.validate();
  return spec;
}

void ContactRewardSpec::validate() const {
  if (!(d0 > 0.0)) throw ConfigError("reward: d0 must be > 0");
  if (!(tau > 0.0)) throw ConfigError("reward: tau must be > 0");
  if (delta_min < 0) throw ConfigError("reward: delta_min must be >= 0");
}

ResidueClassMasks ResidueClassMasks::from_tokens(
    const std::vector<int>& tokens) {
  ResidueClassMasks masks;
  masks.is_cys.reserve(tokens.size());
  masks.is_cation.reserve(tokens.size());
  masks.is_aromatic.reserve(tokens.size());
  for (const int token : tokens) {
    // Anything outside the 20 standard residues (mask sentinel, unknown)
    // belongs to no class.
    const bool standard = token >= 0 && token < protein::kNumStandard;
    masks.is_cys.push_back(standard && protein::is_cysteine(token));
    masks.is_cation.push_back(standard && protein::is_cation(token));
    masks.is_aromatic.push_back(standard && protein::is_aromatic(token));
  }
  return masks;
}

Vec3 reconstruct_cbeta(const Vec3& n, const Vec3& ca, const Vec3& c) {
  const Vec3 b = ca - n;
  const Vec3 cc = c - ca;
  const Vec3 a = b.cross(cc);
  if (a.norm() <= 1e-10 * b.norm() * cc.norm() || b.norm() == 0.0 ||
      cc.norm() == 0.0) {
    throw GeometryError(
        "reconstruct_cbeta: collinear or coincident backbone atoms");
  }
  return ca + kA * a + kB * b + kC * cc;
}

Mat soft_contacts(const Points& cbeta, const ResidueClassMasks& masks,
                  const ContactRewardSpec& spec) {
  spec.validate();
  const int n = masks.length();
  if (cbeta.rows() != n) {
    throw DataError("soft_contacts: " + std::to_string(cbeta.rows()) +
                    " C-beta points vs " + std::to_string(n) + " residues");
  }
  Mat contacts = Mat::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!pair_eligible(masks, spec, i, j)) continue;
      const double d = (cbeta.row(i) - cbeta.row(j)).norm();
      contacts(i, j) = sigmoid((spec.d0 - d) / spec.tau);
    }
  }
  return contacts;
}

double contact_reward(const Mat& contacts) {
  if (contacts.rows() != contacts.cols()) {
    throw DataError("contact_reward: contact matrix must be square");
  }
  double reward = 0.0;
  for (int i = 0; i < contacts.rows(); ++i) {
    reward += std::log1p(contacts.row(i).sum());
  }
  return reward;
}

double contact_reward(const Vec& backbone, const ResidueClassMasks& masks,
                      const ContactRewardSpec& spec) {
  const int n = residue_count(backbone, masks, "contact_reward");
  return contact_reward(soft_contacts(cbeta_points(backbone, n), masks, spec));
}

Vec contact_reward_gradient(const Vec& backbone,
                            const ResidueClassMasks& masks,
                            const ContactRewardSpec& spec) {
  spec.validate();
  const int n = residue_count(backbone, masks, "contact_reward_gradient");
  const Points cb = cbeta_points(backbone, n);

  // Row sums S_i of the contact matrix give the log(1 + S_i) outer factors.
  Vec row_sum = Vec::Zero(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!pair_eligible(masks, spec, i, j)) continue;
      const double d = (cb.row(i) - cb.row(j)).norm();
      row_sum[i] += sigmoid((spec.d0 - d) / spec.tau);
    }
  }

  // dR/dCb accumulated over pairs.
  std::vector<Vec3> grad_cb(static_cast<std::size_t>(n), Vec3::Zero());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (!pair_eligible(masks, spec, i, j)) continue;
      const Vec3 diff = (cb.row(i) - cb.row(j)).transpose();
      const double d = diff.norm();
      if (d < 1e-9) {
        throw GeometryError(
            "contact_reward_gradient: coincident C-beta pair (" +
            std::to_string(i) + ", " + std::to_string(j) +
            ") makes the distance gradient singular");
      }
      const double s = sigmoid((spec.d0 - d) / spec.tau);
      const double w = -s * (1.0 - s) / (spec.tau * (1.0 + row_sum[i]));
      const Vec3 u = (w / d) * diff;
      grad_cb[static_cast<std::size_t>(i)] += u;
      grad_cb[static_cast<std::size_t>(j)] -= u;
    }
  }

  // Pull dR/dCb back onto N, CA, C through Cb = CA + kA (b x c) + kB b + kC c
  // with b = CA - N, c = C - CA:
  //   dR/dN  = -kA (c x g) - kB g
  //   dR/dCA =  g + kA ((b + c) x g) + (kB - kC) g
  //   dR/dC  = -kA (b x g) + kC g
  // (their sum is g, so rigid translations leave the reward flat).
  Vec grad = Vec::Zero(backbone.size());
  for (int i = 0; i < n; ++i) {
    const Vec3 g = grad_cb[static_cast<std::size_t>(i)];
    const Vec3 b = Vec3(backbone.segment<3>(9 * i + 3)) -
                   Vec3(backbone.segment<3>(9 * i));
    const Vec3 c = Vec3(backbone.segment<3>(9 * i + 6)) -
                   Vec3(backbone.segment<3>(9 * i + 3));
    grad.segment<3>(9 * i) = -kA * c.cross(g) - kB * g;
    grad.segment<3>(9 * i + 3) = g + kA * (b + c).cross(g) + (kB - kC) * g;
    grad.segment<3>(9 * i + 6) = -kA * b.cross(g) + kC * g;
  }
  return grad;
}

}  // namespace mmdiff::reward
