#include "mmdiff/geom/kabsch.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>

#include "mmdiff/core/error.hpp"

namespace mmdiff::geom {

Points AlignmentResult::apply(const Points& pts) const {
  Points out = pts * rotation.transpose();
  out.rowwise() += translation.transpose();
  return out;
}

AlignmentResult kabsch(const Points& P, const Points& Q, const Vec* weights) {
  const int n = static_cast<int>(P.rows());
  if (Q.rows() != n)
    throw DomainError("kabsch: point sets must have equal size");
  if (n < 3) throw DomainError("kabsch: need at least 3 points");

  Vec w;
  if (weights) {
    if (weights->size() != n)
      throw DomainError("kabsch: weight count mismatch");
    if ((weights->array() < 0.0).any() || weights->sum() <= 0.0)
      throw DomainError("kabsch: weights must be non-negative, sum positive");
    w = *weights / weights->sum();
  } else {
    w = Vec::Constant(n, 1.0 / n);
  }

  const Vec3 p_bar = (P.transpose() * w).eval();
  const Vec3 q_bar = (Q.transpose() * w).eval();
  Points Pc = P.rowwise() - p_bar.transpose();
  Points Qc = Q.rowwise() - q_bar.transpose();

  Mat3 H = Mat3::Zero();
  for (int i = 0; i < n; ++i)
    H += w[i] * Pc.row(i).transpose() * Qc.row(i);

  Eigen::JacobiSVD<Mat3> svd(H, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec3 sv = svd.singularValues();
  if (sv[1] <= 1e-12 * (sv[0] > 0 ? sv[0] : 1.0))
    throw DegenerateError("kabsch: covariance rank < 2, rotation undetermined");

  const Mat3 U = svd.matrixU();
  const Mat3 V = svd.matrixV();
  const double d = (V * U.transpose()).determinant();
  Mat3 S = Mat3::Identity();
  S(2, 2) = d < 0 ? -1.0 : 1.0;

  AlignmentResult result;
  result.rotation = V * S * U.transpose();
  result.translation = q_bar - result.rotation * p_bar;

  double sq = 0.0;
  for (int i = 0; i < n; ++i)
    sq += w[i] * (result.rotation * Vec3(Pc.row(i)) - Vec3(Qc.row(i)))
                     .squaredNorm();
  result.rmsd = std::sqrt(sq > 0 ? sq : 0.0);
  return result;
}

}  // namespace mmdiff::geom
