#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <Eigen/Geometry>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "mmdiff/core/error.hpp"
#include "mmdiff/core/protein.hpp"
#include "mmdiff/core/rng.hpp"
#include "mmdiff/geom/chain_metrics.hpp"
#include "mmdiff/geom/hungarian.hpp"
#include "mmdiff/geom/kabsch.hpp"
#include "mmdiff/geom/motif.hpp"

using namespace mmdiff;
using namespace mmdiff::geom;

namespace {

Mat3 random_rotation(Rng& rng) {
  // Uniform over the rotation group via normalized quaternions.
  Eigen::Quaterniond q(rng.normal(), rng.normal(), rng.normal(), rng.normal());
  q.normalize();
  return q.toRotationMatrix();
}

Points random_points(Rng& rng, int n, double scale = 5.0) {
  Points P(n, 3);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < 3; ++j) P(i, j) = scale * rng.normal();
  return P;
}

MotifFrame frame_of(Points pts, std::vector<int> types) {
  return MotifFrame::from_types(std::move(pts), std::move(types));
}

// Equilateral triangle of circumradius r in the xy plane; pairwise
// assignment-based RMSD between two such frames is |r1 - r2|.
MotifFrame triangle_frame(double radius) {
  Points pts(3, 3);
  for (int i = 0; i < 3; ++i) {
    const double ang = 2.0 * M_PI * i / 3.0;
    pts.row(i) << radius * std::cos(ang), radius * std::sin(ang), 0.0;
  }
  return frame_of(pts, {0, 1, 2});
}

std::vector<std::vector<int>> all_permutations(int n) {
  std::vector<int> idx(static_cast<std::size_t>(n));
  std::iota(idx.begin(), idx.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(idx);
  } while (std::next_permutation(idx.begin(), idx.end()));
  return out;
}

Points permute_rows(const Points& pts, const std::vector<int>& perm) {
  Points out(pts.rows(), 3);
  for (int i = 0; i < pts.rows(); ++i)
    out.row(i) = pts.row(perm[static_cast<std::size_t>(i)]);
  return out;
}

}  // namespace

TEST_CASE("kabsch recovers random rigid transforms") {
  Rng rng(2024);
  for (int trial = 0; trial < 50; ++trial) {
    const Points P = random_points(rng, 8);
    const Mat3 R = random_rotation(rng);
    Vec3 t(rng.normal(), rng.normal(), rng.normal());
    Points Q = P * R.transpose();
    Q.rowwise() += t.transpose();
    const AlignmentResult res = kabsch(P, Q);
    CHECK(res.rmsd <= 1e-9);
    CHECK((res.rotation - R).cwiseAbs().maxCoeff() <= 1e-9);
    CHECK(res.rotation.determinant() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("kabsch of identical sets is the identity") {
  Rng rng(7);
  const Points P = random_points(rng, 5);
  const AlignmentResult res = kabsch(P, P);
  CHECK(res.rmsd <= 1e-12);
  CHECK((res.rotation - Mat3::Identity()).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(res.translation.norm() <= 1e-12);
}

TEST_CASE("kabsch matches an independent least-squares computation") {
  // Two unit squares differing by one corner displaced along z.
  Points P(4, 3), Q(4, 3);
  P << 0, 0, 0, 1, 0, 0, 1, 1, 0, 0, 1, 0;
  Q = P;
  Q(2, 2) += 1.0;
  const AlignmentResult res = kabsch(P, Q);

  const Eigen::Matrix4d T =
      Eigen::umeyama(P.transpose(), Q.transpose(), false);
  double sq = 0.0;
  for (int i = 0; i < 4; ++i) {
    const Vec3 mapped =
        T.topLeftCorner<3, 3>() * Vec3(P.row(i)) + T.topRightCorner<3, 1>();
    sq += (mapped - Vec3(Q.row(i))).squaredNorm();
  }
  CHECK(res.rmsd == doctest::Approx(std::sqrt(sq / 4)).epsilon(1e-9));
}

TEST_CASE("kabsch never returns a reflection") {
  Points P(4, 3);
  P << 0, 0, 0, 3, 0, 0, 0, 2, 0, 0, 0, 1;
  Points Q = P;
  Q.col(2) *= -1.0;  // mirrored
  const AlignmentResult res = kabsch(P, Q);
  CHECK(res.rotation.determinant() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(res.rmsd > 0.1);
}

TEST_CASE("kabsch rejects degenerate input") {
  Points P(3, 3), Q(3, 3);
  for (int i = 0; i < 3; ++i) {
    P.row(i) << i, 0, 0;  // collinear
    Q.row(i) << 0, i, 0;
  }
  CHECK_THROWS_AS(kabsch(P, Q), DegenerateError);
  Points small(2, 3);
  CHECK_THROWS_AS(kabsch(small, small), DomainError);
}

TEST_CASE("weighted kabsch with uniform weights equals unweighted") {
  Rng rng(99);
  const Points P = random_points(rng, 6);
  const Points Q = random_points(rng, 6);
  const Vec w = Vec::Constant(6, 2.5);
  const AlignmentResult a = kabsch(P, Q);
  const AlignmentResult b = kabsch(P, Q, &w);
  CHECK((a.rotation - b.rotation).cwiseAbs().maxCoeff() <= 1e-12);
  CHECK(a.rmsd == doctest::Approx(b.rmsd).epsilon(1e-12));
}

TEST_CASE("hungarian solves the two-by-two cases") {
  Mat c1(2, 2), c2(2, 2);
  c1 << 1, 2, 2, 1;
  const Assignment a1 = hungarian(c1);
  CHECK(a1.permutation == std::vector<int>{0, 1});
  CHECK(a1.cost == 2.0);
  c2 << 2, 1, 1, 2;
  const Assignment a2 = hungarian(c2);
  CHECK(a2.permutation == std::vector<int>{1, 0});
  CHECK(a2.cost == 2.0);
}

TEST_CASE("hungarian equals brute force on random matrices") {
  Rng rng(55);
  const std::vector<std::vector<int>> perms = all_permutations(6);
  for (int trial = 0; trial < 20; ++trial) {
    Mat cost(6, 6);
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j)
        cost(i, j) = static_cast<double>(rng.integer(100));
    const Assignment got = hungarian(cost);
    double best = 1e300;
    for (const std::vector<int>& p : perms) {
      double c = 0.0;
      for (int i = 0; i < 6; ++i) c += cost(i, p[static_cast<std::size_t>(i)]);
      best = std::min(best, c);
    }
    CHECK(got.cost == doctest::Approx(best).epsilon(1e-12));
  }
}

TEST_CASE("hungarian validates its input") {
  Mat rect(2, 3);
  rect.setZero();
  CHECK_THROWS_AS(hungarian(rect), DomainError);
  Mat bad(2, 2);
  bad << 1, std::numeric_limits<double>::infinity(), 0, 1;
  CHECK_THROWS_AS(hungarian(bad), DomainError);
}

namespace {

// Five points with pairwise separations >= 10; small rigid motions keep the
// nearest-point matching (and hence the first assignment) at the identity.
Points separated_points() {
  Points P(5, 3);
  P << 10, 0, 0, 0, 10, 0, 0, 0, 10, 10, 10, 0, 0, 10, 10;
  return P;
}

MotifFrame relabeled(const MotifFrame& F, const std::vector<int>& perm) {
  std::vector<int> types(F.types.size());
  for (std::size_t i = 0; i < types.size(); ++i)
    types[i] = F.types[static_cast<std::size_t>(perm[i])];
  return frame_of(permute_rows(F.ca, perm), types);
}

}  // namespace

TEST_CASE("assignment rmsd vanishes for rigid copies and relabelings") {
  const Points P = separated_points();
  const MotifFrame A = frame_of(P, {0, 1, 2, 3, 4});

  SUBCASE("identical frames") { CHECK(motif_rmsd(A, A).rmsd <= 1e-12); }
  SUBCASE("modest rigid transform") {
    const Mat3 R =
        Eigen::AngleAxisd(10.0 * M_PI / 180.0, Vec3(1, 1, 1).normalized())
            .toRotationMatrix();
    Points Q = P * R.transpose();
    Q.rowwise() += Vec3(1.0, -2.0, 0.5).transpose();
    const MotifFrame B = frame_of(Q, {0, 1, 2, 3, 4});
    CHECK(motif_rmsd(A, B).rmsd <= 1e-9);
  }
  SUBCASE("random residue relabeling") {
    const MotifFrame B = relabeled(A, {3, 0, 4, 1, 2});
    CHECK(motif_rmsd(A, B).rmsd <= 1e-9);
  }
}

namespace {

double rmsd_assignment_oracle(const Points& P, const Points& Q) {
  double oracle = 1e300;
  for (const std::vector<int>& perm :
       all_permutations(static_cast<int>(P.rows())))
    oracle = std::min(oracle, kabsch(permute_rows(Q, perm), P).rmsd);
  return oracle;
}

}  // namespace

TEST_CASE("assignment rmsd equals the exhaustive oracle on a built case") {
  // Permuted copy with small positional noise and no rotation: the first
  // assignment already recovers the correspondence, so the alternation
  // reaches the global optimum and must agree with brute force exactly.
  Points P(4, 3);
  P << 0, 0, 0, 8, 0, 0, 0, 8, 0, 0, 0, 8;
  Points noise(4, 3);
  noise << 0.1, -0.2, 0.05, -0.15, 0.1, 0.2, 0.2, 0.05, -0.1, -0.05, -0.1,
      0.15;
  const std::vector<int> rho = {2, 0, 3, 1};
  Points Q(4, 3);
  for (int j = 0; j < 4; ++j)
    Q.row(j) = P.row(rho[static_cast<std::size_t>(j)]) +
               noise.row(rho[static_cast<std::size_t>(j)]);
  const MotifFrame A = frame_of(P, {0, 1, 2, 3});
  const MotifFrame B = frame_of(Q, {0, 1, 2, 3});

  const double oracle = rmsd_assignment_oracle(P, Q);
  const double got = motif_rmsd(A, B).rmsd;
  CHECK(got > 0.05);  // the noise is real
  CHECK(got == doctest::Approx(oracle).epsilon(1e-9));
  CHECK(std::abs(motif_rmsd(A, B).rmsd - motif_rmsd(B, A).rmsd) <= 1e-9);
}

TEST_CASE("assignment rmsd never beats the exhaustive oracle") {
  // On arbitrary frames the alternation is a local search: it may exceed
  // the brute-force optimum but can never be below it.
  Rng rng(123);
  for (int trial = 0; trial < 10; ++trial) {
    const Points P = random_points(rng, 4, 4.0);
    const Points Q = random_points(rng, 4, 4.0);
    const MotifFrame A = frame_of(P, {0, 1, 2, 3});
    const MotifFrame B = frame_of(Q, {0, 1, 2, 3});
    const double got = motif_rmsd(A, B).rmsd;
    CHECK(got >= rmsd_assignment_oracle(P, Q) - 1e-9);
    CHECK(std::abs(got - motif_rmsd(B, A).rmsd) <= 1e-9);
  }
}

TEST_CASE("chemical cost of identical frames is zero") {
  Rng rng(31);
  const MotifFrame A = frame_of(random_points(rng, 4), {0, 1, 2, 3});
  CHECK(chem_cost(A, A) == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
}

TEST_CASE("chemical cost isolates the class term") {
  using namespace mmdiff::protein;
  Rng rng(32);
  const Points P = random_points(rng, 4);
  // Same geometry; every type swapped for a different one in the same class.
  const MotifFrame A = frame_of(
      P, {token_from_one('L'), token_from_one('V'), token_from_one('R'),
          token_from_one('D')});
  const MotifFrame B = frame_of(
      P, {token_from_one('I'), token_from_one('A'), token_from_one('K'),
          token_from_one('E')});
  CHECK(chem_cost(A, B) == doctest::Approx(2.5).epsilon(1e-9));
}

namespace {

// Mean combined (unsquared-distance + chemical) report for every assignment,
// each under its own optimal alignment of the matched pairs; returns the
// minimum over assignments.
double chem_report_oracle(const MotifFrame& A, const MotifFrame& B,
                          double alpha, double beta) {
  using namespace mmdiff::protein;
  const int K = A.size();
  auto chem_d = [&](int i, int j) {
    if (A.types[static_cast<std::size_t>(i)] ==
        B.types[static_cast<std::size_t>(j)])
      return 0.0;
    return A.classes[static_cast<std::size_t>(i)] ==
                   B.classes[static_cast<std::size_t>(j)]
               ? 0.5
               : 1.0;
  };
  double best = 1e300;
  for (const std::vector<int>& perm : all_permutations(K)) {
    const Points Bp = permute_rows(B.ca, perm);
    const AlignmentResult align = kabsch(Bp, A.ca);
    const Points Bt = align.apply(Bp);
    double report = 0.0;
    for (int i = 0; i < K; ++i)
      report += alpha * (Vec3(A.ca.row(i)) - Vec3(Bt.row(i))).norm() +
                beta * chem_d(i, perm[static_cast<std::size_t>(i)]);
    best = std::min(best, report / K);
  }
  return best;
}

}  // namespace

TEST_CASE("chemical cost equals the exhaustive oracle on a built case") {
  using namespace mmdiff::protein;
  // Permuted, lightly perturbed copy whose residues map onto same-class
  // partners: geometry and chemistry prefer the same assignment, so the
  // alternation reaches the brute-force optimum.
  Points P(3, 3);
  P << 0, 0, 0, 6, 0, 0, 0, 6, 0;
  const std::vector<int> ta = {token_from_one('L'), token_from_one('S'),
                               token_from_one('R')};
  const std::vector<int> same_class = {token_from_one('I'),
                                       token_from_one('T'),
                                       token_from_one('K')};
  Points noise(3, 3);
  noise << 0.1, -0.05, 0.2, -0.2, 0.15, 0.1, 0.05, -0.1, -0.15;
  const std::vector<int> rho = {1, 2, 0};
  Points Q(3, 3);
  std::vector<int> tb(3);
  for (int j = 0; j < 3; ++j) {
    Q.row(j) = P.row(rho[static_cast<std::size_t>(j)]) +
               noise.row(rho[static_cast<std::size_t>(j)]);
    tb[static_cast<std::size_t>(j)] =
        same_class[static_cast<std::size_t>(rho[static_cast<std::size_t>(j)])];
  }
  const MotifFrame A = frame_of(P, ta);
  const MotifFrame B = frame_of(Q, tb);

  const double got = chem_cost(A, B);
  CHECK(got == doctest::Approx(chem_report_oracle(A, B, 1.0, 5.0)).epsilon(1e-9));
  CHECK(got > 5.0 * 0.5 / 1.0 - 1e-9);  // at least the chemical floor
}

TEST_CASE("chemical cost never beats the exhaustive report oracle") {
  using namespace mmdiff::protein;
  Rng rng(33);
  const std::vector<int> ta = {token_from_one('L'), token_from_one('S'),
                               token_from_one('R')};
  const std::vector<int> tb = {token_from_one('I'), token_from_one('R'),
                               token_from_one('G')};
  for (int trial = 0; trial < 10; ++trial) {
    const MotifFrame A = frame_of(random_points(rng, 3, 3.0), ta);
    const MotifFrame B = frame_of(random_points(rng, 3, 3.0), tb);
    CHECK(chem_cost(A, B) >= chem_report_oracle(A, B, 1.0, 5.0) - 1e-9);
  }
}

TEST_CASE("distance-test score identity and threshold counting") {
  const MotifFrame A = triangle_frame(5.0);
  SUBCASE("identical frames score 1") {
    CHECK(lddt(A, A) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("uniform +1.5 A distance shift scores one half") {
    // Scaling the triangle shifts every internal distance by exactly 1.5.
    const double side = (A.ca.row(0) - A.ca.row(1)).norm();
    const MotifFrame B = triangle_frame(5.0 * (side + 1.5) / side);
    CHECK(lddt(A, B) == doctest::Approx(0.5).epsilon(1e-12));
  }
}

TEST_CASE("distance-test score equals an independent recount") {
  Rng rng(41);
  const Points P = random_points(rng, 5, 4.0);
  Points Q = P;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 3; ++j) Q(i, j) += 0.8 * rng.normal();
  const MotifFrame A = frame_of(P, {0, 1, 2, 3, 4});
  const MotifFrame B = frame_of(Q, {0, 1, 2, 3, 4});

  const std::vector<int> perm = motif_rmsd(A, B).permutation;
  int preserved = 0, pairs = 0;
  for (int i = 0; i < 5; ++i)
    for (int j = 0; j < 5; ++j) {
      if (j <= i) continue;
      const double da = (P.row(i) - P.row(j)).norm();
      const double db = (Q.row(perm[static_cast<std::size_t>(i)]) -
                         Q.row(perm[static_cast<std::size_t>(j)]))
                            .norm();
      ++pairs;
      for (double thr : {0.5, 1.0, 2.0, 4.0})
        if (std::abs(da - db) < thr) ++preserved;
    }
  CHECK(lddt(A, B) ==
        doctest::Approx(static_cast<double>(preserved) / (4.0 * pairs))
            .epsilon(1e-12));
}

namespace {

double frobenius_oracle(const Points& P, const Points& Q) {
  const int K = static_cast<int>(P.rows());
  double oracle = 1e300;
  for (const std::vector<int>& perm : all_permutations(K)) {
    double sum = 0.0;
    for (int i = 0; i < K; ++i)
      for (int j = i + 1; j < K; ++j) {
        const double diff = (P.row(i) - P.row(j)).norm() -
                            (Q.row(perm[static_cast<std::size_t>(i)]) -
                             Q.row(perm[static_cast<std::size_t>(j)]))
                                .norm();
        sum += diff * diff;
      }
    oracle = std::min(oracle, std::sqrt(sum / (0.5 * K * (K - 1))));
  }
  return oracle;
}

}  // namespace

TEST_CASE("distance-matrix metric basics") {
  SUBCASE("identical frames give zero") {
    const MotifFrame A = triangle_frame(4.0);
    CHECK(frobenius_distance(A, A) == doctest::Approx(0.0).scale(1.0));
  }
  SUBCASE("two-point frames reduce to the distance gap") {
    Points P(2, 3), Q(2, 3);
    P << 0, 0, 0, 3.0, 0, 0;
    Q << 0, 0, 0, 4.5, 0, 0;  // scaled by 1.5
    const MotifFrame A = frame_of(P, {0, 1});
    const MotifFrame B = frame_of(Q, {0, 1});
    CHECK(frobenius_distance(A, B) == doctest::Approx(1.5).epsilon(1e-12));
  }
  SUBCASE("equals brute force on a built four-residue case") {
    // Distinct per-residue distance profiles plus small noise: the sorted
    // profiles identify the correspondence immediately, so the alternation
    // reaches the global optimum.
    Points P(4, 3);
    P << 0, 0, 0, 9, 0, 0, 0, 5, 0, 3, 3, 4;
    Points noise(4, 3);
    noise << 0.05, -0.08, 0.02, -0.06, 0.04, 0.09, 0.07, 0.01, -0.05, -0.03,
        -0.06, 0.08;
    const std::vector<int> rho = {3, 1, 0, 2};
    Points Q(4, 3);
    for (int j = 0; j < 4; ++j)
      Q.row(j) = P.row(rho[static_cast<std::size_t>(j)]) +
                 noise.row(rho[static_cast<std::size_t>(j)]);
    const MotifFrame A = frame_of(P, {0, 1, 2, 3});
    const MotifFrame B = frame_of(Q, {0, 1, 2, 3});
    const double got = frobenius_distance(A, B);
    CHECK(got > 0.01);
    CHECK(got == doctest::Approx(frobenius_oracle(P, Q)).epsilon(1e-9));
  }
  SUBCASE("never beats brute force on random frames") {
    Rng rng(61);
    for (int trial = 0; trial < 10; ++trial) {
      const Points P = random_points(rng, 4, 3.0);
      const Points Q = random_points(rng, 4, 3.0);
      const MotifFrame A = frame_of(P, {0, 1, 2, 3});
      const MotifFrame B = frame_of(Q, {0, 1, 2, 3});
      CHECK(frobenius_distance(A, B) >= frobenius_oracle(P, Q) - 1e-9);
    }
  }
}

TEST_CASE("motif metrics ignore residue ordering within a frame") {
  Rng rng(101);
  const std::vector<int> types_a = {0, 4, 8, 11, 14};
  const std::vector<int> types_b = {1, 4, 9, 12, 16};
  for (int trial = 0; trial < 5; ++trial) {
    const MotifFrame A = frame_of(random_points(rng, 5, 4.0), types_a);
    const MotifFrame B = frame_of(random_points(rng, 5, 4.0), types_b);
    std::vector<int> rho = {0, 1, 2, 3, 4};
    for (int i = 4; i > 0; --i)
      std::swap(rho[static_cast<std::size_t>(i)],
                rho[static_cast<std::size_t>(rng.integer(i + 1))]);
    const MotifFrame B2 = relabeled(B, rho);
    const MotifFrame A2 = relabeled(A, rho);
    for (MotifMetric m : {MotifMetric::Rmsd, MotifMetric::ChemCost,
                          MotifMetric::OneMinusLddt, MotifMetric::Frobenius}) {
      const double base = motif_distance(A, B, m);
      CHECK(motif_distance(A, B2, m) == doctest::Approx(base).epsilon(1e-9));
      CHECK(motif_distance(A2, B, m) == doctest::Approx(base).epsilon(1e-9));
    }
  }
}

namespace {

AtomCloud chain_of_cas(const std::vector<Vec3>& positions) {
  AtomCloud cloud;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    Atom a;
    a.pos = positions[i];
    a.name = "CA";
    a.element = "C";
    a.residue_index = static_cast<int>(i);
    a.is_backbone = true;
    cloud.atoms.push_back(a);
  }
  return cloud;
}

}  // namespace

TEST_CASE("contact order of an extended chain is zero") {
  std::vector<Vec3> pos;
  for (int i = 0; i < 30; ++i) pos.emplace_back(0.0, 3.8 * i, 0.0);
  const ContactOrderResult res = relative_contact_order(chain_of_cas(pos));
  CHECK(res.n_contacts == 0);
  CHECK(res.rco == 0.0);
  CHECK(res.no_contacts);
}

TEST_CASE("contact order of a hand-built hairpin") {
  // Two 15-residue strands 7.9 A apart; only same-height pairs are in
  // contact (diagonals are 8.77 A).  Contacts: (i, 29-i) for i = 0..8 with
  // separations 29, 27, ..., 13; sum 189, N = 9, L = 30 -> RCO = 0.7.
  std::vector<Vec3> pos;
  for (int i = 0; i < 15; ++i) pos.emplace_back(0.0, 3.8 * i, 0.0);
  for (int k = 0; k < 15; ++k) pos.emplace_back(7.9, 3.8 * (14 - k), 0.0);
  const ContactOrderResult res = relative_contact_order(chain_of_cas(pos));
  CHECK(res.chain_length == 30);
  CHECK(res.n_contacts == 9);
  CHECK(res.rco == doctest::Approx(189.0 / (30.0 * 9.0)).epsilon(1e-12));
}

TEST_CASE("contact order needs 13 residues to be nonzero") {
  Rng rng(71);
  std::vector<Vec3> pos;
  for (int i = 0; i < 12; ++i)
    pos.emplace_back(2.0 * rng.normal(), 2.0 * rng.normal(),
                     2.0 * rng.normal());
  const ContactOrderResult res = relative_contact_order(chain_of_cas(pos));
  CHECK(res.rco == 0.0);
  CHECK(res.n_contacts == 0);
}

TEST_CASE("radius of gyration") {
  SUBCASE("single atom") {
    const AtomCloud cloud = chain_of_cas({Vec3(1.0, 2.0, 3.0)});
    CHECK(radius_of_gyration(cloud) == 0.0);
  }
  SUBCASE("symmetric dumbbell") {
    const AtomCloud cloud =
        chain_of_cas({Vec3(0.0, 0.0, 0.0), Vec3(2.0, 0.0, 0.0)});
    CHECK(radius_of_gyration(cloud) == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("matches a two-pass recomputation") {
    Rng rng(81);
    std::vector<Vec3> pos;
    for (int i = 0; i < 100; ++i)
      pos.emplace_back(rng.normal(), rng.normal(), rng.normal());
    const AtomCloud cloud = chain_of_cas(pos);
    Vec3 mean = Vec3::Zero();
    for (const Vec3& p : pos) mean += p;
    mean /= 100.0;
    double sq = 0.0;
    for (const Vec3& p : pos) sq += (p - mean).squaredNorm();
    CHECK(radius_of_gyration(cloud) ==
          doctest::Approx(std::sqrt(sq / 100.0)).epsilon(1e-12));
    CHECK(radius_of_gyration(cloud, /*all_atoms=*/true) ==
          doctest::Approx(std::sqrt(sq / 100.0)).epsilon(1e-12));
  }
  SUBCASE("empty cloud rejected") {
    AtomCloud cloud;
    CHECK_THROWS_AS(radius_of_gyration(cloud), DataError);
  }
}

namespace {

AtomCloud design_with_ligands() {
  // Backbone square in the xy plane plus two single-atom ligand chains.
  AtomCloud cloud = chain_of_cas({Vec3(1, 0, 0), Vec3(-1, 0, 0),
                                  Vec3(0, 1, 0), Vec3(0, -1, 0)});
  Atom lig;
  lig.name = "C1";
  lig.element = "C";
  lig.is_ligand = true;
  lig.chain_id = 'X';
  lig.pos = Vec3(5, 0, 0);
  cloud.atoms.push_back(lig);
  lig.chain_id = 'Y';
  lig.pos = Vec3(0, 5, 0);
  cloud.atoms.push_back(lig);
  return cloud;
}

}  // namespace

TEST_CASE("codesignability") {
  const AtomCloud design = design_with_ligands();

  SUBCASE("rigid copies pass with zero deviations") {
    Rng rng(91);
    const Mat3 R = random_rotation(rng);
    AtomCloud refold = design;
    for (Atom& a : refold.atoms) a.pos = R * a.pos + Vec3(3, -1, 2);
    const CodesignabilityResult res = codesignable(design, refold);
    CHECK(res.pass);
    CHECK(res.backbone_rmsd <= 1e-9);
    for (double d : res.ligand_centroid_distances) CHECK(d <= 1e-9);
  }
  SUBCASE("a displaced ligand centroid fails") {
    AtomCloud refold = design;
    refold.atoms[4].pos += Vec3(0, 0, 3.0);
    const CodesignabilityResult res = codesignable(design, refold);
    CHECK(!res.pass);
    CHECK(res.backbone_rmsd <= 1e-9);
  }
  SUBCASE("boundary values from the stated thresholds") {
    // Backbone displaced +-1.5 along z in a balanced pattern: optimal
    // alignment is the identity and the RMSD is exactly 1.5.
    AtomCloud refold = design;
    refold.atoms[0].pos += Vec3(0, 0, 1.5);
    refold.atoms[1].pos += Vec3(0, 0, 1.5);
    refold.atoms[2].pos += Vec3(0, 0, -1.5);
    refold.atoms[3].pos += Vec3(0, 0, -1.5);
    refold.atoms[4].pos += Vec3(0, 0.5, 0);   // ligand X centroid off by 0.5
    refold.atoms[5].pos += Vec3(1.9, 0, 0);   // ligand Y centroid off by 1.9
    const CodesignabilityResult res = codesignable(design, refold);
    CHECK(res.backbone_rmsd == doctest::Approx(1.5).epsilon(1e-9));
    CHECK(res.pass);

    AtomCloud worse = refold;
    worse.atoms[5].pos += Vec3(0.2, 0, 0);  // 2.1 > 2.0
    CHECK(!codesignable(design, worse).pass);
  }
  SUBCASE("ligand count mismatch is an error") {
    AtomCloud refold = design;
    refold.atoms.pop_back();
    CHECK_THROWS_AS(codesignable(design, refold), DataError);
  }
}

TEST_CASE("nearest-neighbour diversity") {
  SUBCASE("identical motifs have zero nearest neighbours") {
    const std::vector<MotifFrame> motifs = {triangle_frame(5.0),
                                            triangle_frame(5.0)};
    const std::vector<double> nn = nn_diversity(motifs, MotifMetric::Rmsd);
    CHECK(nn[0] == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
    CHECK(nn[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
  }
  SUBCASE("pairwise distances 1, 2, 3 give neighbours 1, 1, 2") {
    const std::vector<MotifFrame> motifs = {
        triangle_frame(10.0), triangle_frame(11.0), triangle_frame(13.0)};
    const std::vector<double> nn = nn_diversity(motifs, MotifMetric::Rmsd);
    CHECK(nn[0] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(nn[1] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(nn[2] == doctest::Approx(2.0).epsilon(1e-9));
  }
  SUBCASE("singleton set rejected") {
    const std::vector<MotifFrame> motifs = {triangle_frame(5.0)};
    CHECK_THROWS_AS(nn_diversity(motifs, MotifMetric::Rmsd), DomainError);
  }
}

TEST_CASE("cluster ratio under complete linkage") {
  SUBCASE("all far apart") {
    const std::vector<MotifFrame> motifs = {
        triangle_frame(10.0), triangle_frame(15.0), triangle_frame(20.0)};
    CHECK(cluster_ratio(motifs) == doctest::Approx(1.0));
  }
  SUBCASE("all identical") {
    const std::vector<MotifFrame> motifs(4, triangle_frame(5.0));
    CHECK(cluster_ratio(motifs) == doctest::Approx(0.25));
  }
  SUBCASE("two tight pairs and a singleton give three fifths") {
    const std::vector<MotifFrame> motifs = {
        triangle_frame(10.0), triangle_frame(10.5), triangle_frame(20.0),
        triangle_frame(20.5), triangle_frame(40.0)};
    CHECK(cluster_ratio(motifs) == doctest::Approx(0.6).epsilon(1e-12));
  }
}
