#include <gtest/gtest.h>

#include "spinorbench/clifford.hpp"
#include "spinorbench/errors.hpp"
#include "test_util.hpp"

using namespace spinorbench;

namespace {

double anticommutator_defect(const SpinorSpace& S) {
  double worst = 0.0;
  for (int i = 0; i < S.n(); ++i)
    for (int j = 0; j < S.n(); ++j) {
      CMat ac = S.gamma[i] * S.gamma[j] + S.gamma[j] * S.gamma[i];
      if (i == j) ac += 2.0 * S.sig.eps(i) * S.identity();
      worst = std::max(worst, ac.cwiseAbs().maxCoeff());
    }
  return worst;
}

}  // namespace

TEST(Clifford, OneDimensionalSpace) {
  auto S = build_spinor_space(Signature(0, 1));
  ASSERT_EQ(S->dim_spinor, 1);
  EXPECT_NEAR(std::abs(S->gamma[0](0, 0) - cplx(0, 1)) * std::abs(S->gamma[0](0, 0) + cplx(0, 1)), 0.0, 1e-15);
}

TEST(Clifford, LorentzianSquares) {
  auto S = build_spinor_space(Signature(1, 3));
  ASSERT_EQ(S->dim_spinor, 4);
  EXPECT_LE((S->gamma[0] * S->gamma[0] - S->identity()).norm(), 1e-14);
  EXPECT_LE((S->gamma[1] * S->gamma[1] + S->identity()).norm(), 1e-14);
}

TEST(Clifford, AnticommutatorsIndexTwo) {
  auto S = build_spinor_space(Signature(2, 3));
  EXPECT_LE(anticommutator_defect(*S), 1e-12);
}

TEST(Clifford, RelationsBetaAndChiralityAllSmallSignatures) {
  for (int p = 0; p <= 2; ++p)
    for (int q = 0; p + q <= 8; ++q) {
      if (p + q == 0) continue;
      auto S = build_spinor_space(Signature(p, q));
      SCOPED_TRACE(std::to_string(p) + "," + std::to_string(q));
      EXPECT_LE(anticommutator_defect(*S), 1e-12);
      EXPECT_LE((S->beta - S->beta.adjoint()).norm(), 1e-12);
      for (int i = 0; i < S->n(); ++i)
        EXPECT_LE((S->gamma[i].adjoint() * S->beta - S->adjoint_sign * S->beta * S->gamma[i]).norm(), 1e-12);
      if (S->even()) {
        const CMat Pp = S->projector(Chirality::plus), Pm = S->projector(Chirality::minus);
        EXPECT_LE((Pp * Pp - Pp).norm(), 1e-14);
        EXPECT_LE((Pp * Pm).norm(), 1e-14);
        EXPECT_LE((Pp + Pm - S->identity()).norm(), 1e-14);
      }
    }
}

TEST(Clifford, AdjointSigns) {
  EXPECT_EQ(build_spinor_space(Signature(1, 3))->adjoint_sign, 1);
  EXPECT_EQ(build_spinor_space(Signature(1, 4))->adjoint_sign, 1);
  EXPECT_EQ(build_spinor_space(Signature(2, 3))->adjoint_sign, -1);
  EXPECT_EQ(build_spinor_space(Signature(2, 4))->adjoint_sign, -1);
}

TEST(Clifford, BetaHasUnitSpinor) {
  auto S = build_spinor_space(Signature(2, 2));
  Eigen::SelfAdjointEigenSolver<CMat> es(S->beta);
  const CVec v = es.eigenvectors().col(S->dim_spinor - 1);
  EXPECT_NEAR(inner_product(*S, v, v).real(), 1.0, 1e-14);
}

TEST(Clifford, Deterministic) {
  auto a = build_spinor_space(Signature(2, 5));
  auto b = build_spinor_space(Signature(2, 5));
  for (int i = 0; i < a->n(); ++i) EXPECT_TRUE(a->gamma[i] == b->gamma[i]);
  EXPECT_TRUE(a->beta == b->beta);
}

TEST(Clifford, DimensionCap) {
  EXPECT_THROW(build_spinor_space(Signature(1, 12)), InputError);
  EXPECT_THROW(Signature(0, 0), InputError);
}

TEST(Clifford, VectorActionSquares) {
  std::mt19937_64 rng(7);
  auto S = build_spinor_space(Signature(1, 4));
  for (int t = 0; t < 20; ++t) {
    const RVec X = sbt::random_rvec(rng, 5);
    Spinor phi(S, sbt::random_cvec(rng, S->dim_spinor));
    const Spinor twice = clifford_action(X, clifford_action(X, phi));
    const double g = X.dot(S->sig.epsilon().asDiagonal() * X);
    EXPECT_LE((twice.coeffs + g * phi.coeffs).norm(), 1e-12 * (1 + X.squaredNorm()) * phi.coeffs.norm());
  }
  Spinor phi(S, sbt::random_cvec(rng, S->dim_spinor));
  EXPECT_EQ(clifford_action(RVec::Zero(5), phi).coeffs.norm(), 0.0);
  RVec e1 = RVec::Zero(5);
  e1(1) = 1;
  EXPECT_LE((clifford_action(e1, clifford_action(e1, phi)).coeffs + phi.coeffs).norm(), 1e-14);
}

TEST(Clifford, InnerProductLorentzianAdjointness) {
  std::mt19937_64 rng(11);
  auto S = build_spinor_space(Signature(1, 3));
  for (int t = 0; t < 100; ++t) {
    const RVec X = sbt::random_rvec(rng, 4);
    const CVec phi = sbt::random_cvec(rng, 4), psi = sbt::random_cvec(rng, 4);
    const CMat gx = gamma_of_vector(*S, X);
    const cplx lhs = inner_product(*S, gx * phi, psi), rhs = inner_product(*S, phi, gx * psi);
    EXPECT_LE(std::abs(lhs - rhs), 1e-12 * (1 + std::abs(lhs)));
    EXPECT_LE(std::abs(inner_product(*S, phi, psi) - std::conj(inner_product(*S, psi, phi))), 1e-12 * (1 + std::abs(lhs)));
    EXPECT_LE(std::abs(inner_product(*S, gx * phi, phi).imag()), 1e-12 * (1 + std::abs(lhs)));
  }
  const CVec z = CVec::Zero(4), psi = sbt::random_cvec(rng, 4);
  EXPECT_EQ(std::abs(inner_product(*S, z, psi)), 0.0);
}

TEST(Clifford, ThreeFormExpectationIsImaginary) {
  std::mt19937_64 rng(13);
  auto S = build_spinor_space(Signature(1, 4));
  for (int t = 0; t < 50; ++t) {
    CMat rho = CMat::Zero(S->dim_spinor, S->dim_spinor);
    for (int i = 0; i < 5; ++i)
      for (int j = i + 1; j < 5; ++j)
        for (int k = j + 1; k < 5; ++k) rho += sbt::random_rvec(rng, 1)(0) * gamma_product(*S, {i, j, k});
    const CVec phi = sbt::random_cvec(rng, S->dim_spinor);
    const cplx v = inner_product(*S, rho * phi, phi);
    EXPECT_LE(std::abs(v.real()), 1e-12 * (1 + std::abs(v)));
  }
}

TEST(Clifford, HalfSpinorSplit) {
  std::mt19937_64 rng(17);
  auto S = build_spinor_space(Signature(2, 4));
  Spinor phi(S, sbt::random_cvec(rng, S->dim_spinor));
  auto [plus, minus] = half_spinor_split(phi);
  EXPECT_LE((plus.coeffs + minus.coeffs - phi.coeffs).norm(), 1e-14 * phi.coeffs.norm());
  auto [p2, m2] = half_spinor_split(plus);
  EXPECT_LE((p2.coeffs - plus.coeffs).norm(), 1e-14 * phi.coeffs.norm());
  EXPECT_LE(m2.coeffs.norm(), 1e-14 * phi.coeffs.norm());
  auto [pz, mz] = half_spinor_split(Spinor::zero(S));
  EXPECT_EQ(pz.coeffs.norm() + mz.coeffs.norm(), 0.0);
  EXPECT_THROW(half_spinor_split(Spinor::zero(build_spinor_space(Signature(2, 3)))), InputError);
}
