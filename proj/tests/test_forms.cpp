#include <gtest/gtest.h>

#include "spinorbench/errors.hpp"
#include "spinorbench/forms.hpp"
#include "test_util.hpp"

using namespace spinorbench;

TEST(DiracCurrent, ZeroSpinor) {
  auto S = build_spinor_space(Signature(1, 3));
  EXPECT_EQ(dirac_current(Spinor::zero(S)).norm(), 0.0);
}

TEST(DiracCurrent, CausalForRandomSpinors) {
  std::mt19937_64 rng(3);
  for (int n = 3; n <= 7; ++n) {
    auto S = build_spinor_space(Signature(1, n - 1));
    int failures = 0;
    for (int t = 0; t < 1000; ++t) {
      Spinor phi(S, sbt::random_cvec(rng, S->dim_spinor));
      const RVec V = dirac_current(phi);
      const double scale = std::pow(phi.coeffs.squaredNorm(), 2);
      if (frame_inner(S->sig, V, V) > 1e-10 * scale || V.norm() == 0.0) ++failures;
    }
    EXPECT_EQ(failures, 0) << "n=" << n;
  }
}

TEST(DiracCurrent, FirstBasisSpinorFrozen) {
  // Direct summation -<e_j phi, phi> over j, evaluated once and frozen.
  auto S = build_spinor_space(Signature(1, 3));
  CVec e = CVec::Zero(4);
  e(0) = 1;
  const RVec V = dirac_current(Spinor(S, e));
  const RVec expected = (RVec(4) << 1.0, -1.0, 0.0, 0.0).finished();
  EXPECT_LE((V - expected).norm(), 1e-14);
  for (int j = 0; j < 4; ++j) {
    const double direct = -(S->gamma[j] * e).dot(S->beta * e).real();
    EXPECT_NEAR(flat(S->sig, V)(j), direct, 1e-14);
  }
}

TEST(DiracCurrent, RejectsNonLorentzian) {
  auto S = build_spinor_space(Signature(2, 3));
  EXPECT_THROW(dirac_current(Spinor::zero(S)), InputError);
}

TEST(DiracCurrent, EigenvectorAlignment) {
  std::mt19937_64 rng(5);
  auto S = build_spinor_space(Signature(1, 4));
  for (int t = 0; t < 20; ++t) {
    // timelike unit X: gamma(X)^2 = 1, project onto the +1 eigenspace
    RVec X = sbt::random_rvec(rng, 5);
    X(0) = std::sqrt(1.0 + X.tail(4).squaredNorm());
    const CMat gx = gamma_of_vector(*S, X);
    const CVec phi = 0.5 * (S->identity() + gx) * sbt::random_cvec(rng, S->dim_spinor);
    const RVec V = dirac_current(Spinor(S, phi));
    const double cosang = std::abs(V.dot(X)) / (V.norm() * X.norm());
    EXPECT_NEAR(cosang, 1.0, 1e-8);
    // lightlike X: phi in the kernel of gamma(X)
    RVec L = X;
    L(0) = L.tail(4).norm();
    const CMat gl = gamma_of_vector(*S, L);
    const CVec psi = gl * sbt::random_cvec(rng, S->dim_spinor);
    const RVec W = dirac_current(Spinor(S, psi));
    EXPECT_NEAR(std::abs(W.dot(L)) / (W.norm() * L.norm()), 1.0, 1e-8);
  }
}

TEST(AssociatedForms, DegreeOneIsDiracCurrent) {
  std::mt19937_64 rng(9);
  auto S = build_spinor_space(Signature(1, 3));
  Spinor phi(S, sbt::random_cvec(rng, 4));
  const PForm a = associated_p_form(phi, 1);
  const RVec Vf = flat(S->sig, dirac_current(phi));
  EXPECT_LE((a.dense() - Vf).norm(), 1e-12 * Vf.norm());
  EXPECT_EQ(associated_p_form(Spinor::zero(S), 2).max_abs(), 0.0);
  EXPECT_THROW(associated_p_form(phi, 0), InputError);
  EXPECT_THROW(associated_p_form(phi, 5), InputError);
}

TEST(AssociatedForms, AllDegreesReal) {
  std::mt19937_64 rng(19);
  for (auto sig : {Signature(1, 3), Signature(1, 4), Signature(2, 3), Signature(2, 4)}) {
    auto S = build_spinor_space(sig);
    for (int t = 0; t < 10; ++t) {
      Spinor phi(S, sbt::random_cvec(rng, S->dim_spinor));
      for (int p = 1; p <= sig.dim(); ++p) {
        double im = 1.0;
        associated_p_form(phi, p, &im);
        EXPECT_LE(im, 1e-12) << "p=" << p;
      }
    }
  }
}

TEST(TwoForm, NonzeroForNonzeroSpinors) {
  std::mt19937_64 rng(23);
  auto S = build_spinor_space(Signature(2, 3));
  for (int t = 0; t < 200; ++t) {
    Spinor g(S, sbt::random_cvec(rng, S->dim_spinor));
    EXPECT_GT(two_form_from_spinor(g).max_abs(), 1e-10 * g.coeffs.squaredNorm());
  }
  EXPECT_EQ(two_form_from_spinor(Spinor::zero(S)).max_abs(), 0.0);
  EXPECT_THROW(two_form_from_spinor(Spinor::zero(build_spinor_space(Signature(1, 3)))), InputError);
}

TEST(TwoForm, PairwiseOracle) {
  auto S = build_spinor_space(Signature(2, 4));
  CVec g = CVec::Zero(S->dim_spinor);
  g(0) = 1.0;
  g(3) = cplx(0.5, -0.25);
  const PForm w = two_form_from_spinor(Spinor(S, g));
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j) {
      const cplx direct = cplx(0, -1) * (S->gamma[i] * S->gamma[j] * g).dot(S->beta * g);
      EXPECT_NEAR(w.get({i, j}), direct.real(), 1e-14);
      EXPECT_NEAR(direct.imag(), 0.0, 1e-14);
      EXPECT_NEAR(w.get({j, i}), -direct.real(), 1e-14);
    }
}

TEST(FormAction, WedgeMatchesGammaProduct) {
  std::mt19937_64 rng(29);
  auto S = build_spinor_space(Signature(1, 2));
  RVec e0 = RVec::Zero(3), e1 = RVec::Zero(3);
  e0(0) = 1;
  e1(1) = 1;
  PForm one(S->sig, 1);
  for (int i = 0; i < 3; ++i) one.set({i}, flat(S->sig, e1)(i));
  const PForm w = wedge_covector(flat(S->sig, e0), one);  // e0^b wedge e1^b
  Spinor phi(S, sbt::random_cvec(rng, 2));
  const CVec a = clifford_action(w, phi).coeffs;
  const CVec b = S->gamma[0] * S->gamma[1] * phi.coeffs;
  EXPECT_LE((a - b).norm(), 1e-14 * phi.coeffs.norm());
}

TEST(Contraction, InteriorFirstConvention) {
  const Signature sig(2, 3);
  RVec e0 = RVec::Zero(5), e1 = RVec::Zero(5);
  e0(0) = 1;
  e1(1) = 1;
  PForm b1(sig, 1);
  for (int i = 0; i < 5; ++i) b1.set({i}, flat(sig, e1)(i));
  const PForm w = wedge_covector(flat(sig, e0), b1);
  // T ⌟ (a ^ b) = a(T) b - b(T) a with a(T) = g(e0,e0) = -1.
  const RVec r = timelike_contraction(e0, w);
  EXPECT_LE((r + e1).norm(), 1e-15);
  EXPECT_EQ(timelike_contraction(e0, PForm(sig, 2)).norm(), 0.0);
  RVec e2 = RVec::Zero(5);
  e2(2) = 1;
  EXPECT_THROW(timelike_contraction(e2, w), InputError);
  EXPECT_THROW(timelike_contraction(e0, b1), InputError);
}

TEST(Contraction, SpinorFormsGiveCausalContractions) {
  std::mt19937_64 rng(31);
  auto S = build_spinor_space(Signature(2, 3));
  for (int t = 0; t < 100; ++t) {
    Spinor g(S, sbt::random_cvec(rng, S->dim_spinor));
    const PForm w = two_form_from_spinor(g);
    RVec T = sbt::random_rvec(rng, 5);
    T.head(2) *= std::sqrt(1.0 + T.tail(3).squaredNorm()) / T.head(2).norm();
    const RVec c = timelike_contraction(T, w);
    EXPECT_LE(frame_inner(S->sig, c, c), 1e-10 * c.squaredNorm());
    EXPECT_NEAR(frame_inner(S->sig, c, T), 0.0, 1e-10 * c.norm() * T.norm());
  }
}

TEST(Causal, Tags) {
  const Signature sig(1, 3);
  EXPECT_EQ(causal_type(sig, (RVec(4) << 1, 0, 0, 0).finished()), CausalType::timelike);
  EXPECT_EQ(causal_type(sig, (RVec(4) << 1, 1, 0, 0).finished()), CausalType::lightlike);
  EXPECT_EQ(causal_type(sig, (RVec(4) << 0, 1, 0, 0).finished()), CausalType::spacelike);
  EXPECT_EQ(causal_type(sig, RVec::Zero(4)), CausalType::zero);
}

TEST(PFormStorage, SignsAndDense) {
  PForm w(Signature(1, 3), 2);
  w.set({2, 0}, 1.5);
  EXPECT_EQ(w.get({0, 2}), -1.5);
  EXPECT_EQ(w.get({1, 1}), 0.0);
  const PForm w2 = PForm::from_dense(w.sig, 2, w.dense());
  EXPECT_TRUE(w == w2);
  EXPECT_TRUE(PForm::from_matrix(w.sig, w.matrix()) == w);
  PForm a(Signature(1, 3), 1);
  a.set({1}, 2.0);
  const PForm aw = wedge_covector((RVec(4) << 0, 0, 1, 0).finished(), a);
  EXPECT_EQ(aw.get({2, 1}), 2.0);
  const PForm back = interior((RVec(4) << 0, 0, 1, 0).finished(), aw);
  EXPECT_EQ(back.get({1}), 2.0);
}
