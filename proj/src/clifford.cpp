#include "spinorbench/clifford.hpp"

#include <string>

#include "spinorbench/errors.hpp"

namespace spinorbench {

namespace {

CMat pauli(int k) {
  CMat m(2, 2);
  const cplx I(0, 1);
  switch (k) {
    case 1: m << 0, 1, 1, 0; break;
    case 2: m << 0, -I, I, 0; break;
    case 3: m << 1, 0, 0, -1; break;
    default: m.setIdentity();
  }
  return m;
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMat kron_chain(const std::vector<int>& which) {
  CMat out = CMat::Identity(1, 1);
  for (int w : which) out = kron(out, pauli(w));
  return out;
}

// Jordan-Wigner: n pairwise anticommuting Hermitian involutions.
std::vector<CMat> hermitian_generators(int n) {
  const int k = n / 2;
  std::vector<CMat> E;
  for (int j = 0; j < k; ++j) {
    for (int s : {1, 2}) {
      std::vector<int> w(k, 0);
      for (int l = 0; l < j; ++l) w[l] = 3;
      w[j] = s;
      E.push_back(kron_chain(w));
    }
  }
  if (n % 2 == 1) E.push_back(kron_chain(std::vector<int>(k, 3)));
  return E;
}

bool is_hermitian(const CMat& m) { return (m - m.adjoint()).norm() <= 1e-12 * (1.0 + m.norm()); }

}  // namespace

Signature::Signature(int p_, int q_) : p(p_), q(q_) {
  if (p < 0 || q < 0 || p + q < 1)
    throw InputError("invalid signature (" + std::to_string(p) + "," + std::to_string(q) + ")");
}

RVec Signature::epsilon() const {
  RVec e(dim());
  for (int i = 0; i < dim(); ++i) e(i) = eps(i);
  return e;
}

SpinorSpacePtr build_spinor_space(const Signature& sig) {
  const int n = sig.dim();
  if (n > kMaxCliffordDim)
    throw InputError("signature dimension " + std::to_string(n) + " exceeds cap " +
                     std::to_string(kMaxCliffordDim));
  auto S = std::make_shared<SpinorSpace>();
  S->sig = sig;
  const cplx I(0, 1);
  const auto E = hermitian_generators(n);
  S->dim_spinor = static_cast<int>(E.front().rows());
  for (int i = 0; i < n; ++i) {
    CMat g = I * E[i];  // squares to -1
    if (sig.eps(i) < 0) g = I * g;  // squares to +1
    S->gamma.push_back(g);
  }

  CMat beta = S->identity();
  for (int i = 0; i < sig.p; ++i) beta = beta * S->gamma[i];
  if (!is_hermitian(beta)) beta = I * beta;
  // Index two: flip the overall sign so that the 2-form of a lifted spinor
  // contracts with the radial field to the Dirac current (not its negative).
  if (sig.p == 2) beta = -beta;
  S->beta = beta;

  // gamma_i^* beta = s beta gamma_i, s must not depend on i.
  int s = 0;
  for (int i = 0; i < n; ++i) {
    const CMat lhs = S->gamma[i].adjoint() * beta;
    const CMat rhs = beta * S->gamma[i];
    int si = (lhs - rhs).norm() < 1e-12 ? 1 : ((lhs + rhs).norm() < 1e-12 ? -1 : 0);
    if (si == 0 || (s != 0 && si != s))
      throw NumericalError("beta is not compatible with the gamma matrices");
    s = si;
  }
  S->adjoint_sign = s;

  CMat vol = S->identity();
  for (int i = 0; i < n; ++i) vol = vol * S->gamma[i];
  const CMat v2 = vol * vol;
  const bool squares_to_one = (v2 - S->identity()).norm() < 1e-12;
  S->volume = (squares_to_one ? cplx(-1, 0) : cplx(0, -1)) * vol;
  return S;
}

CMat SpinorSpace::projector(Chirality c) const {
  if (!even()) throw InputError("chirality projectors need even dimension");
  if (c == Chirality::none) return identity();
  const double sgn = c == Chirality::plus ? 1.0 : -1.0;
  return 0.5 * (identity() + sgn * volume);
}

Spinor::Spinor(SpinorSpacePtr s, CVec c, Chirality ch)
    : space(std::move(s)), coeffs(std::move(c)), chirality(ch) {
  if (!space) throw InputError("spinor without space");
  if (coeffs.size() != space->dim_spinor) throw InputError("spinor length does not match space");
  if (ch != Chirality::none) {
    const CVec proj = space->projector(ch) * coeffs;
    if ((proj - coeffs).norm() > 1e-10 * (1.0 + coeffs.norm()))
      throw InputError("spinor is not in the tagged chirality");
  }
}

Spinor Spinor::zero(SpinorSpacePtr s) {
  const int d = s->dim_spinor;
  return Spinor(std::move(s), CVec::Zero(d));
}

CMat gamma_product(const SpinorSpace& S, const std::vector<int>& idx) {
  CMat m = S.identity();
  for (int i : idx) {
    if (i < 0 || i >= S.n()) throw InputError("frame index out of range");
    m = m * S.gamma[i];
  }
  return m;
}

CMat gamma_of_vector(const SpinorSpace& S, const RVec& X) {
  if (X.size() != S.n()) throw InputError("vector length does not match signature");
  CMat m = CMat::Zero(S.dim_spinor, S.dim_spinor);
  for (int i = 0; i < S.n(); ++i)
    if (X(i) != 0.0) m += X(i) * S.gamma[i];
  return m;
}

CMat spin_rep(const SpinorSpace& S, const RMat& A) {
  const int n = S.n();
  CMat m = CMat::Zero(S.dim_spinor, S.dim_spinor);
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) {
      const double c = 0.5 * S.sig.eps(a) * A(b, a);
      if (c != 0.0) m += c * (S.gamma[a] * S.gamma[b]);
    }
  return m;
}

cplx inner_product(const SpinorSpace& S, const CVec& phi, const CVec& psi) {
  return phi.dot(S.beta * psi);  // dot conjugates the first argument
}

cplx inner_product(const Spinor& phi, const Spinor& psi) {
  if (phi.space != psi.space && !(phi.space->sig == psi.space->sig))
    throw InputError("spinors live in different spaces");
  return inner_product(*phi.space, phi.coeffs, psi.coeffs);
}

Spinor clifford_action(const RVec& X, const Spinor& phi) {
  return Spinor(phi.space, gamma_of_vector(*phi.space, X) * phi.coeffs);
}

std::pair<Spinor, Spinor> half_spinor_split(const Spinor& phi) {
  const auto& S = *phi.space;
  if (!S.even()) throw InputError("half-spinor split needs even dimension");
  CVec plus = S.projector(Chirality::plus) * phi.coeffs;
  CVec minus = phi.coeffs - plus;
  return {Spinor(phi.space, plus, Chirality::plus), Spinor(phi.space, minus, Chirality::minus)};
}

}  // namespace spinorbench
