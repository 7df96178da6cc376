#pragma once

#include <complex>
#include <memory>
#include <vector>

#include <Eigen/Dense>

namespace spinorbench {

using cplx = std::complex<double>;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;
using RVec = Eigen::VectorXd;
using RMat = Eigen::MatrixXd;

// p timelike directions first, then q spacelike ones.
struct Signature {
  int p = 0;
  int q = 0;

  Signature() = default;
  Signature(int p_, int q_);

  int dim() const { return p + q; }
  double eps(int i) const { return i < p ? -1.0 : 1.0; }
  RVec epsilon() const;
  RMat gram() const { return epsilon().asDiagonal(); }

  static Signature lorentzian(int n) { return Signature(1, n - 1); }

  bool operator==(const Signature&) const = default;
};

constexpr int kMaxCliffordDim = 12;

enum class Chirality { none, plus, minus };

// Matrix model of Cl(p,q) acting on C^{2^floor(n/2)} with
//   gamma_i gamma_j + gamma_j gamma_i = -2 eps_i delta_ij.
// beta is Hermitian and unitary, <phi,psi> = phi^* beta psi, and
//   gamma_i^* beta = adjoint_sign * beta gamma_i   for every i.
// For even n, volume is the normalized product with volume^2 = 1.
struct SpinorSpace {
  Signature sig;
  int dim_spinor = 0;
  std::vector<CMat> gamma;
  CMat beta;
  CMat volume;
  int adjoint_sign = 1;

  int n() const { return sig.dim(); }
  bool even() const { return sig.dim() % 2 == 0; }
  CMat projector(Chirality c) const;
  CMat identity() const { return CMat::Identity(dim_spinor, dim_spinor); }
};

using SpinorSpacePtr = std::shared_ptr<const SpinorSpace>;

SpinorSpacePtr build_spinor_space(const Signature& sig);

struct Spinor {
  SpinorSpacePtr space;
  CVec coeffs;
  Chirality chirality = Chirality::none;

  Spinor() = default;
  Spinor(SpinorSpacePtr s, CVec c, Chirality ch = Chirality::none);

  static Spinor zero(SpinorSpacePtr s);
};

// Ordered product gamma_{i1} ... gamma_{ik}.
CMat gamma_product(const SpinorSpace& S, const std::vector<int>& idx);

// gamma(X) = sum_i X^i gamma_i for upper frame components X^i.
CMat gamma_of_vector(const SpinorSpace& S, const RVec& X);

// Spin representation of a frame endomorphism A (A^a_b, skew w.r.t. eps):
//   sigma(A) = 1/2 sum_{a<b} eps_a A^b_a gamma_a gamma_b.
CMat spin_rep(const SpinorSpace& S, const RMat& A);

cplx inner_product(const SpinorSpace& S, const CVec& phi, const CVec& psi);
cplx inner_product(const Spinor& phi, const Spinor& psi);

Spinor clifford_action(const RVec& X, const Spinor& phi);

std::pair<Spinor, Spinor> half_spinor_split(const Spinor& phi);

}  // namespace spinorbench
