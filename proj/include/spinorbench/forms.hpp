#pragma once

#include <map>
#include <string>
#include <vector>

#include "spinorbench/clifford.hpp"

namespace spinorbench {

using MultiIndex = std::vector<int>;

// Strictly increasing multi-indices of length p in {0..n-1}, lexicographic.
std::vector<MultiIndex> multi_indices(int n, int p);

// Exterior form with lower orthonormal-frame components, only increasing
// multi-indices stored. Missing entries are zero.
struct PForm {
  Signature sig;
  int degree = 0;
  std::map<MultiIndex, double> terms;

  PForm() = default;
  PForm(Signature s, int p);

  // Component for any index order (sign from sorting, zero on repeats).
  double get(MultiIndex idx) const;
  void set(MultiIndex idx, double value);

  // Dense coefficients in multi_indices(n, p) order.
  RVec dense() const;
  static PForm from_dense(const Signature& s, int p, const RVec& c);

  // Degree 2 only: antisymmetric matrix w_ij.
  RMat matrix() const;
  static PForm from_matrix(const Signature& s, const RMat& w);

  double max_abs() const;
  bool operator==(const PForm&) const = default;
};

PForm operator+(const PForm& a, const PForm& b);
PForm operator*(double s, const PForm& a);

enum class CausalType { timelike, lightlike, spacelike, zero };
std::string to_string(CausalType c);

double frame_inner(const Signature& sig, const RVec& X, const RVec& Y);

// Lightlike when |g(X,X)| <= tol * |X|^2 (Euclidean norm).
CausalType causal_type(const Signature& sig, const RVec& X, double tol = 1e-9);

// Lower <-> upper components through the diagonal frame metric.
RVec flat(const Signature& sig, const RVec& X);
RVec sharp(const Signature& sig, const RVec& xi);

// Vector X with upper components: (X^b wedge alpha), X^b = flat(X).
PForm wedge_covector(const RVec& xi, const PForm& alpha);

// Interior product (X ⌟ alpha)(Y...) = alpha(X, Y...).
PForm interior(const RVec& X, const PForm& alpha);

// gamma(alpha) = sum_I alpha_I eps_I gamma_I.
CMat gamma_of_form(const SpinorSpace& S, const PForm& alpha);
Spinor clifford_action(const PForm& alpha, const Spinor& phi);

// g(V, X) = -<X.phi, phi>; returns upper components of V.
RVec dirac_current(const Spinor& phi);

// alpha_I = -i^{p(p-1)/2} <gamma_I phi, phi>. The imaginary mass that is
// dropped is written to *imag_mass when requested.
PForm associated_p_form(const Spinor& phi, int p, double* imag_mass = nullptr);

// -i <e_i e_j gamma, gamma> for index-2 signatures.
PForm two_form_from_spinor(const Spinor& gamma_spinor);

// (T ⌟ omega) as a covector, returned index-raised.
RVec timelike_contraction(const RVec& T, const PForm& omega, double tol = 1e-9);

}  // namespace spinorbench
