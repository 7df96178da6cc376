#include "spinorbench/forms.hpp"

#include <algorithm>
#include <cmath>

#include "spinorbench/errors.hpp"

namespace spinorbench {

namespace {

void combos(int n, int p, int start, MultiIndex& cur, std::vector<MultiIndex>& out) {
  if (static_cast<int>(cur.size()) == p) {
    out.push_back(cur);
    return;
  }
  for (int i = start; i < n; ++i) {
    cur.push_back(i);
    combos(n, p, i + 1, cur, out);
    cur.pop_back();
  }
}

// Sorts idx in place; returns the permutation sign, or 0 on a repeated index.
int sort_with_sign(MultiIndex& idx) {
  int sign = 1;
  for (size_t i = 1; i < idx.size(); ++i)
    for (size_t j = i; j > 0 && idx[j - 1] >= idx[j]; --j) {
      if (idx[j - 1] == idx[j]) return 0;
      std::swap(idx[j - 1], idx[j]);
      sign = -sign;
    }
  for (size_t i = 1; i < idx.size(); ++i)
    if (idx[i - 1] == idx[i]) return 0;
  return sign;
}

void check_same(const PForm& a, const PForm& b) {
  if (!(a.sig == b.sig) || a.degree != b.degree) throw InputError("form signature/degree mismatch");
}

}  // namespace

std::vector<MultiIndex> multi_indices(int n, int p) {
  std::vector<MultiIndex> out;
  MultiIndex cur;
  if (p >= 0 && p <= n) combos(n, p, 0, cur, out);
  return out;
}

PForm::PForm(Signature s, int p) : sig(s), degree(p) {
  if (p < 0 || p > sig.dim()) throw InputError("form degree out of range");
}

double PForm::get(MultiIndex idx) const {
  if (static_cast<int>(idx.size()) != degree) throw InputError("multi-index length != degree");
  const int s = sort_with_sign(idx);
  if (s == 0) return 0.0;
  auto it = terms.find(idx);
  return it == terms.end() ? 0.0 : s * it->second;
}

void PForm::set(MultiIndex idx, double value) {
  if (static_cast<int>(idx.size()) != degree) throw InputError("multi-index length != degree");
  for (int i : idx)
    if (i < 0 || i >= sig.dim()) throw InputError("form index out of range");
  const int s = sort_with_sign(idx);
  if (s == 0) {
    if (value != 0.0) throw InputError("repeated index in form component");
    return;
  }
  if (value == 0.0)
    terms.erase(idx);
  else
    terms[idx] = s * value;
}

RVec PForm::dense() const {
  const auto idx = multi_indices(sig.dim(), degree);
  RVec c(idx.size());
  for (size_t k = 0; k < idx.size(); ++k) {
    auto it = terms.find(idx[k]);
    c(k) = it == terms.end() ? 0.0 : it->second;
  }
  return c;
}

PForm PForm::from_dense(const Signature& s, int p, const RVec& c) {
  PForm f(s, p);
  const auto idx = multi_indices(s.dim(), p);
  if (c.size() != static_cast<Eigen::Index>(idx.size())) throw InputError("dense form length mismatch");
  for (size_t k = 0; k < idx.size(); ++k)
    if (c(k) != 0.0) f.terms[idx[k]] = c(k);
  return f;
}

RMat PForm::matrix() const {
  if (degree != 2) throw InputError("matrix() needs a 2-form");
  const int n = sig.dim();
  RMat w = RMat::Zero(n, n);
  for (const auto& [idx, c] : terms) {
    w(idx[0], idx[1]) = c;
    w(idx[1], idx[0]) = -c;
  }
  return w;
}

PForm PForm::from_matrix(const Signature& s, const RMat& w) {
  const int n = s.dim();
  if (w.rows() != n || w.cols() != n) throw InputError("2-form matrix has wrong shape");
  PForm f(s, 2);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double c = 0.5 * (w(i, j) - w(j, i));
      if (c != 0.0) f.terms[{i, j}] = c;
    }
  return f;
}

double PForm::max_abs() const {
  double m = 0.0;
  for (const auto& kv : terms) m = std::max(m, std::abs(kv.second));
  return m;
}

PForm operator+(const PForm& a, const PForm& b) {
  check_same(a, b);
  PForm out = a;
  for (const auto& [idx, c] : b.terms) {
    const double v = out.get(idx) + c;
    out.set(idx, v);
  }
  return out;
}

PForm operator*(double s, const PForm& a) {
  PForm out(a.sig, a.degree);
  if (s == 0.0) return out;
  for (const auto& [idx, c] : a.terms) out.terms[idx] = s * c;
  return out;
}

std::string to_string(CausalType c) {
  switch (c) {
    case CausalType::timelike: return "timelike";
    case CausalType::lightlike: return "lightlike";
    case CausalType::spacelike: return "spacelike";
    case CausalType::zero: return "zero";
  }
  return "?";
}

double frame_inner(const Signature& sig, const RVec& X, const RVec& Y) {
  if (X.size() != sig.dim() || Y.size() != sig.dim()) throw InputError("vector length mismatch");
  return X.dot(sig.epsilon().asDiagonal() * Y);
}

CausalType causal_type(const Signature& sig, const RVec& X, double tol) {
  const double e2 = X.squaredNorm();
  if (e2 == 0.0) return CausalType::zero;
  const double g = frame_inner(sig, X, X);
  if (std::abs(g) <= tol * e2) return CausalType::lightlike;
  return g < 0 ? CausalType::timelike : CausalType::spacelike;
}

RVec flat(const Signature& sig, const RVec& X) { return sig.epsilon().asDiagonal() * X; }
RVec sharp(const Signature& sig, const RVec& xi) { return sig.epsilon().asDiagonal() * xi; }

PForm wedge_covector(const RVec& xi, const PForm& alpha) {
  const int n = alpha.sig.dim();
  if (xi.size() != n) throw InputError("covector length mismatch");
  PForm out(alpha.sig, alpha.degree + 1);
  for (const auto& J : multi_indices(n, alpha.degree + 1)) {
    double v = 0.0;
    for (size_t k = 0; k < J.size(); ++k) {
      MultiIndex rest;
      for (size_t l = 0; l < J.size(); ++l)
        if (l != k) rest.push_back(J[l]);
      v += (k % 2 == 0 ? 1.0 : -1.0) * xi(J[k]) * alpha.get(rest);
    }
    if (v != 0.0) out.terms[J] = v;
  }
  return out;
}

PForm interior(const RVec& X, const PForm& alpha) {
  const int n = alpha.sig.dim();
  if (X.size() != n) throw InputError("vector length mismatch");
  if (alpha.degree == 0) throw InputError("interior product of a 0-form");
  PForm out(alpha.sig, alpha.degree - 1);
  for (const auto& J : multi_indices(n, alpha.degree - 1)) {
    double v = 0.0;
    for (int i = 0; i < n; ++i) {
      if (X(i) == 0.0) continue;
      MultiIndex full{i};
      full.insert(full.end(), J.begin(), J.end());
      v += X(i) * alpha.get(full);
    }
    if (v != 0.0) out.terms[J] = v;
  }
  return out;
}

CMat gamma_of_form(const SpinorSpace& S, const PForm& alpha) {
  if (!(alpha.sig == S.sig)) throw InputError("form and spinor space have different signatures");
  CMat m = CMat::Zero(S.dim_spinor, S.dim_spinor);
  if (alpha.degree == 0) {
    auto it = alpha.terms.find({});
    return it == alpha.terms.end() ? m : CMat(it->second * S.identity());
  }
  for (const auto& [idx, c] : alpha.terms) {
    double e = 1.0;
    for (int i : idx) e *= S.sig.eps(i);
    m += (c * e) * gamma_product(S, idx);
  }
  return m;
}

Spinor clifford_action(const PForm& alpha, const Spinor& phi) {
  return Spinor(phi.space, gamma_of_form(*phi.space, alpha) * phi.coeffs);
}

RVec dirac_current(const Spinor& phi) {
  const auto& S = *phi.space;
  if (S.sig.p != 1) throw InputError("dirac_current needs a Lorentzian signature");
  const int n = S.n();
  RVec lower(n);
  for (int j = 0; j < n; ++j) lower(j) = -inner_product(S, S.gamma[j] * phi.coeffs, phi.coeffs).real();
  return sharp(S.sig, lower);
}

PForm associated_p_form(const Spinor& phi, int p, double* imag_mass) {
  const auto& S = *phi.space;
  if (p < 1 || p > S.n()) throw InputError("associated_p_form degree out of range");
  // -i^{p(p-1)/2}
  const int k = (p * (p - 1) / 2) % 4;
  const cplx ipow[4] = {cplx(1, 0), cplx(0, 1), cplx(-1, 0), cplx(0, -1)};
  // With a sign-reversing adjoint, odd degrees pick up one more factor of i.
  const cplx pref = -ipow[k] * ((S.adjoint_sign < 0 && p % 2 == 1) ? cplx(0, 1) : cplx(1, 0));
  PForm out(S.sig, p);
  double im = 0.0, total = 0.0;
  for (const auto& I : multi_indices(S.n(), p)) {
    const cplx v = pref * inner_product(S, gamma_product(S, I) * phi.coeffs, phi.coeffs);
    im += std::abs(v.imag());
    total += std::abs(v);
    if (v.real() != 0.0) out.terms[I] = v.real();
  }
  if (imag_mass) *imag_mass = total > 0 ? im / total : 0.0;
  return out;
}

PForm two_form_from_spinor(const Spinor& gamma_spinor) {
  if (gamma_spinor.space->sig.p != 2) throw InputError("two_form_from_spinor needs index 2");
  return associated_p_form(gamma_spinor, 2);
}

RVec timelike_contraction(const RVec& T, const PForm& omega, double tol) {
  if (omega.degree != 2) throw InputError("timelike_contraction needs a 2-form");
  const auto& sig = omega.sig;
  if (std::abs(frame_inner(sig, T, T) + 1.0) > tol * std::max(1.0, T.squaredNorm()))
    throw InputError("contraction vector is not unit timelike");
  const RVec lower = T.transpose() * omega.matrix();
  return sharp(sig, lower);
}

}  // namespace spinorbench
