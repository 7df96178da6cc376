#pragma once

// Forward-mode jets for closed-form chart data. Jet<1> carries the gradient,
// Jet<2> also the Hessian. Dimensions are runtime, capped at kJetDim.

#include <array>
#include <cmath>
#include <type_traits>

namespace spinorbench {

constexpr int kJetDim = 8;

template <int K>
struct Jet {
  static_assert(K == 1 || K == 2);
  struct NoHessian {};
  using Hessian = std::conditional_t<K == 2, std::array<double, kJetDim * kJetDim>, NoHessian>;

  double v = 0.0;
  int n = 0;
  std::array<double, kJetDim> d{};
  Hessian h{};

  Jet() = default;
  Jet(double value) : v(value) {}  // NOLINT: constants promote implicitly

  static Jet variable(double value, int index, int dim) {
    Jet j(value);
    j.n = dim;
    j.d[index] = 1.0;
    return j;
  }

  double hess(int i, int k) const {
    if constexpr (K == 2) return h[i * kJetDim + k];
    return 0.0;
  }
};

using Jet1 = Jet<1>;
using Jet2 = Jet<2>;

namespace jet_detail {

template <int K>
int dim(const Jet<K>& a, const Jet<K>& b) {
  return a.n > b.n ? a.n : b.n;
}

// f(a) from f(a.v), f'(a.v), f''(a.v).
template <int K>
Jet<K> chain(const Jet<K>& a, double f0, double f1, double f2) {
  Jet<K> r(f0);
  r.n = a.n;
  for (int i = 0; i < a.n; ++i) r.d[i] = f1 * a.d[i];
  if constexpr (K == 2) {
    for (int i = 0; i < a.n; ++i)
      for (int k = 0; k < a.n; ++k)
        r.h[i * kJetDim + k] = f1 * a.h[i * kJetDim + k] + f2 * a.d[i] * a.d[k];
  }
  return r;
}

}  // namespace jet_detail

template <int K>
Jet<K> operator+(const Jet<K>& a, const Jet<K>& b) {
  Jet<K> r(a.v + b.v);
  r.n = jet_detail::dim(a, b);
  for (int i = 0; i < r.n; ++i) r.d[i] = a.d[i] + b.d[i];
  if constexpr (K == 2)
    for (int i = 0; i < r.n; ++i)
      for (int k = 0; k < r.n; ++k) r.h[i * kJetDim + k] = a.h[i * kJetDim + k] + b.h[i * kJetDim + k];
  return r;
}

template <int K>
Jet<K> operator-(const Jet<K>& a) {
  return jet_detail::chain(a, -a.v, -1.0, 0.0);
}

template <int K>
Jet<K> operator-(const Jet<K>& a, const Jet<K>& b) {
  return a + (-b);
}

template <int K>
Jet<K> operator*(const Jet<K>& a, const Jet<K>& b) {
  Jet<K> r(a.v * b.v);
  r.n = jet_detail::dim(a, b);
  for (int i = 0; i < r.n; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
  if constexpr (K == 2)
    for (int i = 0; i < r.n; ++i)
      for (int k = 0; k < r.n; ++k) {
        const int ik = i * kJetDim + k;
        r.h[ik] = a.h[ik] * b.v + a.v * b.h[ik] + a.d[i] * b.d[k] + b.d[i] * a.d[k];
      }
  return r;
}

template <int K>
Jet<K> operator/(const Jet<K>& a, const Jet<K>& b) {
  const double iv = 1.0 / b.v;
  return a * jet_detail::chain(b, iv, -iv * iv, 2.0 * iv * iv * iv);
}

template <int K> Jet<K> operator+(const Jet<K>& a, double s) { return a + Jet<K>(s); }
template <int K> Jet<K> operator+(double s, const Jet<K>& a) { return a + Jet<K>(s); }
template <int K> Jet<K> operator-(const Jet<K>& a, double s) { return a + Jet<K>(-s); }
template <int K> Jet<K> operator-(double s, const Jet<K>& a) { return Jet<K>(s) - a; }
template <int K> Jet<K> operator/(const Jet<K>& a, double s) { return jet_detail::chain(a, a.v / s, 1.0 / s, 0.0); }
template <int K> Jet<K> operator/(double s, const Jet<K>& a) { return Jet<K>(s) / a; }

template <int K>
Jet<K> operator*(const Jet<K>& a, double s) {
  return jet_detail::chain(a, a.v * s, s, 0.0);
}
template <int K>
Jet<K> operator*(double s, const Jet<K>& a) {
  return a * s;
}

template <int K>
Jet<K>& operator+=(Jet<K>& a, const Jet<K>& b) {
  return a = a + b;
}

template <int K>
Jet<K> sqrt(const Jet<K>& a) {
  const double s = std::sqrt(a.v);
  return jet_detail::chain(a, s, 0.5 / s, -0.25 / (s * a.v));
}
template <int K>
Jet<K> exp(const Jet<K>& a) {
  const double e = std::exp(a.v);
  return jet_detail::chain(a, e, e, e);
}
template <int K>
Jet<K> sin(const Jet<K>& a) {
  return jet_detail::chain(a, std::sin(a.v), std::cos(a.v), -std::sin(a.v));
}
template <int K>
Jet<K> cos(const Jet<K>& a) {
  return jet_detail::chain(a, std::cos(a.v), -std::sin(a.v), -std::cos(a.v));
}
template <int K>
Jet<K> sinh(const Jet<K>& a) {
  return jet_detail::chain(a, std::sinh(a.v), std::cosh(a.v), std::sinh(a.v));
}
template <int K>
Jet<K> cosh(const Jet<K>& a) {
  return jet_detail::chain(a, std::cosh(a.v), std::sinh(a.v), std::cosh(a.v));
}

// Value extraction usable for double and jets alike.
inline double value_of(double x) { return x; }
template <int K>
double value_of(const Jet<K>& j) {
  return j.v;
}

}  // namespace spinorbench
