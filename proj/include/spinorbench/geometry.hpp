#pragma once

#include <functional>
#include <type_traits>

#include "spinorbench/chart.hpp"
#include "spinorbench/forms.hpp"

namespace spinorbench {

// Central difference step used for field derivatives (fourth order stencil).
constexpr double kFdStep = 1e-3;

// G[k](i, j) = Gamma^k_ij.
using Christoffel = std::vector<RMat>;

Christoffel christoffel(const Chart& chart, const RVec& x);
Christoffel christoffel_fd(const Chart& chart, const RVec& x, double h = kFdStep);

// Dense rank-4 array, index order as written.
struct Tensor4 {
  int n = 0;
  std::vector<double> a;

  explicit Tensor4(int n_ = 0) : n(n_), a(static_cast<size_t>(n_) * n_ * n_ * n_, 0.0) {}
  double& operator()(int i, int j, int k, int l) { return a[((i * n + j) * n + k) * n + l]; }
  double operator()(int i, int j, int k, int l) const { return a[((i * n + j) * n + k) * n + l]; }
  double max_abs() const;
};

// Coordinate curvature at a point. Riemann uses
//   R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z,
// R^a_bcd = d_c Gamma^a_db - d_d Gamma^a_cb + Gamma^a_ce Gamma^e_db - Gamma^a_de Gamma^e_cb,
// Ric_bd = R^a_bad (positive on round spheres).
struct CurvaturePack {
  RMat g;
  Christoffel gamma;
  Tensor4 riemann;  // R^a_bcd
  Tensor4 lowered;  // R_abcd
  RMat ricci;
  double scal = 0.0;
  RMat schouten;  // (scal/(2(n-1)) g - Ric)/(n-2)
  Tensor4 weyl;   // lowered, R = W - schouten (*) g
  double bianchi_residual = 0.0;
  double einstein_residual = 0.0;  // max |Ric - scal/n g|
};

CurvaturePack curvature(const Chart& chart, const RVec& x);

// Kulkarni-Nomizu product (h (*) k)_abcd = h_ac k_bd + h_bd k_ac - h_ad k_bc - h_bc k_ad.
Tensor4 kulkarni_nomizu(const RMat& h, const RMat& k);

// omega(X)^a_b = theta^a(nabla_X e_b) for a coordinate vector X.
RMat connection_form(const Chart& chart, const RVec& x, const RVec& X);
// connection_form along each frame vector e_c.
std::vector<RMat> frame_connection(const Chart& chart, const RVec& x);

// Frame components of a coordinate vector.
RVec to_frame(const Chart& chart, const RVec& x, const RVec& X);

// ---- fields ------------------------------------------------------------------

using SpinorFieldFn = std::function<CVec(const RVec&)>;
using FormFieldFn = std::function<PForm(const RVec&)>;
using ScalarFieldFn = std::function<double(const RVec&)>;
using VectorFieldFn = std::function<RVec(const RVec&)>;  // frame components

// Fourth-order central difference of f along the coordinate vector v.
template <class F>
auto directional_derivative(const F& f, const RVec& x, const RVec& v, double h = kFdStep) {
  using R = std::decay_t<decltype(f(x))>;
  R out = (f(x - 2.0 * h * v) - 8.0 * f(x - h * v) + 8.0 * f(x + h * v) - f(x + 2.0 * h * v)) / (12.0 * h);
  return out;
}

// nabla_{e_c} phi for each frame direction c, spinor components in the chart frame.
std::vector<CVec> spinor_covariant_derivatives(const Chart& chart, const SpinorSpace& S, const SpinorFieldFn& phi,
                                               const RVec& x);

// max_c |nabla_{e_c} phi - lambda gamma_c phi| / max(1, |phi|).
double killing_residual_at(const Chart& chart, const SpinorSpace& S, const SpinorFieldFn& phi, cplx lambda,
                           const RVec& x);

struct SampledResidual {
  double max = 0.0;
  std::vector<double> values;
};

SampledResidual killing_residual(const Chart& chart, const SpinorSpace& S, const SpinorFieldFn& phi, cplx lambda,
                                 const std::vector<RVec>& points);

// D phi = sum_a eps_a gamma_a nabla_{e_a} phi.
CVec dirac_operator(const Chart& chart, const SpinorSpace& S, const SpinorFieldFn& phi, const RVec& x);

// (nabla_{e_c} alpha) for each c.
std::vector<PForm> form_covariant_derivatives(const Chart& chart, const FormFieldFn& alpha, const RVec& x);
// d alpha = sum_c theta^c ^ nabla_{e_c} alpha.
PForm exterior_derivative(const Chart& chart, const FormFieldFn& alpha, const RVec& x);
// max_c |nabla_{e_c} alpha|_max.
double form_parallel_residual(const Chart& chart, const FormFieldFn& alpha, const RVec& x);

// Frame components of nabla_{e_c} V, as matrix J(a, c) = (nabla_{e_c} V)^a.
RMat vector_covariant_derivative(const Chart& chart, const VectorFieldFn& V, const RVec& x);

// Solution of nabla_X phi = lambda X.phi obtained by RK4 transport along the
// straight coordinate segment from x0. Flatness of that connection is what the
// Killing residual of the result tests.
SpinorFieldFn killing_transport(ChartPtr chart, SpinorSpacePtr S, cplx lambda, RVec x0, CVec phi0, int steps = 64);

}  // namespace spinorbench
