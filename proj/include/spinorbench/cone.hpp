#pragma once

#include <cstdint>

#include "spinorbench/geometry.hpp"

namespace spinorbench {

// Identification of base spinors (1,n-1) with spinors of the cone signature (2,n-1).
// Phi satisfies Phi(gamma(X) phi) = c Gamma_0 Gamma(X) Phi(phi) with c = 1/(2 lambda),
// where cone index 0 is d_r and base index k sits at cone index k+1.
// For odd n, Phi lands in one chirality half; minus = Gamma_0 Phi then satisfies
//   minus(X.phi) = c X.Phi(phi)   (the -i X.Phi_+ rule for lambda = i/2).
struct Intertwiner {
  SpinorSpacePtr base;
  SpinorSpacePtr cone;
  cplx lambda;
  cplx c;
  CMat plus;   // Phi (Phi_+ for odd n)
  CMat minus;  // Gamma_0 Phi
  CMat left_inverse;
  // <phi, psi> = pairing_sign <d_r . minus phi, plus psi>: +1 for lambda = i/2, -1 for -i/2.
  double pairing_sign = 1.0;
  Chirality image = Chirality::none;
};

// lambda must be +-i/2.
Intertwiner build_intertwiner(int n, cplx lambda);

// ---- cone chart -----------------------------------------------------------------

// Coordinates (r, x) over a Lorentzian base, metric r^2 g - dr^2, frame (d_r, e_k / r).
ChartPtr cone_chart(ChartPtr base, double r_lo = 0.5, double r_hi = 2.0);

// Tangent vector a d_r + (lift of a base vector), base part in coordinates.
struct ConeVector {
  double dr = 0.0;
  RVec base;
};

// Levi-Civita rules of the cone for r-independent lifts:
//   nabla_{d_r} d_r = 0,  nabla_{d_r} Y = Y / r,  nabla_X d_r = X / r,
//   nabla_X Y = nabla^base_X Y + r g(X,Y) d_r.
// base_nabla_XY is the base covariant derivative of the base parts.
ConeVector cone_connection(const ConeVector& X, const ConeVector& Y, const RVec& base_nabla_XY, double g_XY, double r);

// ---- lifts ------------------------------------------------------------------------

// Spinor on the cone in the frame (d_r, e_k / r); independent of r.
SpinorFieldFn lift_spinor(const Intertwiner& I, SpinorFieldFn phi);

// Special Killing constant for degree p on lambda^2 = -1/4 bases: nabla_X d alpha = (p+1) X^flat ^ alpha.
double special_killing_constant(int p);

// r^p dr ^ alpha + (r^{p+1}/c) d alpha in cone frame components (r-independent there).
// The plus sign comes from the timelike radial direction: nabla_X Y picks up +r g(X,Y) d_r.
FormFieldFn lift_form(ChartPtr base, FormFieldFn alpha, double c);

// max over points of form_parallel_residual / spinor Killing residual with lambda = 0.
double parallel_residual(const Chart& cone, const FormFieldFn& lifted, const std::vector<RVec>& points);
double parallel_residual(const Chart& cone, const SpinorSpace& S, const SpinorFieldFn& lifted,
                         const std::vector<RVec>& points);

// Cone sample points: base points at the given radii.
std::vector<RVec> cone_points(const std::vector<RVec>& base_points, const std::vector<double>& radii);

// max_j |(d_r -| alpha^2_{Phi phi})_{j} - (V_phi^flat)_j| at r = 1.
double dirac_current_contraction_check(const Intertwiner& I, const CVec& phi, double r = 1.0);

// <phi, psi> against pairing_sign <d_r . minus(phi), plus(psi)> on the cone.
double naturality_residual(const Intertwiner& I, const CVec& phi, const CVec& psi);

}  // namespace spinorbench
