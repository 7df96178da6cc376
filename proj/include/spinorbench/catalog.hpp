#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spinorbench/cone.hpp"
#include "spinorbench/normal_forms.hpp"

namespace spinorbench {

// ---- charts --------------------------------------------------------------------------

ChartPtr minkowski(int n);

// H^{n,1} = {x in R^{2,n-1} : |x|^2 = -1} in coordinates (t, y), y in R^{n-1}:
//   x = (R cos t, R sin t, y),  R = sqrt(1 + |y|^2),
//   g = -R^2 dt^2 + |dy|^2 - (y.dy)^2 / R^2.
// Valid for 3 <= n <= 6.
ChartPtr pseudo_hyperbolic(int n);

// Flat slicing -dtau^2 + e^{2 tau} |dy|^2, scal = n(n-1).
ChartPtr de_sitter(int n);

// 2 du dv + H(u,x) du^2 + |dx|^2 with H = (1 + sin(u)/2) sum_i (i+1) x_i^2, frame built
// from the null pair d_u - (H/2) d_v and d_v.
ChartPtr pp_wave(int n);

enum class WarpKind { exp, sinh, cosh };
std::string to_string(WarpKind k);
std::optional<WarpKind> warp_kind_from_string(const std::string& s);

// f, f', f'' at t.
double warp_function(WarpKind k, double t, int derivative = 0);
// Fibre scalar curvature that makes dt^2 + f^2 k Einstein with scal = -n(n-1).
double expected_fibre_scal(WarpKind k, int fibre_dim);

// dt^2 + f(t)^2 k. Frame (e^k_0 / f, d_t, e^k_i / f). Rejects a fibre whose scalar
// curvature does not match the warp kind.
ChartPtr warped_product(ChartPtr fibre, WarpKind kind);

// ---- pseudo-hyperbolic spinors -----------------------------------------------------------

// Ambient orthonormal frame at u: column 0 is the position, columns 1..n the tangent frame.
RMat hyperbolic_ambient_frame(int n, const RVec& u);
// Spin lift S(u) of that frame acting on spinors of R^{2,n-1}.
CMat hyperbolic_spin_lift(const SpinorSpace& cone, const RVec& u);

struct KillingSpinor {
  ChartPtr chart;
  SpinorSpacePtr space;
  cplx lambda;
  SpinorFieldFn field;
  std::string spinor_id;
  // Pseudo-hyperbolic spinors remember their constant ancestor on R^{2,n-1}.
  std::optional<Intertwiner> cone_map;
  CVec ambient;
  std::optional<GenericType> ancestor_type;
};

// Restriction of a constant spinor of R^{2,n-1} (in the intertwiner's image).
KillingSpinor hyperbolic_killing_spinor(int n, const CVec& ambient, cplx lambda);

// Generic type of the 2-form of a constant spinor of R^{2,n-1}.
GenericType ambient_type(const SpinorSpace& cone, const CVec& psi);

// Factory names realizable on H^{n,1}: subset of {I_a, I_b, II_a, II_b}.
std::vector<std::string> hyperbolic_factory_types(int n);
KillingSpinor hyperbolic_factory(int n, const std::string& type, cplx lambda);

// ---- catalog ------------------------------------------------------------------------------

struct CatalogEntry {
  std::string id;
  std::string family;
  int n = 0;
  std::vector<std::string> spinors;
  cplx lambda;  // Killing number of the catalog spinors
  std::string description;
};

std::vector<CatalogEntry> catalog_entries();
CatalogEntry catalog_entry(const std::string& id);
ChartPtr catalog_chart(const std::string& id);

// lambda_hint selects the sign when the chart admits both (e.g. +-i/2); otherwise the
// catalog Killing number is used.
// Fibre, warp kind and fibre Killing number (0, 1/2, i/2 for exp, sinh, cosh) of a warped catalog id.
struct WarpedData {
  ChartPtr fibre;
  WarpKind kind = WarpKind::exp;
  cplx fibre_lambda;
};
std::optional<WarpedData> warped_data(const std::string& chart_id);

KillingSpinor catalog_spinor(const std::string& chart_id, const std::string& spinor_id,
                             std::optional<cplx> lambda_hint = std::nullopt);

}  // namespace spinorbench
