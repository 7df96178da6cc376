#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "spinorbench/catalog.hpp"

namespace spinorbench {

// Named tolerances with per-check overrides (CLI --tol key=val).
class Tolerances {
 public:
  Tolerances();
  double operator[](const std::string& key) const;
  void set(const std::string& key, double value);
  // "key=val"; throws InputError on unknown keys or malformed values.
  void parse_override(const std::string& spec);
  const std::map<std::string, double>& values() const { return values_; }

 private:
  std::map<std::string, double> values_;
};

// One residual with the tolerance it was judged against.
struct Check {
  std::string name;
  double residual = 0.0;
  double tol = 0.0;
  bool pass = false;
  std::string note;
};

Check make_check(std::string name, double residual, double tol, std::string note = {});
bool all_pass(const std::vector<Check>& checks);

// ---- Killing spinor integrability ---------------------------------------------------

struct IntegrabilityReport {
  double scal_expected = 0.0;
  Check scal;          // |scal - 4n(n-1) lambda^2|
  Check weyl_action;   // max |W(eta) . phi| over frame 2-forms eta
  Check ricci_image;   // image of Ric - 4 lambda^2 (n-1) id totally lightlike
  CausalType ricci_image_type = CausalType::zero;
};

IntegrabilityReport integrability_checks(const Chart& chart, const SpinorSpace& S, const SpinorFieldFn& phi,
                                         cplx lambda, const std::vector<RVec>& points, const Tolerances& tol);

// ---- Dirac current -----------------------------------------------------------------------

// Frame components of V_phi, g(V, X) = -<X.phi, phi>.
VectorFieldFn dirac_current_field(const SpinorSpace& S, SpinorFieldFn phi);
FormFieldFn flat_field(const Signature& sig, VectorFieldFn V);

enum class CurrentBehaviour { lightlike, timelike_constant, timelike_nonconstant, changes_type, spacelike };
std::string to_string(CurrentBehaviour b);

struct CurrentReport {
  Check killing;  // max |L_V g|
  // least-squares c in nabla_X dV = c X ^ V over the fit points
  double special_killing_c = 0.0;
  Check special_killing_fit;
  CurrentBehaviour behaviour = CurrentBehaviour::lightlike;
  double min_norm = 0.0;  // min and max of g(V, V) over samples
  double max_norm = 0.0;
};

// fit_points carry the second-derivative fit (kept short: nested differences are costly).
CurrentReport dirac_current_report(const Chart& chart, const SpinorSpace& S, const SpinorFieldFn& phi,
                                   const std::vector<RVec>& points, const std::vector<RVec>& fit_points,
                                   const Tolerances& tol);

// Classify g(V,V) samples. Values are compared at tol * scale.
CurrentBehaviour classify_behaviour(const std::vector<double>& gvv, double scale, double tol);

// Behaviour of the current along the full box: samples plus a descent for a zero of -g(V,V).
CurrentBehaviour current_behaviour(const Chart& chart, const VectorFieldFn& V, const std::vector<RVec>& points,
                                   double tol);

// ---- Killing spinor invariants -----------------------------------------------------------

Check dirac_eigen_check(const Chart& chart, const SpinorSpace& S, const SpinorFieldFn& phi, cplx lambda,
                        const std::vector<RVec>& points, double tol);
// spread of <phi, phi> over the samples
Check length_constancy_check(const SpinorSpace& S, const SpinorFieldFn& phi, const std::vector<RVec>& points,
                             double tol);
// max |Ric - scal/n g| over the samples
Check einstein_check(const Chart& chart, const std::vector<RVec>& points, double tol);

// ---- Sasaki structure --------------------------------------------------------------------

struct SasakiReport {
  std::vector<Check> preconditions;  // unit length, Killing, Einstein, V -| W
  std::vector<Check> identities;     // J V = 0, J^2, nabla J
  bool preconditions_ok = false;
  bool sasaki = false;
};

// J(X) = nabla_X V with k = scal/(n(n-1)):
//   J V = 0,  J^2 X = k (X + g(V,X) V),  (nabla_X J) Y = k (g(V,Y) X - g(X,Y) V).
SasakiReport sasaki_check(const Chart& chart, const VectorFieldFn& V, const std::vector<RVec>& points,
                          const Tolerances& tol);

// ---- Brinkmann witness ---------------------------------------------------------------------

struct BrinkmannReport {
  bool found = false;
  RVec vector;             // frame components of the parallel null field
  double residual = 0.0;   // |nabla V| over the samples
  int parallel_dim = 0;    // dimension of the frame-constant parallel space
};

BrinkmannReport brinkmann_check(const Chart& chart, const std::vector<RVec>& points, double tol);

// ---- warped products --------------------------------------------------------------------

// max |f'^2 - f^2 - scal_k / (m (m-1))| over t, m the fibre dimension.
double warped_ode_residual(WarpKind kind, double scal_k, int fibre_dim, const std::vector<double>& ts);

// ---- conformal factor of a changing-type current ------------------------------------------

struct HessianReport {
  Check hessian;       // Hess f - f g where f > cutoff
  Check length_pair;   // f^2 + g(V, V)
  Check gradient_pair; // f^2 - g(grad f, grad f)
  int used_points = 0;
};

// f = sqrt(-g(V, V)).
HessianReport conformal_factor_checks(const Chart& chart, const VectorFieldFn& V, const std::vector<RVec>& points,
                                      const Tolerances& tol);

// ---- case tag -------------------------------------------------------------------------------

std::string case_tag(cplx lambda, CurrentBehaviour b, bool sasaki);

}  // namespace spinorbench
