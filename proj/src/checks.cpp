#include "spinorbench/checks.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "spinorbench/errors.hpp"

namespace spinorbench {

// ---- tolerances ------------------------------------------------------------------------

Tolerances::Tolerances()
    : values_{
          {"killing", 1e-6},       {"scal", 1e-5},        {"weyl", 1e-6},         {"ricci_image", 1e-5},
          {"current_killing", 1e-6}, {"special_killing", 1e-6}, {"dirac_eigen", 1e-6}, {"length", 1e-8},
          {"einstein", 1e-5},      {"unit_length", 1e-8}, {"weyl_contraction", 1e-6}, {"sasaki", 1e-5},
          {"brinkmann", 1e-8},     {"hessian", 1e-5},     {"pairing", 1e-6},      {"parallel", 1e-6},
          {"lemma32", 1e-12},      {"ode", 1e-10},        {"causal", 1e-9},       {"reconstruction", 1e-8},
          {"validation", 1e-10},   {"naturality", 1e-12},
      } {}

double Tolerances::operator[](const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) throw InputError("unknown tolerance key: " + key);
  return it->second;
}

void Tolerances::set(const std::string& key, double value) {
  if (!values_.count(key)) throw InputError("unknown tolerance key: " + key);
  if (!(value > 0.0) || !std::isfinite(value)) throw InputError("tolerance must be positive: " + key);
  values_[key] = value;
}

void Tolerances::parse_override(const std::string& spec) {
  const auto eq = spec.find('=');
  if (eq == std::string::npos) throw InputError("tolerance override must be key=val: " + spec);
  const std::string key = spec.substr(0, eq), val = spec.substr(eq + 1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(val.data(), val.data() + val.size(), v);
  if (ec != std::errc() || ptr != val.data() + val.size()) throw InputError("malformed tolerance value: " + spec);
  set(key, v);
}

Check make_check(std::string name, double residual, double tol, std::string note) {
  // NaN never passes.
  return Check{std::move(name), residual, tol, residual <= tol, std::move(note)};
}

bool all_pass(const std::vector<Check>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

namespace {

SpinorSpacePtr share(const SpinorSpace& S) { return std::make_shared<SpinorSpace>(S); }

// Frame components T_abcd of a lowered coordinate tensor.
Tensor4 to_frame4(const Tensor4& T, const RMat& E) {
  const int n = T.n;
  Tensor4 a(n), b(n);
  // contract one slot at a time
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int d = 0; d < n; ++d) {
          double s = 0.0;
          for (int l = 0; l < n; ++l) s += T(i, j, k, l) * E(l, d);
          a(i, j, k, d) = s;
        }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double s = 0.0;
          for (int k = 0; k < n; ++k) s += a(i, j, k, d) * E(k, c);
          b(i, j, c, d) = s;
        }
  for (int i = 0; i < n; ++i)
    for (int bb = 0; bb < n; ++bb)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double s = 0.0;
          for (int j = 0; j < n; ++j) s += b(i, j, c, d) * E(j, bb);
          a(i, bb, c, d) = s;
        }
  for (int aa = 0; aa < n; ++aa)
    for (int bb = 0; bb < n; ++bb)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double s = 0.0;
          for (int i = 0; i < n; ++i) s += a(i, bb, c, d) * E(i, aa);
          b(aa, bb, c, d) = s;
        }
  return b;
}

double gvv(const Signature& sig, const RVec& V) { return frame_inner(sig, V, V); }

}  // namespace

// ---- integrability ----------------------------------------------------------------------

IntegrabilityReport integrability_checks(const Chart& chart, const SpinorSpace& S, const SpinorFieldFn& phi,
                                         cplx lambda, const std::vector<RVec>& points, const Tolerances& tol) {
  const int n = chart.dim();
  const Signature& sig = chart.signature();
  const cplx l2 = lambda * lambda;
  IntegrabilityReport rep;
  rep.scal_expected = 4.0 * n * (n - 1) * l2.real();
  const double shift = 4.0 * (n - 1) * l2.real();
  double scal_res = 0.0, weyl_res = 0.0, img_res = 0.0, img_max = 0.0;
  CausalType worst = CausalType::zero;
  for (const auto& x : points) {
    const CurvaturePack cp = curvature(chart, x);
    scal_res = std::max(scal_res, std::abs(cp.scal - rep.scal_expected) + 4.0 * n * (n - 1) * std::abs(l2.imag()));

    const RMat E = chart.frame_at(x);
    const CVec p = phi(x);
    const Tensor4 W = to_frame4(cp.weyl, E);
    for (int c = 0; c < n; ++c)
      for (int d = c + 1; d < n; ++d) {
        PForm w(sig, 2);
        for (int a = 0; a < n; ++a)
          for (int b = a + 1; b < n; ++b) w.set({a, b}, W(a, b, c, d));
        weyl_res = std::max(weyl_res, (gamma_of_form(S, w) * p).norm() / std::max(1.0, p.norm()));
      }

    RMat M = E.transpose() * cp.ricci * E;
    for (int a = 0; a < n; ++a) M.row(a) *= sig.eps(a);
    M -= shift * RMat::Identity(n, n);
    const RMat G = M.transpose() * sig.gram() * M;
    const double scale = std::max(1.0, cp.ricci.cwiseAbs().maxCoeff());
    img_res = std::max(img_res, G.cwiseAbs().maxCoeff() / scale);
    img_max = std::max(img_max, M.cwiseAbs().maxCoeff() / scale);
    for (int b = 0; b < n; ++b) {
      const CausalType t = causal_type(sig, M.col(b), tol["ricci_image"]);
      if (t == CausalType::timelike || t == CausalType::spacelike) worst = t;
      else if (t == CausalType::lightlike && worst == CausalType::zero) worst = t;
    }
  }
  rep.scal = make_check("scal", scal_res, tol["scal"]);
  rep.weyl_action = make_check("weyl_action", weyl_res, tol["weyl"]);
  rep.ricci_image = make_check("ricci_image", img_res, tol["ricci_image"]);
  rep.ricci_image_type = img_max <= tol["ricci_image"] ? CausalType::zero : worst;
  return rep;
}

// ---- Dirac current ----------------------------------------------------------------------

VectorFieldFn dirac_current_field(const SpinorSpace& S, SpinorFieldFn phi) {
  auto sp = share(S);
  return [sp, phi = std::move(phi)](const RVec& x) -> RVec { return dirac_current(Spinor(sp, phi(x))); };
}

FormFieldFn flat_field(const Signature& sig, VectorFieldFn V) {
  return [sig, V = std::move(V)](const RVec& x) -> PForm {
    const RVec v = V(x);
    PForm out(sig, 1);
    for (int a = 0; a < v.size(); ++a) out.set({a}, sig.eps(a) * v(a));
    return out;
  };
}

std::string to_string(CurrentBehaviour b) {
  switch (b) {
    case CurrentBehaviour::lightlike: return "lightlike";
    case CurrentBehaviour::timelike_constant: return "timelike_constant";
    case CurrentBehaviour::timelike_nonconstant: return "timelike_nonconstant";
    case CurrentBehaviour::changes_type: return "changes_type";
    case CurrentBehaviour::spacelike: return "spacelike";
  }
  return "?";
}

CurrentBehaviour classify_behaviour(const std::vector<double>& g, double scale, double tol) {
  const double t = tol * std::max(1.0, scale);
  bool light = false, time = false;
  double lo = 0.0, hi = 0.0;
  for (size_t i = 0; i < g.size(); ++i) {
    if (g[i] > t) return CurrentBehaviour::spacelike;
    (g[i] < -t ? time : light) = true;
    lo = i == 0 ? g[i] : std::min(lo, g[i]);
    hi = i == 0 ? g[i] : std::max(hi, g[i]);
  }
  if (light && time) return CurrentBehaviour::changes_type;
  if (light) return CurrentBehaviour::lightlike;
  return hi - lo <= std::max(t, 1e-8 * std::abs(lo)) ? CurrentBehaviour::timelike_constant
                                                      : CurrentBehaviour::timelike_nonconstant;
}

CurrentBehaviour current_behaviour(const Chart& chart, const VectorFieldFn& V, const std::vector<RVec>& points,
                                   double tol) {
  const Signature& sig = chart.signature();
  std::vector<double> g;
  double scale = 0.0;
  for (const auto& x : points) {
    const RVec v = V(x);
    g.push_back(gvv(sig, v));
    scale = std::max(scale, v.squaredNorm());
  }
  const CurrentBehaviour b = classify_behaviour(g, scale, tol);
  if (b != CurrentBehaviour::timelike_nonconstant) return b;

  // F = -g(V,V) is the square of a smooth function near its zeros; Newton on sqrt(F)
  // from the best sample finds a lightlike point if the box contains one.
  const auto F = [&](const RVec& x) { return -gvv(sig, V(x)); };
  const size_t best = std::min_element(g.begin(), g.end(), [](double a, double c) { return a > c; }) - g.begin();
  RVec x = points[best];
  const Box& box = chart.box();
  const double thresh = tol * std::max(1.0, scale);
  for (int it = 0; it < 80; ++it) {
    const double f = F(x);
    if (f <= thresh) {
      g.push_back(-f);
      return classify_behaviour(g, scale, tol);
    }
    RVec grad(x.size());
    for (int k = 0; k < x.size(); ++k) grad(k) = directional_derivative(F, x, RVec::Unit(x.size(), k), 1e-5);
    const double gg = grad.squaredNorm();
    if (gg < 1e-24) break;
    RVec step = 2.0 * f * grad / gg;
    // stay inside the box
    double s = 1.0;
    while (s > 1e-6 && !chart.contains((x - s * step).cwiseMax(box.lo).cwiseMin(box.hi))) s *= 0.5;
    const RVec next = (x - s * step).cwiseMax(box.lo).cwiseMin(box.hi);
    if ((next - x).norm() < 1e-14) break;
    x = next;
  }
  return b;
}

CurrentReport dirac_current_report(const Chart& chart, const SpinorSpace& S, const SpinorFieldFn& phi,
                                   const std::vector<RVec>& points, const std::vector<RVec>& fit_points,
                                   const Tolerances& tol) {
  const Signature& sig = chart.signature();
  const int n = chart.dim();
  CurrentReport rep;
  const VectorFieldFn V = dirac_current_field(S, phi);

  double kres = 0.0;
  std::vector<double> g;
  double scale = 0.0;
  for (const auto& x : points) {
    const RVec v = V(x);
    g.push_back(gvv(sig, v));
    scale = std::max(scale, v.squaredNorm());
    const RMat J = vector_covariant_derivative(chart, V, x);
    double r = 0.0;
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c) r = std::max(r, std::abs(sig.eps(c) * J(c, a) + sig.eps(a) * J(a, c)));
    kres = std::max(kres, r / std::max(1.0, v.norm()));
  }
  rep.killing = make_check("current_killing", kres, tol["current_killing"]);
  rep.min_norm = *std::min_element(g.begin(), g.end());
  rep.max_norm = *std::max_element(g.begin(), g.end());
  rep.behaviour = current_behaviour(chart, V, points, tol["causal"]);

  // nabla_{e_c} dV = c e_c^flat ^ V^flat, least squares in c
  const FormFieldFn Vf = flat_field(sig, V);
  const FormFieldFn dV = [&chart, Vf](const RVec& x) { return exterior_derivative(chart, Vf, x); };
  std::vector<std::pair<RVec, RVec>> pairs;
  double vmax = 1.0;
  for (const auto& x : fit_points) {
    const auto nabla = form_covariant_derivatives(chart, dV, x);
    const PForm vf = Vf(x);
    vmax = std::max(vmax, vf.dense().cwiseAbs().maxCoeff());
    for (int c = 0; c < n; ++c) {
      RVec ec = RVec::Zero(n);
      ec(c) = sig.eps(c);
      pairs.emplace_back(nabla[c].dense(), wedge_covector(ec, vf).dense());
    }
  }
  double num = 0.0, den = 0.0;
  for (const auto& [A, B] : pairs) {
    num += A.dot(B);
    den += B.dot(B);
  }
  rep.special_killing_c = den > 0.0 ? num / den : 0.0;
  double fit = 0.0;
  for (const auto& [A, B] : pairs) fit = std::max(fit, (A - rep.special_killing_c * B).cwiseAbs().maxCoeff());
  rep.special_killing_fit = make_check("special_killing_fit", fit / vmax, tol["special_killing"],
                                       "nabla_X dV = c X ^ V, c fitted");
  return rep;
}

// ---- invariants --------------------------------------------------------------------------

Check dirac_eigen_check(const Chart& chart, const SpinorSpace& S, const SpinorFieldFn& phi, cplx lambda,
                        const std::vector<RVec>& points, double tol) {
  const double n = chart.dim();
  double r = 0.0;
  for (const auto& x : points) {
    const CVec p = phi(x);
    r = std::max(r, (dirac_operator(chart, S, phi, x) + n * lambda * p).norm() / std::max(1.0, p.norm()));
  }
  return make_check("dirac_eigenvalue", r, tol, "D phi = -n lambda phi");
}

Check length_constancy_check(const SpinorSpace& S, const SpinorFieldFn& phi, const std::vector<RVec>& points,
                             double tol) {
  double r = 0.0;
  cplx first = 0.0;
  for (size_t i = 0; i < points.size(); ++i) {
    const CVec p = phi(points[i]);
    const cplx v = inner_product(S, p, p);
    if (i == 0) first = v;
    r = std::max(r, std::abs(v - first));
  }
  return make_check("length_constant", r, tol, "<phi, phi> spread");
}

Check einstein_check(const Chart& chart, const std::vector<RVec>& points, double tol) {
  double r = 0.0;
  for (const auto& x : points) r = std::max(r, curvature(chart, x).einstein_residual);
  return make_check("einstein", r, tol, "max |Ric - scal/n g|");
}

// ---- Sasaki -------------------------------------------------------------------------------

SasakiReport sasaki_check(const Chart& chart, const VectorFieldFn& V, const std::vector<RVec>& points,
                          const Tolerances& tol) {
  const Signature& sig = chart.signature();
  const int n = chart.dim();
  const RMat eps = sig.gram();
  double unit = 0.0, kill = 0.0, weyl = 0.0, jv = 0.0, j2 = 0.0, dj = 0.0, einstein = 0.0;
  const auto Jfield = [&chart, &V](const RVec& x) -> RMat { return vector_covariant_derivative(chart, V, x); };
  for (const auto& x : points) {
    const RVec v = V(x);
    unit = std::max(unit, std::abs(gvv(sig, v) + 1.0));
    const RMat J = Jfield(x);
    kill = std::max(kill, (eps * J + (eps * J).transpose()).cwiseAbs().maxCoeff());

    const CurvaturePack cp = curvature(chart, x);
    einstein = std::max(einstein, cp.einstein_residual);
    const Tensor4 W = to_frame4(cp.weyl, chart.frame_at(x));
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double s = 0.0;
          for (int a = 0; a < n; ++a) s += v(a) * W(a, b, c, d);
          weyl = std::max(weyl, std::abs(s));
        }

    const double k = cp.scal / (n * (n - 1.0));
    jv = std::max(jv, (J * v).cwiseAbs().maxCoeff());
    const RMat want2 = k * (RMat::Identity(n, n) + v * (eps * v).transpose());
    j2 = std::max(j2, (J * J - want2).cwiseAbs().maxCoeff());

    const RMat E = chart.frame_at(x);
    for (int c = 0; c < n; ++c) {
      const RMat w = connection_form(chart, x, E.col(c));
      const RMat DJ = directional_derivative(Jfield, x, E.col(c)) + w * J - J * w;
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          const double want = k * (sig.eps(b) * v(b) * (a == c ? 1.0 : 0.0) - (c == b ? sig.eps(c) : 0.0) * v(a));
          dj = std::max(dj, std::abs(DJ(a, b) - want));
        }
    }
  }
  SasakiReport rep;
  rep.preconditions = {
      make_check("unit_timelike", unit, tol["unit_length"], "g(V,V) = -1"),
      make_check("killing_field", kill, tol["current_killing"]),
      make_check("einstein", einstein, tol["einstein"]),
      make_check("weyl_contraction", weyl, tol["weyl_contraction"], "V -| W = 0"),
  };
  rep.identities = {
      make_check("J_V", jv, tol["sasaki"], "J V = 0"),
      make_check("J_squared", j2, tol["sasaki"], "J^2 X = k (X + g(V,X) V)"),
      make_check("nabla_J", dj, tol["sasaki"], "(nabla_X J) Y = k (g(V,Y) X - g(X,Y) V)"),
  };
  rep.preconditions_ok = all_pass(rep.preconditions);
  rep.sasaki = rep.preconditions_ok && all_pass(rep.identities);
  return rep;
}

// ---- Brinkmann ------------------------------------------------------------------------------

BrinkmannReport brinkmann_check(const Chart& chart, const std::vector<RVec>& points, double tol) {
  const int n = chart.dim();
  const Signature& sig = chart.signature();
  // A frame-constant V is parallel iff omega(e_c) v = 0 for every c and point.
  RMat M(static_cast<int>(points.size()) * n * n, n);
  int row = 0;
  for (const auto& x : points) {
    for (const auto& w : frame_connection(chart, x)) {
      M.middleRows(row, n) = w;
      row += n;
    }
  }
  Eigen::JacobiSVD<RMat> svd(M, Eigen::ComputeFullV);
  const auto s = svd.singularValues();
  const double cut = tol * std::max(1.0, s(0));
  std::vector<int> null;
  for (int i = 0; i < n; ++i)
    if (s(i) <= cut) null.push_back(i);
  BrinkmannReport rep;
  rep.parallel_dim = static_cast<int>(null.size());
  if (null.empty()) {
    rep.residual = s(n - 1);
    return rep;
  }
  RMat N(n, rep.parallel_dim);
  for (int i = 0; i < rep.parallel_dim; ++i) N.col(i) = svd.matrixV().col(null[i]);
  // null vector of the restricted metric: a zero eigenvalue or a mix of signs
  Eigen::SelfAdjointEigenSolver<RMat> es(N.transpose() * sig.gram() * N);
  const RVec ev = es.eigenvalues();
  const int m = rep.parallel_dim;
  RVec y;
  int zero = -1;
  for (int i = 0; i < m; ++i)
    if (std::abs(ev(i)) <= 1e-10) zero = i;
  if (zero >= 0) y = es.eigenvectors().col(zero);
  else if (ev(0) < 0.0 && ev(m - 1) > 0.0)
    y = es.eigenvectors().col(0) / std::sqrt(-ev(0)) + es.eigenvectors().col(m - 1) / std::sqrt(ev(m - 1));
  if (y.size() == 0) {
    rep.residual = 0.0;
    return rep;
  }
  rep.vector = N * y;
  rep.vector /= rep.vector.norm();
  rep.residual = (M * rep.vector).cwiseAbs().maxCoeff();
  rep.found = rep.residual <= tol && std::abs(gvv(sig, rep.vector)) <= 1e-10;
  return rep;
}

// ---- warped -------------------------------------------------------------------------------

double warped_ode_residual(WarpKind kind, double scal_k, int m, const std::vector<double>& ts) {
  if (m < 2) throw InputError("warped fibre dimension must be at least 2");
  double r = 0.0;
  for (double t : ts) {
    const double f = warp_function(kind, t), fp = warp_function(kind, t, 1);
    r = std::max(r, std::abs(fp * fp - f * f - scal_k / (m * (m - 1.0))));
  }
  return r;
}

// ---- conformal factor ------------------------------------------------------------------

HessianReport conformal_factor_checks(const Chart& chart, const VectorFieldFn& V, const std::vector<RVec>& points,
                                      const Tolerances& tol) {
  const Signature& sig = chart.signature();
  const int n = chart.dim();
  const ScalarFieldFn f = [&sig, &V](const RVec& x) { return std::sqrt(std::max(0.0, -gvv(sig, V(x)))); };
  const VectorFieldFn grad = [&chart, &sig, f, n](const RVec& x) -> RVec {
    const RMat E = chart.frame_at(x);
    RVec g(n);
    for (int a = 0; a < n; ++a) g(a) = sig.eps(a) * directional_derivative(f, x, E.col(a));
    return g;
  };
  HessianReport rep;
  double hess = 0.0, len = 0.0, gp = 0.0;
  for (const auto& x : points) {
    const RVec v = V(x);
    const double fx = f(x);
    // sqrt is not smooth at the zero set; stay away from it.
    if (fx < 0.1) continue;
    ++rep.used_points;
    len = std::max(len, std::abs(fx * fx + gvv(sig, v)));
    const RVec gr = grad(x);
    gp = std::max(gp, std::abs(fx * fx - gvv(sig, gr)) / std::max(1.0, fx * fx));
    const RMat J = vector_covariant_derivative(chart, grad, x);
    for (int a = 0; a < n; ++a)
      for (int c = 0; c < n; ++c)
        hess = std::max(hess, std::abs(sig.eps(a) * J(a, c) - (a == c ? fx * sig.eps(a) : 0.0)) / std::max(1.0, fx));
  }
  rep.hessian = make_check("hessian", hess, tol["hessian"], "Hess f = f g");
  rep.length_pair = make_check("length_pair", len, tol["pairing"], "f^2 + g(V,V) = 0");
  rep.gradient_pair = make_check("gradient_pair", gp, tol["pairing"], "f^2 = g(grad f, grad f)");
  return rep;
}

// ---- case tag ---------------------------------------------------------------------------

std::string case_tag(cplx lambda, CurrentBehaviour b, bool sasaki) {
  if (std::abs(lambda) == 0.0) return "parallel spinor";
  if (std::abs(lambda.real()) > 0.0) return "real Killing number";
  switch (b) {
    case CurrentBehaviour::lightlike: return "lightlike current / Brinkmann-conformal class (witness-level)";
    case CurrentBehaviour::timelike_constant:
      return sasaki ? "Einstein-Sasaki" : "timelike current of constant length (Sasaki identities failed)";
    case CurrentBehaviour::timelike_nonconstant: return "timelike current of nonconstant length / warped-product class";
    case CurrentBehaviour::changes_type: return "current changes causal type (zero set reported, not resolved)";
    case CurrentBehaviour::spacelike: return "spacelike current (not a Killing spinor)";
  }
  return "?";
}

}  // namespace spinorbench
