#include "spinorbench/catalog.hpp"

#include <cmath>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "spinorbench/errors.hpp"

namespace spinorbench {

namespace {

Box cube(int n, double lo, double hi) {
  return Box{RVec::Constant(n, lo), RVec::Constant(n, hi)};
}

class MinkowskiChart : public ChartImpl<MinkowskiChart> {
 public:
  explicit MinkowskiChart(int n)
      : ChartImpl<MinkowskiChart>("minkowski-" + std::to_string(n), Signature::lorentzian(n), cube(n, -1.0, 1.0)) {}

  template <class T>
  void metric_t(const T*, T* g) const {
    const int n = dim();
    for (int i = 0; i < n * n; ++i) g[i] = T(0.0);
    for (int i = 0; i < n; ++i) g[i * n + i] = T(signature().eps(i));
  }
  template <class T>
  void frame_t(const T*, T* e) const {
    const int n = dim();
    for (int i = 0; i < n * n; ++i) e[i] = T(i % (n + 1) == 0 ? 1.0 : 0.0);
  }
};

class HyperbolicChart : public ChartImpl<HyperbolicChart> {
 public:
  explicit HyperbolicChart(int n)
      : ChartImpl<HyperbolicChart>("H-" + std::to_string(n), Signature::lorentzian(n), cube(n, -1.0, 1.0)) {}

  template <class T>
  void metric_t(const T* x, T* g) const {
    const int n = dim();
    const T* y = x + 1;
    T R2(1.0);
    for (int i = 0; i < n - 1; ++i) R2 = R2 + y[i] * y[i];
    for (int i = 0; i < n * n; ++i) g[i] = T(0.0);
    g[0] = -R2;
    for (int i = 0; i < n - 1; ++i)
      for (int j = 0; j < n - 1; ++j) g[(i + 1) * n + j + 1] = T(i == j ? 1.0 : 0.0) - y[i] * y[j] / R2;
  }

  template <class T>
  void frame_t(const T* x, T* e) const {
    using std::sqrt;
    const int n = dim();
    const T* y = x + 1;
    T R2(1.0);
    for (int i = 0; i < n - 1; ++i) R2 = R2 + y[i] * y[i];
    const T R = sqrt(R2);
    for (int i = 0; i < n * n; ++i) e[i] = T(0.0);
    e[0] = 1.0 / R;
    for (int k = 1; k < n; ++k)
      for (int i = 0; i < n - 1; ++i) e[(i + 1) * n + k] = T(i == k - 1 ? 1.0 : 0.0) + y[k - 1] * y[i] / (R + 1.0);
  }
};

class DeSitterChart : public ChartImpl<DeSitterChart> {
 public:
  explicit DeSitterChart(int n)
      : ChartImpl<DeSitterChart>("desitter-" + std::to_string(n), Signature::lorentzian(n), make_box(n)) {}

  template <class T>
  void metric_t(const T* x, T* g) const {
    using std::exp;
    const int n = dim();
    for (int i = 0; i < n * n; ++i) g[i] = T(0.0);
    g[0] = T(-1.0);
    const T a = exp(2.0 * x[0]);
    for (int i = 1; i < n; ++i) g[i * n + i] = a;
  }
  template <class T>
  void frame_t(const T* x, T* e) const {
    using std::exp;
    const int n = dim();
    for (int i = 0; i < n * n; ++i) e[i] = T(0.0);
    e[0] = T(1.0);
    const T a = exp(-x[0]);
    for (int i = 1; i < n; ++i) e[i * n + i] = a;
  }

 private:
  static Box make_box(int n) {
    Box b = cube(n, -1.0, 1.0);
    b.lo(0) = -0.5;
    b.hi(0) = 0.5;
    return b;
  }
};

class PpWaveChart : public ChartImpl<PpWaveChart> {
 public:
  explicit PpWaveChart(int n)
      : ChartImpl<PpWaveChart>("ppwave-" + std::to_string(n), Signature::lorentzian(n), cube(n, -1.0, 1.0)) {}

  template <class T>
  T profile(const T* x) const {
    using std::sin;
    T s(0.0);
    for (int i = 2; i < dim(); ++i) s = s + double(i - 1) * x[i] * x[i];
    return (1.0 + 0.5 * sin(x[0])) * s;
  }

  template <class T>
  void metric_t(const T* x, T* g) const {
    const int n = dim();
    for (int i = 0; i < n * n; ++i) g[i] = T(0.0);
    g[0] = profile(x);
    g[1] = g[n] = T(1.0);
    for (int i = 2; i < n; ++i) g[i * n + i] = T(1.0);
  }
  template <class T>
  void frame_t(const T* x, T* e) const {
    const int n = dim();
    const double s = 1.0 / std::sqrt(2.0);
    const T h = profile(x);
    for (int i = 0; i < n * n; ++i) e[i] = T(0.0);
    e[0] = T(s);
    e[n] = s * (-0.5 * h - 1.0);
    e[1] = T(s);
    e[n + 1] = s * (-0.5 * h + 1.0);
    for (int i = 2; i < n; ++i) e[i * n + i] = T(1.0);
  }
};

template <class T>
T warp_t(WarpKind k, const T& t) {
  using std::cosh;
  using std::exp;
  using std::sinh;
  switch (k) {
    case WarpKind::exp: return exp(t);
    case WarpKind::sinh: return sinh(t);
    case WarpKind::cosh: return cosh(t);
  }
  return t;
}

class WarpedChart : public ChartImpl<WarpedChart> {
 public:
  WarpedChart(ChartPtr fibre, WarpKind kind)
      : ChartImpl<WarpedChart>("warped-" + to_string(kind) + "-" + std::to_string(fibre->dim() + 1),
                               Signature::lorentzian(fibre->dim() + 1), make_box(*fibre, kind)),
        fibre_(std::move(fibre)),
        kind_(kind) {}

  template <class T>
  void metric_t(const T* x, T* g) const {
    const int n = dim(), m = n - 1;
    std::vector<T> gk(m * m);
    fibre_->metric(x + 1, gk.data());
    const T f = warp_t(kind_, x[0]);
    const T f2 = f * f;
    for (int i = 0; i < n * n; ++i) g[i] = T(0.0);
    g[0] = T(1.0);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) g[(i + 1) * n + j + 1] = f2 * gk[i * m + j];
  }

  template <class T>
  void frame_t(const T* x, T* e) const {
    const int n = dim(), m = n - 1;
    std::vector<T> ek(m * m);
    fibre_->frame(x + 1, ek.data());
    const T f = warp_t(kind_, x[0]);
    for (int i = 0; i < n * n; ++i) e[i] = T(0.0);
    // column 0: fibre timelike vector, column 1: d_t, columns a >= 2: fibre e_{a-1}
    for (int i = 0; i < m; ++i) e[(i + 1) * n + 0] = ek[i * m + 0] / f;
    e[1] = T(1.0);
    for (int a = 1; a < m; ++a)
      for (int i = 0; i < m; ++i) e[(i + 1) * n + a + 1] = ek[i * m + a] / f;
  }

 private:
  static Box make_box(const Chart& fibre, WarpKind k) {
    const int m = fibre.dim();
    Box b{RVec(m + 1), RVec(m + 1)};
    b.lo(0) = k == WarpKind::sinh ? 0.6 : -0.5;
    b.hi(0) = k == WarpKind::sinh ? 1.4 : 0.5;
    b.lo.tail(m) = fibre.box().lo;
    b.hi.tail(m) = fibre.box().hi;
    return b;
  }

  ChartPtr fibre_;
  WarpKind kind_;
};

ChartPtr hyperbolic_any(int n) {
  if (n < 2 || n > kJetDim - 1) throw InputError("pseudo-hyperbolic dimension out of range");
  return std::make_shared<HyperbolicChart>(n);
}

// ---- ambient model of H^{n,1} ----------------------------------------------------------

RMat rotation_generator(int n) {
  RMat J = RMat::Zero(n + 1, n + 1);
  J(1, 0) = 1.0;
  J(0, 1) = -1.0;
  return J;
}

RMat boost_generator(const RVec& y) {
  const int m = static_cast<int>(y.size());
  RMat G = RMat::Zero(m + 2, m + 2);
  const double s = y.norm();
  const double f = s > 1e-14 ? std::asinh(s) / s : 1.0;
  for (int k = 0; k < m; ++k) G(k + 2, 0) = G(0, k + 2) = f * y(k);
  return G;
}

CMat projector_onto_image(const Intertwiner& I) {
  if (I.image == Chirality::none) return I.cone->identity();
  return I.cone->projector(I.image);
}

RVec box_centre(const Chart& c) { return 0.5 * (c.box().lo + c.box().hi); }

CVec reference_spinor(int dim) {
  CVec v(dim);
  for (int k = 0; k < dim; ++k) v(k) = cplx(1.0 + 0.25 * k, k % 2 == 0 ? 0.5 : -0.5);
  return v / v.norm();
}

int parse_dimension(const std::string& id, const std::string& prefix) {
  const std::string rest = id.substr(prefix.size());
  if (rest.empty() || rest.find_first_not_of("0123456789") != std::string::npos)
    throw InputError("malformed chart id: " + id);
  return std::stoi(rest);
}

bool starts_with(const std::string& s, const std::string& p) { return s.rfind(p, 0) == 0; }

}  // namespace

// ---- charts -----------------------------------------------------------------------------

ChartPtr minkowski(int n) {
  if (n < 2 || n > kJetDim) throw InputError("Minkowski dimension out of range");
  return std::make_shared<MinkowskiChart>(n);
}

ChartPtr pseudo_hyperbolic(int n) {
  if (n < 3 || n > 6) throw InputError("pseudo-hyperbolic chart needs 3 <= n <= 6");
  return hyperbolic_any(n);
}

ChartPtr de_sitter(int n) {
  if (n < 2 || n > kJetDim) throw InputError("de Sitter dimension out of range");
  return std::make_shared<DeSitterChart>(n);
}

ChartPtr pp_wave(int n) {
  if (n < 3 || n > kJetDim) throw InputError("pp-wave dimension out of range");
  return std::make_shared<PpWaveChart>(n);
}

std::string to_string(WarpKind k) {
  switch (k) {
    case WarpKind::exp: return "exp";
    case WarpKind::sinh: return "sinh";
    case WarpKind::cosh: return "cosh";
  }
  return "?";
}

std::optional<WarpKind> warp_kind_from_string(const std::string& s) {
  for (auto k : {WarpKind::exp, WarpKind::sinh, WarpKind::cosh})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

double warp_function(WarpKind k, double t, int derivative) {
  const bool odd = derivative % 2 == 1;
  switch (k) {
    case WarpKind::exp: return std::exp(t);
    case WarpKind::sinh: return odd ? std::cosh(t) : std::sinh(t);
    case WarpKind::cosh: return odd ? std::sinh(t) : std::cosh(t);
  }
  return 0.0;
}

double expected_fibre_scal(WarpKind k, int m) {
  const double s = static_cast<double>(m) * (m - 1);
  switch (k) {
    case WarpKind::exp: return 0.0;
    case WarpKind::sinh: return s;
    case WarpKind::cosh: return -s;
  }
  return 0.0;
}

ChartPtr warped_product(ChartPtr fibre, WarpKind kind) {
  if (fibre->signature().p != 1) throw InputError("warped product fibre must be Lorentzian");
  if (fibre->dim() + 1 > kJetDim) throw InputError("warped product dimension out of range");
  const double scal = curvature(*fibre, box_centre(*fibre)).scal;
  const double want = expected_fibre_scal(kind, fibre->dim());
  if (std::abs(scal - want) > 1e-6 * std::max(1.0, std::abs(want)))
    throw InputError("fibre scalar curvature " + std::to_string(scal) + " does not match warp " + to_string(kind));
  return std::make_shared<WarpedChart>(std::move(fibre), kind);
}

// ---- pseudo-hyperbolic spinors ----------------------------------------------------------

RMat hyperbolic_ambient_frame(int n, const RVec& u) {
  const double t = u(0);
  const RVec y = u.tail(n - 1);
  const double R = std::sqrt(1.0 + y.squaredNorm());
  RMat F = RMat::Zero(n + 1, n + 1);
  F(0, 0) = R * std::cos(t);
  F(1, 0) = R * std::sin(t);
  F.col(0).tail(n - 1) = y;
  F(0, 1) = -std::sin(t);
  F(1, 1) = std::cos(t);
  for (int k = 0; k < n - 1; ++k) {
    F(0, k + 2) = y(k) * std::cos(t);
    F(1, k + 2) = y(k) * std::sin(t);
    F.col(k + 2).tail(n - 1) = y(k) * y / (R + 1.0);
    F(k + 2, k + 2) += 1.0;
  }
  return F;
}

CMat hyperbolic_spin_lift(const SpinorSpace& cone, const RVec& u) {
  const int n = cone.n() - 1;
  const CMat a = (u(0) * spin_rep(cone, rotation_generator(n))).exp();
  const CMat b = spin_rep(cone, boost_generator(u.tail(n - 1))).exp();
  return a * b;
}

GenericType ambient_type(const SpinorSpace& cone, const CVec& psi) {
  const auto space = std::make_shared<SpinorSpace>(cone);
  return classify(operator_from_form(associated_p_form(Spinor(space, psi), 2))).type;
}

KillingSpinor hyperbolic_killing_spinor(int n, const CVec& ambient, cplx lambda) {
  KillingSpinor ks;
  ks.chart = pseudo_hyperbolic(n);
  const Intertwiner I = build_intertwiner(n, lambda);
  if (ambient.size() != I.cone->dim_spinor) throw InputError("ambient spinor has wrong dimension");
  if (ambient.norm() == 0.0) throw InputError("Killing spinors have no zeros; ambient spinor is zero");
  if ((ambient - I.plus * (I.left_inverse * ambient)).norm() > 1e-10 * ambient.norm())
    throw InputError("ambient spinor is not in the chirality matched to lambda");
  ks.space = I.base;
  ks.lambda = lambda;
  ks.cone_map = I;
  ks.ambient = ambient;
  try {
    ks.ancestor_type = ambient_type(*I.cone, ambient);
  } catch (const NumericalError&) {
  }
  const CMat L = I.left_inverse;
  const SpinorSpacePtr cone = I.cone;
  ks.field = [n, L, cone, ambient](const RVec& u) -> CVec {
    const CMat a = (-u(0) * spin_rep(*cone, rotation_generator(n))).exp();
    const CMat b = (-spin_rep(*cone, boost_generator(u.tail(n - 1)))).exp();
    return L * (b * (a * ambient));
  };
  return ks;
}

namespace {

std::optional<GenericType> type_from_name(const std::string& s) {
  if (s == "I_a") return GenericType::I_a;
  if (s == "I_b") return GenericType::I_b;
  if (s == "II_a") return GenericType::II_a;
  if (s == "II_b") return GenericType::II_b;
  return std::nullopt;
}

// Deterministic candidate list: basis spinors, then e_k + e_l and e_k + i e_l.
std::optional<CVec> find_ambient(const Intertwiner& I, GenericType want) {
  const int d = I.cone->dim_spinor;
  const CMat P = projector_onto_image(I);
  auto try_one = [&](const CVec& v) -> std::optional<CVec> {
    const CVec w = P * v;
    if (w.norm() < 1e-9) return std::nullopt;
    try {
      if (ambient_type(*I.cone, w) == want) return w;
    } catch (const NumericalError&) {
    }
    return std::nullopt;
  };
  for (int k = 0; k < d; ++k)
    if (auto r = try_one(CVec::Unit(d, k))) return r;
  for (int k = 0; k < d; ++k)
    for (int l = k + 1; l < d; ++l)
      for (cplx z : {cplx(1, 0), cplx(0, 1)})
        if (auto r = try_one(CVec::Unit(d, k) + z * CVec::Unit(d, l))) return r;
  return std::nullopt;
}

}  // namespace

std::vector<std::string> hyperbolic_factory_types(int n) {
  pseudo_hyperbolic(n);
  const Intertwiner I = build_intertwiner(n, cplx(0, 0.5));
  std::vector<std::string> out;
  for (const char* name : {"I_a", "I_b", "II_a", "II_b"})
    if (find_ambient(I, *type_from_name(name))) out.emplace_back(name);
  return out;
}

KillingSpinor hyperbolic_factory(int n, const std::string& type, cplx lambda) {
  pseudo_hyperbolic(n);
  const Intertwiner I = build_intertwiner(n, lambda);
  CVec psi;
  if (type == "random") {
    std::mt19937_64 rng(n);
    std::normal_distribution<double> nd;
    psi.resize(I.cone->dim_spinor);
    for (auto& v : psi) v = cplx(nd(rng), nd(rng));
    psi = projector_onto_image(I) * psi;
  } else {
    const auto want = type_from_name(type);
    if (!want) throw InputError("unknown spinor factory: " + type);
    const auto found = find_ambient(I, *want);
    if (!found) throw InputError("type " + type + " is not realizable on H-" + std::to_string(n));
    psi = *found;
  }
  auto ks = hyperbolic_killing_spinor(n, psi, lambda);
  ks.spinor_id = type;
  return ks;
}

// ---- catalog --------------------------------------------------------------------------------

std::vector<CatalogEntry> catalog_entries() {
  std::vector<CatalogEntry> out;
  for (int n = 3; n <= 6; ++n) {
    const std::string N = std::to_string(n);
    out.push_back({"minkowski-" + N, "minkowski", n, {"constant", "transport"}, 0.0, "flat R^{1,n-1}"});
    std::vector<std::string> hs = hyperbolic_factory_types(n);
    hs.push_back("random");
    hs.push_back("transport");
    out.push_back({"H-" + N, "pseudo_hyperbolic", n, hs, cplx(0, 0.5), "quadric |x|^2 = -1 in R^{2,n-1}"});
    out.push_back({"desitter-" + N, "de_sitter", n, {"transport"}, 0.5, "flat slicing of de Sitter space"});
    for (auto k : {WarpKind::exp, WarpKind::sinh, WarpKind::cosh})
      out.push_back({"warped-" + to_string(k) + "-" + N, "warped", n, {"transport"}, cplx(0, 0.5),
                     "dt^2 + f(t)^2 k with f = " + to_string(k)});
    out.push_back({"ppwave-" + N, "pp_wave", n, {"parallel"}, 0.0, "plane-fronted wave"});
  }
  return out;
}

CatalogEntry catalog_entry(const std::string& id) {
  for (auto& e : catalog_entries())
    if (e.id == id) return e;
  throw InputError("unknown chart id: " + id);
}

ChartPtr catalog_chart(const std::string& id) {
  if (starts_with(id, "cone:")) return cone_chart(catalog_chart(id.substr(5)));
  if (starts_with(id, "minkowski-")) return minkowski(parse_dimension(id, "minkowski-"));
  if (starts_with(id, "H-")) return pseudo_hyperbolic(parse_dimension(id, "H-"));
  if (starts_with(id, "desitter-")) return de_sitter(parse_dimension(id, "desitter-"));
  if (starts_with(id, "ppwave-")) return pp_wave(parse_dimension(id, "ppwave-"));
  if (auto w = warped_data(id)) return warped_product(w->fibre, w->kind);
  throw InputError("unknown chart id: " + id);
}

std::optional<WarpedData> warped_data(const std::string& id) {
  for (auto k : {WarpKind::exp, WarpKind::sinh, WarpKind::cosh}) {
    const std::string pre = "warped-" + to_string(k) + "-";
    if (!starts_with(id, pre)) continue;
    const int n = parse_dimension(id, pre);
    if (n < 3 || n > kJetDim) throw InputError("warped product dimension out of range");
    switch (k) {
      case WarpKind::exp: return WarpedData{minkowski(n - 1), k, 0.0};
      case WarpKind::sinh: return WarpedData{de_sitter(n - 1), k, 0.5};
      case WarpKind::cosh: return WarpedData{hyperbolic_any(n - 1), k, cplx(0, 0.5)};
    }
  }
  return std::nullopt;
}

KillingSpinor catalog_spinor(const std::string& chart_id, const std::string& spinor_id,
                             std::optional<cplx> lambda_hint) {
  const CatalogEntry entry = catalog_entry(chart_id);
  bool listed = false;
  for (const auto& s : entry.spinors) listed = listed || s == spinor_id;
  if (!listed && !(entry.family == "pseudo_hyperbolic" && spinor_id == "random"))
    throw InputError("unknown spinor id '" + spinor_id + "' for chart " + chart_id);

  // The sign of lambda may be chosen when the chart admits both.
  cplx lambda = entry.lambda;
  if (lambda_hint && std::abs(*lambda_hint * *lambda_hint - lambda * lambda) < 1e-12) lambda = *lambda_hint;

  if (entry.family == "pseudo_hyperbolic" && spinor_id != "transport")
    return hyperbolic_factory(entry.n, spinor_id, lambda);

  KillingSpinor ks;
  ks.chart = catalog_chart(chart_id);
  ks.space = build_spinor_space(ks.chart->signature());
  ks.lambda = lambda;
  ks.spinor_id = spinor_id;
  const int d = ks.space->dim_spinor;
  if (spinor_id == "constant") {
    const CVec c = reference_spinor(d);
    ks.field = [c](const RVec&) { return c; };
  } else if (spinor_id == "parallel") {
    // Kernel of Clifford multiplication by the null field d_v = (e_1 - e_0)/sqrt(2).
    RVec l = RVec::Zero(entry.n);
    l(0) = -1.0;
    l(1) = 1.0;
    const CMat G = gamma_of_vector(*ks.space, l);
    Eigen::FullPivLU<CMat> lu(G);
    const CMat K = lu.kernel();
    const CVec c = K.col(0) / K.col(0).norm();
    ks.field = [c](const RVec&) { return c; };
  } else {
    ks.field = killing_transport(ks.chart, ks.space, lambda, box_centre(*ks.chart), reference_spinor(d));
  }
  return ks;
}

}  // namespace spinorbench
