#include "spinorbench/cone.hpp"

#include <cmath>
#include <random>

#include "spinorbench/errors.hpp"

namespace spinorbench {

namespace {

CMat ordered_product(const std::vector<CMat>& g, const std::vector<int>& idx, int dim) {
  CMat m = CMat::Identity(dim, dim);
  for (int i : idx) m = m * g[i];
  return m;
}

class ConeChart : public ChartImpl<ConeChart> {
 public:
  ConeChart(ChartPtr base, Box box)
      : ChartImpl<ConeChart>("cone:" + base->id(), Signature(base->signature().p + 1, base->signature().q),
                             std::move(box)),
        base_(std::move(base)) {}

  template <class T>
  void metric_t(const T* x, T* g) const {
    const int n = base_->dim(), m = n + 1;
    std::vector<T> gb(n * n);
    base_->metric(x + 1, gb.data());
    const T r2 = x[0] * x[0];
    for (int i = 0; i < m * m; ++i) g[i] = T(0.0);
    g[0] = T(-1.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) g[(i + 1) * m + j + 1] = r2 * gb[i * n + j];
  }

  template <class T>
  void frame_t(const T* x, T* e) const {
    const int n = base_->dim(), m = n + 1;
    std::vector<T> eb(n * n);
    base_->frame(x + 1, eb.data());
    for (int i = 0; i < m * m; ++i) e[i] = T(0.0);
    e[0] = T(1.0);
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) e[(i + 1) * m + k + 1] = eb[i * n + k] / x[0];
  }

 private:
  ChartPtr base_;
};

}  // namespace

// ---- identification ----------------------------------------------------------------

Intertwiner build_intertwiner(int n, cplx lambda) {
  if (std::abs(lambda * lambda + 0.25) > 1e-12) throw InputError("cone identification needs lambda = +-i/2");
  if (n < 2 || n + 1 > kMaxCliffordDim) throw InputError("base dimension out of range");
  Intertwiner I;
  I.base = build_spinor_space(Signature::lorentzian(n));
  I.cone = build_spinor_space(Signature(2, n - 1));
  I.lambda = lambda;
  I.c = 1.0 / (2.0 * lambda);
  const auto& gb = I.base->gamma;
  const auto& G = I.cone->gamma;
  const int db = I.base->dim_spinor, dc = I.cone->dim_spinor;

  std::vector<CMat> gen;
  for (int k = 0; k < n; ++k) gen.push_back(I.c * G[0] * G[k + 1]);

  // Average a fixed random map over the finite group generated by the gammas.
  std::mt19937_64 rng(20240611);
  std::normal_distribution<double> nd;
  CMat M(dc, db);
  for (int i = 0; i < dc; ++i)
    for (int j = 0; j < db; ++j) M(i, j) = cplx(nd(rng), nd(rng));
  CMat Phi = CMat::Zero(dc, db);
  for (int mask = 0; mask < (1 << n); ++mask) {
    std::vector<int> idx;
    for (int k = 0; k < n; ++k)
      if (mask & (1 << k)) idx.push_back(k);
    Phi += ordered_product(gen, idx, dc) * M * ordered_product(gb, idx, db).inverse();
  }
  Eigen::JacobiSVD<CMat> svd(Phi);
  const auto sv = svd.singularValues();
  if (sv(db - 1) <= 1e-8 * sv(0)) throw NumericalError("intertwiner construction degenerated");

  const CMat K = Phi.adjoint() * I.cone->beta * Phi;
  const cplx kappa = (I.base->beta.inverse() * K).trace() / static_cast<double>(db);
  // |s|^2 > 0 for any rescaling s, so the sign of kappa is fixed by lambda.
  I.pairing_sign = lambda.imag() > 0 ? 1.0 : -1.0;
  if (std::abs(kappa.imag()) > 1e-8 * std::abs(kappa) || kappa.real() * I.pairing_sign <= 0.0)
    throw NumericalError("intertwiner pairing has an unexpected sign");
  Phi /= std::sqrt(std::abs(kappa));
  I.plus = Phi;
  I.minus = G[0] * Phi;
  I.left_inverse = (Phi.adjoint() * Phi).inverse() * Phi.adjoint();
  if (I.cone->even()) {
    const CMat Pp = I.cone->projector(Chirality::plus);
    I.image = (Pp * Phi - Phi).norm() <= 1e-10 * Phi.norm() ? Chirality::plus : Chirality::minus;
  }
  return I;
}

double naturality_residual(const Intertwiner& I, const CVec& phi, const CVec& psi) {
  const cplx lhs = inner_product(*I.base, phi, psi);
  const cplx rhs = I.pairing_sign * inner_product(*I.cone, I.cone->gamma[0] * (I.minus * phi), I.plus * psi);
  return std::abs(lhs - rhs) / std::max(1e-300, phi.norm() * psi.norm());
}

double dirac_current_contraction_check(const Intertwiner& I, const CVec& phi, double r) {
  if (r != 1.0) throw InputError("contraction identity is evaluated on the level r = 1");
  const int n = I.base->n();
  const Spinor base(I.base, phi);
  const RVec V = flat(I.base->sig, dirac_current(base));
  const PForm a2 = associated_p_form(Spinor(I.cone, I.plus * phi), 2);
  double res = 0.0;
  for (int j = 0; j < n; ++j) res = std::max(res, std::abs(a2.get({0, j + 1}) - V(j)));
  return res;
}

// ---- cone chart and connection -------------------------------------------------------

ChartPtr cone_chart(ChartPtr base, double r_lo, double r_hi) {
  if (!(r_lo > 0.0) || !(r_hi > r_lo)) throw InputError("cone radius range must be positive");
  if (base->signature().p != 1) throw InputError("cone base must be Lorentzian");
  const int n = base->dim();
  Box box{RVec(n + 1), RVec(n + 1)};
  box.lo(0) = r_lo;
  box.hi(0) = r_hi;
  box.lo.tail(n) = base->box().lo;
  box.hi.tail(n) = base->box().hi;
  return std::make_shared<ConeChart>(std::move(base), std::move(box));
}

ConeVector cone_connection(const ConeVector& X, const ConeVector& Y, const RVec& base_nabla_XY, double g_XY, double r) {
  if (!(r > 0.0)) throw InputError("cone radius must be positive");
  ConeVector out;
  out.dr = r * g_XY;
  out.base = base_nabla_XY + (X.dr * Y.base + Y.dr * X.base) / r;
  return out;
}

std::vector<RVec> cone_points(const std::vector<RVec>& base_points, const std::vector<double>& radii) {
  std::vector<RVec> out;
  for (const auto& x : base_points)
    for (double r : radii) {
      RVec y(x.size() + 1);
      y(0) = r;
      y.tail(x.size()) = x;
      out.push_back(y);
    }
  return out;
}

// ---- lifts ----------------------------------------------------------------------------

SpinorFieldFn lift_spinor(const Intertwiner& I, SpinorFieldFn phi) {
  const CMat P = I.plus;
  return [P, phi = std::move(phi)](const RVec& x) -> CVec { return P * phi(x.tail(x.size() - 1)); };
}

double special_killing_constant(int p) { return p + 1.0; }

FormFieldFn lift_form(ChartPtr base, FormFieldFn alpha, double c) {
  if (c == 0.0) throw InputError("special Killing constant must be nonzero");
  const Signature sig(base->signature().p + 1, base->signature().q);
  return [base, alpha = std::move(alpha), c, sig](const RVec& x) -> PForm {
    const RVec xb = x.tail(x.size() - 1);
    const PForm a = alpha(xb);
    PForm out(sig, a.degree + 1);
    // top-degree forms are closed
    const PForm da = a.degree < base->dim() ? exterior_derivative(*base, alpha, xb) : PForm(sig, 0);
    for (const auto& [I, v] : a.terms) {
      MultiIndex J{0};
      for (int i : I) J.push_back(i + 1);
      out.set(J, out.get(J) + v);
    }
    for (const auto& [I, v] : da.terms) {
      MultiIndex J;
      for (int i : I) J.push_back(i + 1);
      out.set(J, out.get(J) + v / c);
    }
    return out;
  };
}

double parallel_residual(const Chart& cone, const FormFieldFn& lifted, const std::vector<RVec>& points) {
  double r = 0.0;
  for (const auto& x : points) r = std::max(r, form_parallel_residual(cone, lifted, x));
  return r;
}

double parallel_residual(const Chart& cone, const SpinorSpace& S, const SpinorFieldFn& lifted,
                         const std::vector<RVec>& points) {
  return killing_residual(cone, S, lifted, 0.0, points).max;
}

}  // namespace spinorbench
