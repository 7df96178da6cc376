#include "spinorbench/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "spinorbench/errors.hpp"

namespace spinorbench {

double Tensor4::max_abs() const {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

namespace {

Christoffel christoffel_from(const RMat& g, const std::vector<RMat>& dg) {
  const int n = static_cast<int>(g.rows());
  const RMat gi = g.inverse();
  Christoffel G(n, RMat::Zero(n, n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      RVec c(n);
      for (int l = 0; l < n; ++l) c(l) = 0.5 * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));
      const RVec up = gi * c;
      for (int k = 0; k < n; ++k) G[k](i, j) = up(k);
    }
  return G;
}

}  // namespace

Christoffel christoffel(const Chart& chart, const RVec& x) {
  const auto mj = metric_jet(chart, x, false);
  return christoffel_from(mj.g, mj.dg);
}

Christoffel christoffel_fd(const Chart& chart, const RVec& x, double h) {
  const int n = chart.dim();
  std::vector<RMat> dg(n);
  auto g = [&](const RVec& y) { return chart.metric_at(y); };
  for (int k = 0; k < n; ++k) dg[k] = directional_derivative(g, x, RVec::Unit(n, k), h);
  return christoffel_from(chart.metric_at(x), dg);
}

Tensor4 kulkarni_nomizu(const RMat& h, const RMat& k) {
  const int n = static_cast<int>(h.rows());
  Tensor4 t(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          t(a, b, c, d) = h(a, c) * k(b, d) + h(b, d) * k(a, c) - h(a, d) * k(b, c) - h(b, c) * k(a, d);
  return t;
}

CurvaturePack curvature(const Chart& chart, const RVec& x) {
  const int n = chart.dim();
  const auto mj = metric_jet(chart, x, true);
  CurvaturePack P;
  P.g = mj.g;
  const RMat gi = mj.g.inverse();
  P.gamma = christoffel_from(mj.g, mj.dg);

  // dGamma[m][k](i,j) = d_m Gamma^k_ij
  std::vector<Christoffel> dG(n, Christoffel(n, RMat::Zero(n, n)));
  for (int m = 0; m < n; ++m) {
    const RMat dgi = -gi * mj.dg[m] * gi;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        RVec c(n), dc(n);
        for (int l = 0; l < n; ++l) {
          c(l) = 0.5 * (mj.dg[i](l, j) + mj.dg[j](l, i) - mj.dg[l](i, j));
          dc(l) = 0.5 * (mj.ddg[m][i](l, j) + mj.ddg[m][j](l, i) - mj.ddg[m][l](i, j));
        }
        const RVec v = dgi * c + gi * dc;
        for (int k = 0; k < n; ++k) dG[m][k](i, j) = v(k);
      }
  }

  P.riemann = Tensor4(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double r = dG[c][a](d, b) - dG[d][a](c, b);
          for (int e = 0; e < n; ++e) r += P.gamma[a](c, e) * P.gamma[e](d, b) - P.gamma[a](d, e) * P.gamma[e](c, b);
          P.riemann(a, b, c, d) = r;
        }
  P.lowered = Tensor4(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double r = 0.0;
          for (int e = 0; e < n; ++e) r += mj.g(a, e) * P.riemann(e, b, c, d);
          P.lowered(a, b, c, d) = r;
        }

  P.ricci = RMat::Zero(n, n);
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d)
      for (int a = 0; a < n; ++a) P.ricci(b, d) += P.riemann(a, b, a, d);
  P.ricci = 0.5 * (P.ricci + P.ricci.transpose()).eval();
  P.scal = (gi * P.ricci).trace();
  P.einstein_residual = (P.ricci - (P.scal / n) * mj.g).cwiseAbs().maxCoeff();

  double bianchi = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          bianchi = std::max(bianchi, std::abs(P.riemann(a, b, c, d) + P.riemann(a, c, d, b) + P.riemann(a, d, b, c)));
  P.bianchi_residual = bianchi;

  if (n > 2) {
    P.schouten = (P.scal / (2.0 * (n - 1)) * mj.g - P.ricci) / (n - 2);
    const Tensor4 Lg = kulkarni_nomizu(P.schouten, mj.g);
    P.weyl = Tensor4(n);
    for (size_t i = 0; i < P.weyl.a.size(); ++i) P.weyl.a[i] = P.lowered.a[i] + Lg.a[i];
  } else {
    P.schouten = RMat::Zero(n, n);
    P.weyl = Tensor4(n);
  }
  return P;
}

RMat connection_form(const Chart& chart, const RVec& x, const RVec& X) {
  const int n = chart.dim();
  const RMat E = chart.frame_at(x);
  const auto dE = frame_derivatives(chart, x);
  const auto G = christoffel(chart, x);
  RMat D = RMat::Zero(n, n);  // columns nabla_X e_b in coordinates
  for (int i = 0; i < n; ++i) D += X(i) * dE[i];
  for (int k = 0; k < n; ++k) D.row(k) += X.transpose() * G[k] * E;
  return E.partialPivLu().solve(D);
}

std::vector<RMat> frame_connection(const Chart& chart, const RVec& x) {
  const RMat E = chart.frame_at(x);
  std::vector<RMat> out;
  for (int c = 0; c < chart.dim(); ++c) out.push_back(connection_form(chart, x, E.col(c)));
  return out;
}

RVec to_frame(const Chart& chart, const RVec& x, const RVec& X) {
  return chart.frame_at(x).partialPivLu().solve(X);
}

// ---- spinor fields -----------------------------------------------------------------

std::vector<CVec> spinor_covariant_derivatives(const Chart& chart, const SpinorSpace& S, const SpinorFieldFn& phi,
                                               const RVec& x) {
  if (!(chart.signature() == S.sig)) throw InputError("spinor space does not match chart signature");
  const RMat E = chart.frame_at(x);
  const CVec p0 = phi(x);
  std::vector<CVec> out;
  for (int c = 0; c < chart.dim(); ++c) {
    const CVec d = directional_derivative(phi, x, RVec(E.col(c)));
    out.push_back(d + spin_rep(S, connection_form(chart, x, E.col(c))) * p0);
  }
  return out;
}

double killing_residual_at(const Chart& chart, const SpinorSpace& S, const SpinorFieldFn& phi, cplx lambda,
                           const RVec& x) {
  const CVec p0 = phi(x);
  const auto D = spinor_covariant_derivatives(chart, S, phi, x);
  double r = 0.0;
  for (int c = 0; c < chart.dim(); ++c) r = std::max(r, (D[c] - lambda * (S.gamma[c] * p0)).norm());
  return r / std::max(1.0, p0.norm());
}

SampledResidual killing_residual(const Chart& chart, const SpinorSpace& S, const SpinorFieldFn& phi, cplx lambda,
                                 const std::vector<RVec>& points) {
  SampledResidual out;
  for (const auto& x : points) {
    const double r = killing_residual_at(chart, S, phi, lambda, x);
    out.values.push_back(r);
    out.max = std::max(out.max, r);
  }
  return out;
}

CVec dirac_operator(const Chart& chart, const SpinorSpace& S, const SpinorFieldFn& phi, const RVec& x) {
  const auto D = spinor_covariant_derivatives(chart, S, phi, x);
  CVec out = CVec::Zero(S.dim_spinor);
  for (int a = 0; a < chart.dim(); ++a) out += S.sig.eps(a) * (S.gamma[a] * D[a]);
  return out;
}

// ---- form and vector fields ---------------------------------------------------------------

std::vector<PForm> form_covariant_derivatives(const Chart& chart, const FormFieldFn& alpha, const RVec& x) {
  const int n = chart.dim();
  const RMat E = chart.frame_at(x);
  const PForm a0 = alpha(x);
  const int p = a0.degree;
  const auto idx = multi_indices(n, p);
  auto dense = [&](const RVec& y) { return alpha(y).dense(); };
  std::vector<PForm> out;
  for (int c = 0; c < n; ++c) {
    const RVec d = directional_derivative(dense, x, RVec(E.col(c)));
    const RMat w = connection_form(chart, x, E.col(c));
    RVec comp = d;
    for (size_t t = 0; t < idx.size(); ++t) {
      const auto& I = idx[t];
      double corr = 0.0;
      for (int k = 0; k < p; ++k)
        for (int b = 0; b < n; ++b) {
          if (w(b, I[k]) == 0.0) continue;
          MultiIndex J = I;
          J[k] = b;
          corr += w(b, I[k]) * a0.get(J);
        }
      comp(static_cast<Eigen::Index>(t)) -= corr;
    }
    out.push_back(PForm::from_dense(chart.signature(), p, comp));
  }
  return out;
}

PForm exterior_derivative(const Chart& chart, const FormFieldFn& alpha, const RVec& x) {
  const int n = chart.dim();
  const auto D = form_covariant_derivatives(chart, alpha, x);
  PForm out(chart.signature(), D.front().degree + 1);
  for (int c = 0; c < n; ++c) out = out + wedge_covector(RVec::Unit(n, c), D[c]);
  return out;
}

double form_parallel_residual(const Chart& chart, const FormFieldFn& alpha, const RVec& x) {
  double r = 0.0;
  for (const auto& d : form_covariant_derivatives(chart, alpha, x)) r = std::max(r, d.max_abs());
  return r;
}

RMat vector_covariant_derivative(const Chart& chart, const VectorFieldFn& V, const RVec& x) {
  const int n = chart.dim();
  const RMat E = chart.frame_at(x);
  const RVec v0 = V(x);
  RMat J(n, n);
  for (int c = 0; c < n; ++c) {
    const RVec d = directional_derivative(V, x, RVec(E.col(c)));
    J.col(c) = d + connection_form(chart, x, E.col(c)) * v0;
  }
  return J;
}

// ---- transport -----------------------------------------------------------------------------

SpinorFieldFn killing_transport(ChartPtr chart, SpinorSpacePtr S, cplx lambda, RVec x0, CVec phi0, int steps) {
  if (!chart->contains(x0)) throw InputError("transport base point outside chart");
  if (phi0.size() != S->dim_spinor) throw InputError("initial spinor has wrong dimension");
  // gamma_a gamma_b for a < b, so the right-hand side is matrix-vector work only
  std::vector<CMat> pairs;
  const int n = S->n();
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b) pairs.push_back(S->gamma[a] * S->gamma[b]);
  return [chart, S, lambda, x0, phi0, steps, pairs, n](const RVec& x) -> CVec {
    const RVec v = x - x0;
    if (v.norm() == 0.0) return phi0;
    // Generator at a point of the segment: coefficients of gamma_a gamma_b and gamma_i.
    struct Gen {
      std::vector<double> pair;
      RVec vf;
    };
    auto gen = [&](double s) {
      const RVec y = x0 + s * v;
      const RMat w = connection_form(*chart, y, v);
      Gen g{std::vector<double>(pairs.size()), to_frame(*chart, y, v)};
      int k = 0;
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) g.pair[k++] = -0.5 * S->sig.eps(a) * w(b, a);
      return g;
    };
    auto apply = [&](const Gen& g, const CVec& phi) -> CVec {
      CVec out = CVec::Zero(phi.size());
      for (size_t k = 0; k < pairs.size(); ++k)
        if (g.pair[k] != 0.0) out.noalias() += g.pair[k] * (pairs[k] * phi);
      for (int i = 0; i < n; ++i)
        if (g.vf(i) != 0.0) out.noalias() += (lambda * g.vf(i)) * (S->gamma[i] * phi);
      return out;
    };
    CVec phi = phi0;
    const double h = 1.0 / steps;
    Gen g0 = gen(0.0);
    for (int k = 0; k < steps; ++k) {
      const double s = k * h;
      const Gen gm = gen(s + 0.5 * h);
      Gen g1 = gen(s + h);
      const CVec k1 = apply(g0, phi);
      const CVec k2 = apply(gm, phi + 0.5 * h * k1);
      const CVec k3 = apply(gm, phi + 0.5 * h * k2);
      const CVec k4 = apply(g1, phi + h * k3);
      phi += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
      g0 = std::move(g1);
    }
    return phi;
  };
}

}  // namespace spinorbench
