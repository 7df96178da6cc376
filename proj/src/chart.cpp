#include "spinorbench/chart.hpp"

#include <random>

#include "spinorbench/errors.hpp"

namespace spinorbench {

RMat Chart::metric_at(const RVec& x) const {
  const int n = dim();
  std::vector<double> g(n * n);
  metric(x.data(), g.data());
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(g.data(), n, n);
}

RMat Chart::frame_at(const RVec& x) const {
  const int n = dim();
  std::vector<double> e(n * n);
  frame(x.data(), e.data());
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(e.data(), n, n);
}

bool Chart::contains(const RVec& x) const {
  if (x.size() != dim()) return false;
  for (int i = 0; i < dim(); ++i)
    if (!(x(i) >= box_.lo(i) && x(i) <= box_.hi(i))) return false;
  return true;
}

namespace {

template <int K>
std::vector<Jet<K>> seed_jets(const RVec& x) {
  const int n = static_cast<int>(x.size());
  if (n > kJetDim) throw InputError("chart dimension exceeds jet capacity");
  std::vector<Jet<K>> xs;
  for (int i = 0; i < n; ++i) xs.push_back(Jet<K>::variable(x(i), i, n));
  return xs;
}

double radical_inverse(std::uint64_t i, int base) {
  double f = 1.0, r = 0.0;
  while (i > 0) {
    f /= base;
    r += f * static_cast<double>(i % base);
    i /= base;
  }
  return r;
}

}  // namespace

MetricJet metric_jet(const Chart& chart, const RVec& x, bool second) {
  const int n = chart.dim();
  MetricJet out;
  out.g.resize(n, n);
  out.dg.assign(n, RMat(n, n));
  if (second) {
    const auto xs = seed_jets<2>(x);
    std::vector<Jet2> g(n * n);
    chart.metric(xs.data(), g.data());
    out.ddg.assign(n, std::vector<RMat>(n, RMat(n, n)));
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Jet2& e = g[i * n + j];
        out.g(i, j) = e.v;
        for (int k = 0; k < n; ++k) {
          out.dg[k](i, j) = e.d[k];
          for (int l = 0; l < n; ++l) out.ddg[k][l](i, j) = e.hess(k, l);
        }
      }
  } else {
    const auto xs = seed_jets<1>(x);
    std::vector<Jet1> g(n * n);
    chart.metric(xs.data(), g.data());
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        out.g(i, j) = g[i * n + j].v;
        for (int k = 0; k < n; ++k) out.dg[k](i, j) = g[i * n + j].d[k];
      }
  }
  return out;
}

std::vector<RMat> frame_derivatives(const Chart& chart, const RVec& x) {
  const int n = chart.dim();
  const auto xs = seed_jets<1>(x);
  std::vector<Jet1> e(n * n);
  chart.frame(xs.data(), e.data());
  std::vector<RMat> out(n, RMat(n, n));
  for (int i = 0; i < n; ++i)
    for (int a = 0; a < n; ++a)
      for (int k = 0; k < n; ++k) out[k](i, a) = e[i * n + a].d[k];
  return out;
}

std::vector<RVec> sample_points(const Chart& chart, int count, std::uint64_t seed, double margin) {
  static constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  const int n = chart.dim();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> shift(n);
  for (auto& s : shift) s = u(rng);
  std::vector<RVec> pts;
  for (int i = 0; i < count; ++i) {
    RVec x(n);
    for (int k = 0; k < n; ++k) {
      double t = radical_inverse(static_cast<std::uint64_t>(i) + 1, kPrimes[k]) + shift[k];
      t -= std::floor(t);
      const double lo = chart.box().lo(k), hi = chart.box().hi(k), w = hi - lo;
      x(k) = lo + w * (margin + (1.0 - 2.0 * margin) * t);
    }
    pts.push_back(x);
  }
  return pts;
}

}  // namespace spinorbench
