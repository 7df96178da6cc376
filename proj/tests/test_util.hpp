#pragma once

#include <random>

#include "spinorbench/clifford.hpp"

namespace sbt {

using namespace spinorbench;

inline CVec random_cvec(std::mt19937_64& rng, int d) {
  std::normal_distribution<double> nd;
  CVec v(d);
  for (int i = 0; i < d; ++i) v(i) = cplx(nd(rng), nd(rng));
  return v;
}

inline RVec random_rvec(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> nd;
  RVec v(n);
  for (int i = 0; i < n; ++i) v(i) = nd(rng);
  return v;
}

inline RMat random_rmat(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> nd;
  RMat m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = nd(rng);
  return m;
}

}  // namespace sbt
