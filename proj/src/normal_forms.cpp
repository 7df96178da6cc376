#include "spinorbench/normal_forms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "spinorbench/errors.hpp"

namespace spinorbench {

namespace {

constexpr double kRankTol = 1e-10;
constexpr double kClusterTol = 1e-3;

RMat Bnu(double nu) {
  RMat m(2, 2);
  m << 0, -nu, nu, 0;
  return m;
}

RMat antidiag4(double s) {
  RMat a = RMat::Zero(4, 4);
  a(0, 3) = -s;
  a(1, 2) = s;
  a(2, 1) = s;
  a(3, 0) = -s;
  return a;
}

RMat pair3(double outer) {  // [[0,0,o],[0,-o... ]] helper for 6x6 (2,4) lines
  RMat a = RMat::Zero(6, 6);
  const RMat I2 = RMat::Identity(2, 2);
  a.block(0, 4, 2, 2) = outer * I2;
  a.block(4, 0, 2, 2) = outer * I2;
  a.block(2, 2, 2, 2) = I2;
  return a;
}

// Orthonormal basis of the numerical null space of M.
RMat null_space(const RMat& M, double scale) {
  const Eigen::Index n = M.cols();
  if (M.rows() == 0) return RMat::Identity(n, n);
  Eigen::JacobiSVD<RMat> svd(M, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double thr = kRankTol * std::max(scale, s.size() ? s(0) : 0.0);
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > thr) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

// ker(P^infinity) by the ascending chain ker P^{j+1} = {x : P x in ker P^j}.
// ref sets the rank scale when P itself may be pure roundoff (b^2 + nu^2 for b^2 = -nu^2).
RMat generalized_kernel(const RMat& P, double ref = 0.0) {
  const Eigen::Index n = P.rows();
  const double scale = std::max({P.norm(), ref, 1e-300});
  RMat K = null_space(P, scale);
  for (int it = 0; it < n; ++it) {
    if (K.cols() == 0 || K.cols() == n) break;
    const RMat proj = RMat::Identity(n, n) - K * K.transpose();
    RMat K2 = null_space(proj * P, scale);
    if (K2.cols() == K.cols()) break;
    K = K2;
  }
  return K;
}

struct Piece {
  Block block;
  RMat cols;  // adapted basis vectors, n x size
};

struct Group {
  enum Kind { zero, real, imag, complex } kind;
  double a = 0.0;  // lambda, nu (imag) or xi (complex)
  double c = 0.0;  // nu (complex)
  int mult = 0;    // total algebraic multiplicity
};

// ---- nilpotent part (eigenvalue zero) -------------------------------------

int nilpotency_index(const RMat& N, const RMat& M, double scale) {
  RMat P = M;
  const double nrm = std::max(1.0, N.norm());
  for (int k = 1; k <= M.cols() + 1; ++k) {
    P = N * P;
    if (P.norm() <= 1e-9 * std::pow(nrm, k) * std::max(1.0, M.norm()) * std::max(scale, 1.0)) return k;
  }
  throw NumericalError("operator is not nilpotent on its zero eigenspace");
}

RVec matpow_apply(const RMat& N, const RVec& x, int k) {
  RVec y = x;
  for (int i = 0; i < k; ++i) y = N * y;
  return y;
}

// Columns of M orthogonal (w.r.t. A) to the columns of C.
RMat a_complement(const RMat& A, const RMat& M, const RMat& C) {
  const RMat cons = C.transpose() * A * M;
  const RMat Z = null_space(cons, std::max(1.0, cons.norm()));
  return M * Z;
}

void split_nilpotent(const RMat& A, const RMat& N, RMat M, std::vector<Piece>& out) {
  std::vector<Piece> l12;
  while (M.cols() > 0) {
    const int k = nilpotency_index(N, M, 1.0);
    const int m = static_cast<int>(M.cols());
    if (k == 1) {
      const RMat G = M.transpose() * A * M;
      Eigen::SelfAdjointEigenSolver<RMat> es(G);
      for (int i = 0; i < m; ++i) {
        const double lam = es.eigenvalues()(i);
        if (std::abs(lam) < 1e-12 * std::max(1.0, G.norm()))
          throw NumericalError("degenerate inner product on zero block");
        RVec v = M * es.eigenvectors().col(i) / std::sqrt(std::abs(lam));
        Piece p;
        p.block.kind = lam < 0 ? BlockKind::ZeroTimelike : BlockKind::Zero;
        p.cols = v;
        out.push_back(p);
      }
      break;
    }
    Piece piece;
    if (k % 2 == 1) {
      auto beta = [&](const RVec& x) { return x.dot(A * matpow_apply(N, x, k - 1)); };
      RVec best;
      double bv = 0.0;
      auto consider = [&](const RVec& x) {
        const double v = std::abs(beta(x)) / x.squaredNorm();
        if (v > bv) {
          bv = v;
          best = x;
        }
      };
      for (int i = 0; i < m; ++i) consider(M.col(i));
      for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
          consider(M.col(i) + M.col(j));
          consider(M.col(i) - M.col(j));
        }
      if (bv <= 0.0) throw NumericalError("nilpotent chain without top vector");
      RVec x = best;
      const double b0 = beta(x);
      for (int mm = k - 3; mm >= 0; mm -= 2) {
        const double g = x.dot(A * matpow_apply(N, x, mm));
        x += (-g / (2.0 * b0)) * matpow_apply(N, x, k - 1 - mm);
      }
      x /= std::sqrt(std::abs(b0));
      const double sgn = b0 > 0 ? 1.0 : -1.0;
      RMat cols(A.rows(), k);
      for (int i = 0; i < k; ++i) cols.col(i) = matpow_apply(N, x, k - 1 - i);
      piece.cols = cols;
      if (k == 3)
        piece.block.kind = sgn < 0 ? BlockKind::L12Nilp : BlockKind::B_Ib;
      else if (k == 5 && sgn > 0)
        piece.block.kind = BlockKind::Nilp23;
      else
        throw NumericalError("nilpotent chain of length " + std::to_string(k) + " exceeds index 2");
    } else {
      if (k != 2) throw NumericalError("even nilpotent chains longer than 2 exceed index 2");
      double bv = 0.0;
      int bi = -1, bj = -1;
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
          if (i == j) continue;
          const double v = std::abs(RVec(M.col(i)).dot(RVec(A * N * M.col(j))));
          if (v > bv) {
            bv = v;
            bi = i;
            bj = j;
          }
        }
      if (bi < 0) throw NumericalError("paired nilpotent chains not found");
      RVec x = M.col(bi), y = M.col(bj);
      const double b0 = x.dot(A * N * y);
      x -= (x.dot(A * x) / (2.0 * b0)) * (N * y);
      y += (y.dot(A * y) / (2.0 * b0)) * (N * x);
      x += (x.dot(A * y) / b0) * (N * x);
      x /= b0;
      RMat cols(A.rows(), 4);
      cols.col(0) = N * x;
      cols.col(1) = N * y;
      cols.col(2) = x;
      cols.col(3) = y;
      piece.cols = cols;
      piece.block.kind = BlockKind::B_Ia;
    }
    M = a_complement(A, M, piece.cols);
    if (piece.block.kind == BlockKind::L12Nilp)
      l12.push_back(piece);
    else
      out.push_back(piece);
  }
  // Two (1,2) chains form the (2,4) nilpotent line.
  if (l12.size() == 2) {
    Piece p;
    p.block.kind = BlockKind::Nilp24;
    p.cols.resize(A.rows(), 6);
    for (int j = 0; j < 3; ++j) {
      p.cols.col(2 * j) = l12[0].cols.col(j);
      p.cols.col(2 * j + 1) = l12[1].cols.col(j);
    }
    out.push_back(p);
  } else {
    for (auto& p : l12) out.push_back(p);
  }
}

// ---- real eigenvalue pair +-lambda ------------------------------------------

void split_real(const RMat& A, const RMat& b, double lambda, std::vector<Piece>& out) {
  const Eigen::Index n = b.rows();
  const RMat I = RMat::Identity(n, n);
  const RMat Wp = generalized_kernel(b - lambda * I);
  const RMat Wm = generalized_kernel(b + lambda * I);
  if (Wp.cols() != Wm.cols()) throw NumericalError("unpaired real eigenvalues");
  const int d = static_cast<int>(Wp.cols());
  lambda = 0.5 * ((Wp.transpose() * b * Wp).trace() - (Wm.transpose() * b * Wm).trace()) / d;
  Piece p;
  p.block.params = {lambda};
  if (d == 1) {
    RVec e1 = Wp.col(0);
    RVec w = Wm.col(0);
    RVec e2 = w / e1.dot(A * w);
    p.block.kind = BlockKind::L11;
    p.cols.resize(n, 2);
    p.cols << e1, e2;
  } else if (d == 2) {
    const RMat Np = (b - lambda * I) * Wp;
    if (Np.norm() <= 1e-7 * std::max(1.0, b.norm())) {
      const RMat D = Wp.transpose() * A * Wm;  // 2x2 pairing
      const RMat Wd = Wm * D.inverse();
      p.block.kind = BlockKind::Split22;
      p.cols.resize(n, 4);
      p.cols << Wp.col(0), Wp.col(1), Wd.col(0), Wd.col(1);
    } else {
      const int top = Np.col(0).norm() >= Np.col(1).norm() ? 0 : 1;
      RVec e3 = Wp.col(top);
      RVec e1 = (b - lambda * I) * e3;
      RMat C(2, 2);
      C.row(0) = e1.transpose() * A * Wm;
      C.row(1) = e3.transpose() * A * Wm;
      Eigen::Vector2d rhs(-1.0, 0.0);
      RVec e4 = Wm * C.fullPivLu().solve(rhs);
      RVec e2 = (b + lambda * I) * e4;
      p.block.kind = BlockKind::Mixed22;
      p.cols.resize(n, 4);
      p.cols << e1, e2, e3, e4;
    }
  } else {
    throw NumericalError("real eigenvalue multiplicity exceeds index 2");
  }
  out.push_back(p);
}

// ---- complex quadruple +-xi +- i nu -----------------------------------------

void split_complex(const RMat& A, const RMat& b, double xi, double nu, std::vector<Piece>& out) {
  const Eigen::Index n = b.rows();
  const RMat I = RMat::Identity(n, n);
  const RMat Up = generalized_kernel((b - xi * I) * (b - xi * I) + nu * nu * I);
  const RMat Um = generalized_kernel((b + xi * I) * (b + xi * I) + nu * nu * I);
  if (Up.cols() != 2 || Um.cols() != 2)
    throw NumericalError("complex eigenvalue multiplicity exceeds index 2");
  {
    const RMat bu = Up.transpose() * b * Up;
    xi = 0.5 * (bu.trace() - (Um.transpose() * b * Um).trace()) / 2.0;
    nu = std::sqrt(std::max(0.0, 0.5 * (bu.determinant() + (Um.transpose() * b * Um).determinant()) - xi * xi));
  }
  RVec e1 = Up.col(0);
  RVec e2 = (b * e1 - xi * e1) / nu;
  RMat C(2, 2);
  C.row(0) = e1.transpose() * A * Um;
  C.row(1) = e2.transpose() * A * Um;
  RVec e3 = Um * C.fullPivLu().solve(Eigen::Vector2d(1.0, 0.0));
  RVec e4 = -(b * e3 + xi * e3) / nu;
  Piece p;
  p.block.kind = BlockKind::B_IIb;
  p.block.params = {xi, nu};
  p.cols.resize(n, 4);
  p.cols << e1, e2, e3, e4;
  out.push_back(p);
}

// ---- imaginary pair +- i nu -------------------------------------------------

void split_imaginary(const RMat& A, const RMat& b, double nu_guess, std::vector<Piece>& out) {
  const Eigen::Index n = b.rows();
  const RMat I = RMat::Identity(n, n);
  const RMat Q = generalized_kernel(b * b + nu_guess * nu_guess * I, b.squaredNorm() + nu_guess * nu_guess);
  const int d = static_cast<int>(Q.cols());
  const RMat bW = Q.transpose() * b * Q;
  if (d == 0) throw NumericalError("empty imaginary eigenspace");
  const RMat AW = Q.transpose() * A * Q;
  const RMat Id = RMat::Identity(d, d);

  // Semisimple part by Newton on p(x) = x^2 + nu^2.
  // Trace of the nilpotent part vanishes, so this is exact.
  double nu = std::sqrt(std::max(0.0, -(bW * bW).trace() / d));
  RMat s = bW;
  for (int it = 0; it < 60; ++it) {
    const RMat step = (s * s + nu * nu * Id) * (2.0 * s).inverse();
    s -= step;
    if (step.norm() <= 1e-15 * std::max(1.0, s.norm())) break;
  }
  nu = std::sqrt(std::max(0.0, -(s * s).trace() / d));
  const RMat J = s / nu;
  const RMat N = bW - s;

  auto h = [&](const RVec& x, const RVec& y) { return cplx(x.dot(AW * y), (J * x).dot(AW * y)); };
  auto Npow = [&](const RVec& x, int k) { return matpow_apply(N, x, k); };

  RMat M = Id;
  while (M.cols() > 0) {
    const int m = static_cast<int>(M.cols());
    const int k = nilpotency_index(N, M, 1.0);
    auto beta = [&](const RVec& x) { return h(x, Npow(x, k - 1)); };
    RVec best;
    double bv = 0.0;
    auto consider = [&](const RVec& x) {
      const double v = std::abs(beta(x)) / x.squaredNorm();
      if (v > bv) {
        bv = v;
        best = x;
      }
    };
    for (int i = 0; i < m; ++i) consider(M.col(i));
    for (int i = 0; i < m; ++i)
      for (int j = i + 1; j < m; ++j) {
        consider(M.col(i) + M.col(j));
        consider(M.col(i) + J * M.col(j));
      }
    if (bv <= 0.0) throw NumericalError("complex chain without top vector");
    RVec x = best;
    const cplx b0 = beta(x);
    const bool odd = k % 2 == 1;
    const double bre = odd ? b0.real() : b0.imag();
    for (int mm = k - 2; mm >= 0; --mm) {
      const cplx g = h(x, Npow(x, mm));
      const int j = k - 1 - mm;
      double cre = 0.0, cim = 0.0;
      if (odd) {
        if (mm % 2 == 0)
          cre = -g.real() / (2.0 * bre);
        else
          cim = -g.imag() / (2.0 * bre);
      } else {
        if (mm % 2 == 0)
          cim = g.real() / (2.0 * bre);
        else
          cre = -g.imag() / (2.0 * bre);
      }
      const RVec y = Npow(x, j);
      x += cre * y + cim * (J * y);
    }
    x /= std::sqrt(std::abs(bre));
    const double sgn = bre > 0 ? 1.0 : -1.0;

    Piece p;
    p.block.params = {nu};
    RMat cols(d, 2 * k);
    for (int i = 0; i < k; ++i) {
      const RVec y = Npow(x, k - 1 - i);
      cols.col(2 * i) = y;
      cols.col(2 * i + 1) = J * y;
    }
    if (k == 1)
      p.block.kind = sgn > 0 ? BlockKind::EuclidB : BlockKind::B_II;
    else if (k == 2)
      p.block.kind = sgn > 0 ? BlockKind::B_IIaMinus : BlockKind::B_IIaPlus;  // A(Nx,Jx) = -sgn of the line
    else if (k == 3 && sgn < 0)
      p.block.kind = BlockKind::Kahler24;
    else
      throw NumericalError("imaginary-eigenvalue chain exceeds index 2");
    M = a_complement(AW, M, cols);
    p.cols = Q * cols;
    out.push_back(p);
  }
}

int block_order(const Block& b) {
  // Pseudo-Euclidean blocks first, then Euclidean rotation blocks, then zeros.
  if (b.index() > 0) return 0;
  if (b.kind == BlockKind::EuclidB) return 1;
  return 2;
}

}  // namespace

// ---- blocks -------------------------------------------------------------------

std::string to_string(BlockKind k) {
  switch (k) {
    case BlockKind::Zero: return "Zero";
    case BlockKind::EuclidB: return "Euclid_B";
    case BlockKind::ZeroTimelike: return "Zero_timelike";
    case BlockKind::L12Nilp: return "L12_nilp";
    case BlockKind::L11: return "L11_lambda";
    case BlockKind::B_Ia: return "B_Ia";
    case BlockKind::B_Ib: return "B_Ib";
    case BlockKind::Nilp24: return "Nilp_24";
    case BlockKind::B_II: return "B_II";
    case BlockKind::B_IIaPlus: return "B_IIa_plus";
    case BlockKind::B_IIaMinus: return "B_IIa_minus";
    case BlockKind::Kahler24: return "Kahler_24";
    case BlockKind::Split22: return "Split_22";
    case BlockKind::Mixed22: return "Mixed_22";
    case BlockKind::B_IIb: return "B_IIb";
    case BlockKind::Nilp23: return "Nilp_23";
  }
  return "?";
}

std::vector<BlockKind> all_block_kinds() {
  std::vector<BlockKind> v;
  for (int i = 0; i <= static_cast<int>(BlockKind::Nilp23); ++i) v.push_back(static_cast<BlockKind>(i));
  return v;
}

std::optional<BlockKind> block_kind_from_string(const std::string& s) {
  for (auto k : all_block_kinds())
    if (to_string(k) == s) return k;
  return std::nullopt;
}

int Block::size() const {
  switch (kind) {
    case BlockKind::Zero:
    case BlockKind::ZeroTimelike: return 1;
    case BlockKind::EuclidB:
    case BlockKind::L11:
    case BlockKind::B_II: return 2;
    case BlockKind::L12Nilp:
    case BlockKind::B_Ib: return 3;
    case BlockKind::Nilp23: return 5;
    case BlockKind::Nilp24:
    case BlockKind::Kahler24: return 6;
    default: return 4;
  }
}

int Block::index() const {
  switch (kind) {
    case BlockKind::Zero:
    case BlockKind::EuclidB: return 0;
    case BlockKind::ZeroTimelike:
    case BlockKind::L12Nilp:
    case BlockKind::L11: return 1;
    default: return 2;
  }
}

std::string Block::name() const {
  std::string s = to_string(kind);
  if (!params.empty()) {
    s += "(";
    for (size_t i = 0; i < params.size(); ++i) {
      if (i) s += ",";
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.6g", params[i]);
      s += buf;
    }
    s += ")";
  }
  return s;
}

RMat Block::A() const {
  const RMat I2 = RMat::Identity(2, 2);
  RMat a;
  switch (kind) {
    case BlockKind::Zero: a = RMat::Identity(1, 1); break;
    case BlockKind::ZeroTimelike: a = -RMat::Identity(1, 1); break;
    case BlockKind::EuclidB: a = I2; break;
    case BlockKind::B_II: a = -I2; break;
    case BlockKind::L12Nilp:
      a = RMat::Zero(3, 3);
      a(0, 2) = a(2, 0) = -1;
      a(1, 1) = 1;
      break;
    case BlockKind::B_Ib:
      a = RMat::Zero(3, 3);
      a(0, 2) = a(2, 0) = 1;
      a(1, 1) = -1;
      break;
    case BlockKind::L11:
      a = RMat::Zero(2, 2);
      a(0, 1) = a(1, 0) = 1;
      break;
    case BlockKind::B_Ia:
    case BlockKind::B_IIaPlus:
    case BlockKind::Mixed22: a = antidiag4(1.0); break;
    case BlockKind::B_IIaMinus: a = antidiag4(-1.0); break;
    case BlockKind::Nilp24:
    case BlockKind::Kahler24: a = pair3(-1.0); break;
    case BlockKind::Split22:
      a = RMat::Zero(4, 4);
      a.block(0, 2, 2, 2) = I2;
      a.block(2, 0, 2, 2) = I2;
      break;
    case BlockKind::B_IIb:
      a = RMat::Zero(4, 4);
      a(0, 2) = a(2, 0) = 1;
      a(1, 3) = a(3, 1) = -1;
      break;
    case BlockKind::Nilp23:
      a = RMat::Zero(5, 5);
      for (int i = 0; i < 5; ++i) a(i, 4 - i) = (i % 2 == 0) ? 1.0 : -1.0;
      break;
  }
  return a;
}

RMat Block::B() const {
  auto par = [&](size_t i) { return i < params.size() ? params[i] : 0.0; };
  const RMat I2 = RMat::Identity(2, 2);
  RMat m;
  switch (kind) {
    case BlockKind::Zero:
    case BlockKind::ZeroTimelike: m = RMat::Zero(1, 1); break;
    case BlockKind::EuclidB:
    case BlockKind::B_II: m = Bnu(par(0)); break;
    case BlockKind::L12Nilp:
    case BlockKind::B_Ib:
      m = RMat::Zero(3, 3);
      m(0, 1) = m(1, 2) = 1;
      break;
    case BlockKind::Nilp23:
      m = RMat::Zero(5, 5);
      for (int i = 0; i < 4; ++i) m(i, i + 1) = 1;
      break;
    case BlockKind::L11: m = Eigen::Vector2d(par(0), -par(0)).asDiagonal(); break;
    case BlockKind::B_Ia:
      m = RMat::Zero(4, 4);
      m(0, 2) = m(1, 3) = 1;
      break;
    case BlockKind::Nilp24:
      m = RMat::Zero(6, 6);
      m.block(0, 2, 2, 2) = I2;
      m.block(2, 4, 2, 2) = I2;
      break;
    case BlockKind::B_IIaPlus:
    case BlockKind::B_IIaMinus:
      m = RMat::Zero(4, 4);
      m.block(0, 0, 2, 2) = Bnu(par(0));
      m.block(2, 2, 2, 2) = Bnu(par(0));
      m.block(0, 2, 2, 2) = I2;
      break;
    case BlockKind::Kahler24:
      m = RMat::Zero(6, 6);
      for (int i = 0; i < 3; ++i) m.block(2 * i, 2 * i, 2, 2) = Bnu(par(0));
      m.block(0, 2, 2, 2) = I2;
      m.block(2, 4, 2, 2) = I2;
      break;
    case BlockKind::Split22: m = Eigen::Vector4d(par(0), par(0), -par(0), -par(0)).asDiagonal(); break;
    case BlockKind::Mixed22:
      m = Eigen::Vector4d(par(0), -par(0), par(0), -par(0)).asDiagonal();
      m(0, 2) = m(1, 3) = 1;
      break;
    case BlockKind::B_IIb:
      m = RMat::Zero(4, 4);
      m.block(0, 0, 2, 2) << par(0), -par(1), par(1), par(0);
      m.block(2, 2, 2, 2) << -par(0), par(1), -par(1), -par(0);
      break;
  }
  return m;
}

RMat block_diag_A(const std::vector<Block>& blocks) {
  int n = 0;
  for (const auto& b : blocks) n += b.size();
  RMat out = RMat::Zero(n, n);
  int o = 0;
  for (const auto& b : blocks) {
    out.block(o, o, b.size(), b.size()) = b.A();
    o += b.size();
  }
  return out;
}

RMat block_diag_B(const std::vector<Block>& blocks) {
  int n = 0;
  for (const auto& b : blocks) n += b.size();
  RMat out = RMat::Zero(n, n);
  int o = 0;
  for (const auto& b : blocks) {
    out.block(o, o, b.size(), b.size()) = b.B();
    o += b.size();
  }
  return out;
}

std::string to_string(GenericType t) {
  switch (t) {
    case GenericType::I_a: return "I_a";
    case GenericType::I_b: return "I_b";
    case GenericType::II_a: return "II_a";
    case GenericType::II_b: return "II_b";
    case GenericType::other: return "other";
    case GenericType::zero_form: return "zero";
  }
  return "?";
}

std::string to_string(CausalVerdict v) {
  switch (v) {
    case CausalVerdict::all_timelike: return "all_timelike";
    case CausalVerdict::all_causal: return "all_causal";
    case CausalVerdict::fails: return "fails";
  }
  return "?";
}

// ---- operators ------------------------------------------------------------------

SkewOperator operator_from_form(const PForm& omega) {
  if (omega.degree != 2) throw InputError("operator_from_form needs a 2-form");
  SkewOperator op;
  op.gram = omega.sig.gram();
  op.b = op.gram.inverse() * omega.matrix();
  return op;
}

PForm form_from_operator(const SkewOperator& op) {
  const RVec e = op.gram.diagonal();
  if ((op.gram - RMat(e.asDiagonal())).norm() > 0)
    throw InputError("form_from_operator needs a diagonal frame gram");
  int p = 0;
  for (int i = 0; i < e.size(); ++i) {
    if (std::abs(std::abs(e(i)) - 1.0) > 1e-14) throw InputError("gram is not orthonormal");
    if (e(i) < 0) {
      if (i != p) throw InputError("gram is not timelike-first");
      ++p;
    }
  }
  return PForm::from_matrix(Signature(p, static_cast<int>(e.size()) - p), op.gram * op.b);
}

ValidationReport validate(const SkewOperator& op, double tol) {
  ValidationReport r;
  const auto n = op.gram.rows();
  if (n == 0 || op.gram.cols() != n || op.b.rows() != n || op.b.cols() != n) {
    r.ok = false;
    r.messages.push_back("shape mismatch");
    r.max_violation = std::numeric_limits<double>::infinity();
    return r;
  }
  const double sym = (op.gram - op.gram.transpose()).cwiseAbs().maxCoeff();
  if (sym > tol) {
    r.ok = false;
    r.messages.push_back("gram is not symmetric");
  }
  Eigen::SelfAdjointEigenSolver<RMat> es(0.5 * (op.gram + op.gram.transpose()));
  const auto& ev = es.eigenvalues();
  const double emax = ev.cwiseAbs().maxCoeff();
  int neg = 0;
  for (int i = 0; i < n; ++i) {
    if (std::abs(ev(i)) <= 1e-12 * std::max(1.0, emax)) {
      r.ok = false;
      r.messages.push_back("gram is singular");
      break;
    }
    if (ev(i) < 0) ++neg;
  }
  r.index = neg;
  if (neg > 2) {
    r.ok = false;
    r.messages.push_back("gram index exceeds 2");
  }
  const double skew = (op.gram * op.b + op.b.transpose() * op.gram).cwiseAbs().maxCoeff();
  const double scale = std::max(1.0, op.gram.norm() * op.b.norm());
  r.max_violation = std::max(sym, skew);
  if (skew > tol * scale) {
    r.ok = false;
    r.messages.push_back("b is not skew-adjoint: max |gram b + b^T gram| = " + std::to_string(skew));
  }
  return r;
}

// ---- classification ---------------------------------------------------------------

BlockDecomposition classify(const SkewOperator& op) {
  const auto rep = validate(op);
  if (!rep.ok) throw InputError("invalid operator: " + (rep.messages.empty() ? "" : rep.messages.front()));
  const int n = op.n();
  if (n > kMaxCliffordDim) throw InputError("operator dimension exceeds 12");
  const RMat& A = op.gram;
  const RMat& b = op.b;
  const double bn = b.norm();

  std::vector<Piece> pieces;
  if (bn == 0.0) {
    split_nilpotent(A, RMat::Zero(n, n), RMat::Identity(n, n), pieces);
  } else {
    Eigen::VectorXcd ev;
    {
      Eigen::EigenSolver<RMat> es(b, false);
      if (es.info() == Eigen::Success) {
        ev = es.eigenvalues();
      } else {
        // The real QR iteration occasionally stalls on exactly structured inputs.
        Eigen::ComplexEigenSolver<CMat> ces(b.cast<cplx>(), false);
        if (ces.info() != Eigen::Success) throw NumericalError("eigenvalue iteration did not converge");
        ev = ces.eigenvalues();
      }
    }
    const double tol = kClusterTol * bn;

    // Single-linkage clusters.
    std::vector<int> label(n, -1);
    int nc = 0;
    for (int i = 0; i < n; ++i) {
      if (label[i] >= 0) continue;
      label[i] = nc;
      std::vector<int> stack{i};
      while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        for (int v = 0; v < n; ++v)
          if (label[v] < 0 && std::abs(ev(u) - ev(v)) <= tol) {
            label[v] = nc;
            stack.push_back(v);
          }
      }
      ++nc;
    }
    std::vector<cplx> centre(nc, 0.0);
    std::vector<int> mult(nc, 0);
    for (int i = 0; i < n; ++i) {
      centre[label[i]] += ev(i);
      mult[label[i]]++;
    }
    for (int c = 0; c < nc; ++c) centre[c] /= mult[c];
    // Separate clusters must be clearly apart, not just past the merge radius.
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (label[i] != label[j] && std::abs(ev(i) - ev(j)) < 3.0 * tol)
          throw NumericalError("eigenvalue clusters too close to resolve");

    // Merge the symmetric clusters into groups.
    std::vector<Group> groups;
    for (int c = 0; c < nc; ++c) {
      const cplx mu = centre[c];
      Group g;
      const double re = std::abs(mu.real()), im = std::abs(mu.imag());
      if (std::abs(mu) <= tol) {
        g.kind = Group::zero;
      } else if (im <= tol) {
        g.kind = Group::real;
        g.a = re;
      } else if (re <= tol) {
        g.kind = Group::imag;
        g.a = im;
      } else {
        g.kind = Group::complex;
        g.a = re;
        g.c = im;
      }
      g.mult = mult[c];
      bool merged = false;
      for (auto& h : groups) {
        if (h.kind == g.kind && std::abs(h.a - g.a) <= tol && std::abs(h.c - g.c) <= tol) {
          h.a = (h.a * h.mult + g.a * g.mult) / (h.mult + g.mult);
          h.c = (h.c * h.mult + g.c * g.mult) / (h.mult + g.mult);
          h.mult += g.mult;
          merged = true;
          break;
        }
      }
      if (!merged) groups.push_back(g);
    }

    for (const auto& g : groups) {
      const size_t before = pieces.size();
      switch (g.kind) {
        case Group::zero: {
          const RMat W = generalized_kernel(b);
          if (W.cols() != g.mult) throw NumericalError("zero generalized eigenspace has wrong dimension");
          const RMat bW = W.transpose() * b * W;
          const RMat AW = W.transpose() * A * W;
          std::vector<Piece> local;
          split_nilpotent(AW, bW, RMat::Identity(g.mult, g.mult), local);
          for (auto& p : local) {
            p.cols = W * p.cols;
            pieces.push_back(p);
          }
          break;
        }
        case Group::real: split_real(A, b, g.a, pieces); break;
        case Group::imag: split_imaginary(A, b, g.a, pieces); break;
        case Group::complex: split_complex(A, b, g.a, g.c, pieces); break;
      }
      int dim = 0;
      for (size_t i = before; i < pieces.size(); ++i) dim += pieces[i].block.size();
      if (dim != g.mult) throw NumericalError("invariant summand dimension does not match multiplicity");
    }
  }

  std::stable_sort(pieces.begin(), pieces.end(), [](const Piece& x, const Piece& y) {
    const int ox = block_order(x.block), oy = block_order(y.block);
    if (ox != oy) return ox < oy;
    if (x.block.kind != y.block.kind) return x.block.kind < y.block.kind;
    return x.block.params > y.block.params;
  });

  BlockDecomposition dec;
  dec.basis.resize(n, n);
  int col = 0;
  for (const auto& p : pieces) {
    dec.blocks.push_back(p.block);
    dec.basis.middleCols(col, p.block.size()) = p.cols;
    col += p.block.size();
  }
  if (col != n) throw NumericalError("adapted basis incomplete");
  int index = 0;
  for (const auto& blk : dec.blocks) index += blk.index();
  if (index != rep.index) throw NumericalError("block signatures do not add up to the gram index");

  const RMat At = block_diag_A(dec.blocks);
  const RMat Bt = block_diag_B(dec.blocks);
  Eigen::FullPivLU<RMat> lu(dec.basis);
  if (!lu.isInvertible()) throw NumericalError("adapted basis is singular");
  dec.residual_b = (lu.solve(b * dec.basis) - Bt).cwiseAbs().maxCoeff();
  dec.residual_gram = (dec.basis.transpose() * A * dec.basis - At).cwiseAbs().maxCoeff();
  if (dec.residual_b > 1e-6 * std::max(1.0, bn) || dec.residual_gram > 1e-6)
    throw NumericalError("normal form reconstruction failed (residual " +
                         std::to_string(std::max(dec.residual_b, dec.residual_gram)) + ")");
  dec.type = detect_generic_type(dec.blocks);
  return dec;
}

GenericType detect_generic_type(const std::vector<Block>& blocks) {
  int zeros = 0, zero_t = 0;
  std::vector<const Block*> pseudo, euclid_b;
  for (const auto& b : blocks) {
    if (b.kind == BlockKind::Zero)
      ++zeros;
    else if (b.kind == BlockKind::ZeroTimelike)
      ++zero_t;
    else if (b.kind == BlockKind::EuclidB)
      euclid_b.push_back(&b);
    else
      pseudo.push_back(&b);
  }
  if (pseudo.empty() && euclid_b.empty()) return GenericType::zero_form;
  if (pseudo.size() != 1 || zero_t != 0) return GenericType::other;
  const Block& p = *pseudo.front();
  if (p.kind == BlockKind::B_Ia && euclid_b.empty()) return GenericType::I_a;
  if (p.kind == BlockKind::B_Ib && euclid_b.empty()) return GenericType::I_b;
  if (p.kind == BlockKind::B_II) {
    const double nu = p.params[0];
    for (const Block* e : euclid_b)
      if (std::abs(e->params[0] - nu) > 1e-6 * std::max(1.0, nu)) return GenericType::other;
    return zeros == 0 ? GenericType::II_a : GenericType::II_b;
  }
  return GenericType::other;
}

// ---- causal contractions --------------------------------------------------------------

namespace {

double min_eig(const RMat& S) {
  Eigen::SelfAdjointEigenSolver<RMat> es(0.5 * (S + S.transpose()), Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

// Feasible tau >= 0 with tau A - M positive semidefinite; interval [lo,hi].
bool tau_interval(const RMat& A, const RMat& M, double& lo, double& hi) {
  std::vector<double> cand{0.0};
  Eigen::EigenSolver<RMat> es(A.inverse() * M, false);
  for (int i = 0; i < es.eigenvalues().size(); ++i) {
    const cplx z = es.eigenvalues()(i);
    if (std::abs(z.imag()) <= 1e-9 * std::max(1.0, std::abs(z)) && z.real() > 0) cand.push_back(z.real());
  }
  std::sort(cand.begin(), cand.end());
  std::vector<double> probe;
  for (size_t i = 0; i < cand.size(); ++i) {
    probe.push_back(cand[i]);
    if (i + 1 < cand.size()) probe.push_back(0.5 * (cand[i] + cand[i + 1]));
  }
  const double far = 2.0 * cand.back() + 1.0;
  probe.push_back(far);
  const double scale = std::max(1.0, M.norm()) + A.norm();
  bool any = false;
  lo = std::numeric_limits<double>::infinity();
  hi = -lo;
  for (double t : probe) {
    if (min_eig(t * A - M) >= -1e-9 * scale * (1.0 + t)) {
      any = true;
      lo = std::min(lo, t);
      hi = std::max(hi, t);
    }
  }
  if (any && hi == far) hi = std::numeric_limits<double>::infinity();
  return any;
}

RMat orthonormal_frame(const RMat& gram) {
  Eigen::SelfAdjointEigenSolver<RMat> es(gram);
  const int n = static_cast<int>(gram.rows());
  RMat E(n, n);
  for (int i = 0; i < n; ++i) E.col(i) = es.eigenvectors().col(i) / std::sqrt(std::abs(es.eigenvalues()(i)));
  return E;  // eigenvalues ascending: timelike columns first
}

}  // namespace

CausalContractionResult causal_contraction_test(const SkewOperator& op, std::uint64_t seed, int samples) {
  CausalContractionResult res;
  res.decomposition = classify(op);
  const auto& blocks = res.decomposition.blocks;
  const int n = op.n();
  int index = 0;
  for (const auto& b : blocks) index += b.index();
  if (index != 2) throw InputError("causal_contraction_test needs signature (2,n-2)");

  double lo = 0.0, hi = std::numeric_limits<double>::infinity();
  bool feasible = true;
  for (const auto& blk : blocks) {
    const RMat Ab = blk.A(), Bb = blk.B();
    const RMat M = -Ab * Bb * Bb;
    double l, h;
    if (!tau_interval(Ab, M, l, h)) {
      feasible = false;
      break;
    }
    lo = std::max(lo, l);
    hi = std::min(hi, h);
  }
  if (feasible && lo > hi + 1e-9 * std::max(1.0, std::abs(hi))) feasible = false;
  res.tau_lo = lo;
  res.tau_hi = hi;

  // Closed-form block-parameter rule for causal contractions (cross-checked by sampling).
  {
    const Block* pseudo = nullptr;
    bool only_zero_rest = true, ok = true;
    for (const auto& b : blocks) {
      if (b.index() > 0) {
        if (pseudo) ok = false;
        pseudo = &b;
      } else if (b.kind != BlockKind::Zero) {
        only_zero_rest = false;
      }
    }
    if (ok && pseudo) {
      switch (pseudo->kind) {
        case BlockKind::B_Ia:
        case BlockKind::B_Ib: ok = only_zero_rest; break;
        case BlockKind::B_II:
        case BlockKind::B_IIaPlus: ok = true; break;
        case BlockKind::B_IIb: ok = pseudo->params[1] * pseudo->params[1] >= pseudo->params[0] * pseudo->params[0]; break;
        default: ok = false;
      }
    } else {
      ok = false;
    }
    res.table_rule = ok;
  }

  if (feasible) {
    if (hi > 1e-9) {
      res.verdict = CausalVerdict::all_timelike;
    } else {
      const RMat At = block_diag_A(blocks), Bt = block_diag_B(blocks);
      const RMat M = -At * Bt * Bt;
      const RMat K = null_space(M, std::max(1.0, M.norm()) * 1e2);
      res.verdict = CausalVerdict::all_timelike;
      if (K.cols() > 0 && min_eig(K.transpose() * At * K) < -1e-9) res.verdict = CausalVerdict::all_causal;
    }
    res.lightlike_possible = res.verdict == CausalVerdict::all_causal;
  } else {
    res.verdict = CausalVerdict::fails;
  }

  // Sampling cross-check in an orthonormal frame of the gram.
  const RMat E = orthonormal_frame(op.gram);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ud(0.0, 2.5);
  double best = -std::numeric_limits<double>::infinity();
  RVec bestT;
  auto ratio = [&](const RVec& T) {
    const RVec bT = op.b * T;
    const double e2 = bT.squaredNorm();
    return e2 > 0 ? bT.dot(op.gram * bT) / e2 : -1.0;
  };
  for (int s = 0; s < samples; ++s) {
    RVec t(n);
    Eigen::Vector2d u(nd(rng), nd(rng));
    u.normalize();
    RVec w(n - 2);
    for (int i = 0; i < n - 2; ++i) w(i) = nd(rng);
    if (n > 2) w.normalize();
    const double a = ud(rng);
    t.head(2) = std::cosh(a) * u;
    if (n > 2) t.tail(n - 2) = std::sinh(a) * w;
    const RVec T = E * t;
    const double r = ratio(T);
    if (r > best) {
      best = r;
      bestT = T;
    }
  }
  res.samples = samples;
  res.sampled_max_ratio = best;
  if (res.verdict == CausalVerdict::fails) {
    // Local search from the best sample when sampling alone did not cross zero.
    RVec T = bestT;
    double r = best;
    std::normal_distribution<double> step(0.0, 0.05);
    for (int it = 0; it < 20000 && r <= 1e-9; ++it) {
      RVec c = E.inverse() * T;
      for (int i = 0; i < n; ++i) c(i) += step(rng);
      const double gcc = c.head(2).squaredNorm() - (n > 2 ? c.tail(n - 2).squaredNorm() : 0.0);
      if (gcc <= 1e-6) continue;
      c /= std::sqrt(gcc);
      const RVec T2 = E * c;
      const double r2 = ratio(T2);
      if (r2 > r) {
        r = r2;
        T = T2;
      }
    }
    if (r > 1e-9) res.witness = T;
    res.sampled_max_ratio = std::max(res.sampled_max_ratio, r);
    if (!res.witness) throw NumericalError("normal form excludes causal contractions but no witness was found");
  } else if (best > 1e-7) {
    throw NumericalError("sampling found a spacelike contraction the normal form excludes");
  }
  return res;
}

// ---- stabilizer ---------------------------------------------------------------------------

int stabilizer_dimension(const SkewOperator& op) {
  const int n = op.n();
  RMat L = RMat::Zero(2 * n * n, n * n);
  for (int k = 0; k < n * n; ++k) {
    RMat X = RMat::Zero(n, n);
    X(k % n, k / n) = 1.0;
    const RMat c1 = op.gram * X + X.transpose() * op.gram;
    const RMat c2 = X * op.b - op.b * X;
    L.col(k).head(n * n) = Eigen::Map<const RVec>(c1.data(), n * n);
    L.col(k).tail(n * n) = Eigen::Map<const RVec>(c2.data(), n * n);
  }
  Eigen::JacobiSVD<RMat> svd(L);
  const auto& s = svd.singularValues();
  const double thr = 1e-6 * std::max(1.0, s(0));
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > thr) ++rank;
  return n * n - rank;
}

int stabilizer_dimension(const BlockDecomposition& dec) {
  return stabilizer_dimension(SkewOperator{block_diag_A(dec.blocks), block_diag_B(dec.blocks)});
}

RMat random_gram_orthogonal(const RMat& gram, std::uint64_t seed, double scale) {
  const int n = static_cast<int>(gram.rows());
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, scale);
  RMat S(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) S(i, j) = nd(rng);
  const RMat X = gram.inverse() * (0.5 * (S - S.transpose()));
  return X.exp();
}

SkewOperator embed_blocks(const std::vector<Block>& blocks, int q) {
  std::vector<Block> all = blocks;
  int p_used = 0, q_used = 0;
  for (const auto& b : blocks) {
    p_used += b.index();
    q_used += b.size() - b.index();
  }
  if (p_used > 2 || q_used > q) throw InputError("blocks do not fit into signature (2,q)");
  for (int i = p_used; i < 2; ++i) all.push_back(Block{BlockKind::ZeroTimelike, {}});
  for (int i = q_used; i < q; ++i) all.push_back(Block{BlockKind::Zero, {}});
  const RMat A0 = block_diag_A(all), B0 = block_diag_B(all);
  const RMat C = orthonormal_frame(A0);  // C^T A0 C = diag(-1,-1,1,...)
  SkewOperator op;
  op.gram = Signature(2, q).gram();
  op.b = C.inverse() * B0 * C;
  return op;
}

}  // namespace spinorbench
