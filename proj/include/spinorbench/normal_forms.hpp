#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spinorbench/forms.hpp"

namespace spinorbench {

// Skew-adjoint endomorphism b of (R^n, gram): gram b + b^T gram = 0.
struct SkewOperator {
  RMat gram;
  RMat b;

  int n() const { return static_cast<int>(gram.rows()); }
};

// w(X, Y) = g(X, b Y), so b = gram^{-1} w.
SkewOperator operator_from_form(const PForm& omega);
PForm form_from_operator(const SkewOperator& op);

struct ValidationReport {
  bool ok = true;
  double max_violation = 0.0;
  int index = 0;
  std::vector<std::string> messages;
};

ValidationReport validate(const SkewOperator& op, double tol = 1e-10);

// Table rows top to bottom. Nilp23 is the Jordan-5 nilpotent block of
// signature (2,3), which the table does not list.
enum class BlockKind {
  Zero,          // (0,1)
  EuclidB,       // (0,2)  nu
  ZeroTimelike,  // (1,0)
  L12Nilp,       // (1,2)
  L11,           // (1,1)  lambda
  B_Ia,          // (2,2)
  B_Ib,          // (2,1)
  Nilp24,        // (2,4)
  B_II,          // (2,0)  nu
  B_IIaPlus,     // (2,2)  nu
  B_IIaMinus,    // (2,2)  nu
  Kahler24,      // (2,4)  nu
  Split22,       // (2,2)  lambda
  Mixed22,       // (2,2)  lambda
  B_IIb,         // (2,2)  xi, nu
  Nilp23,        // (2,3)
};

std::string to_string(BlockKind k);
std::optional<BlockKind> block_kind_from_string(const std::string& s);
std::vector<BlockKind> all_block_kinds();

struct Block {
  BlockKind kind = BlockKind::Zero;
  std::vector<double> params;

  int size() const;
  int index() const;  // number of negative directions
  RMat A() const;     // inner product in the adapted basis
  RMat B() const;     // operator in the adapted basis
  std::string name() const;
};

enum class GenericType { I_a, I_b, II_a, II_b, other, zero_form };
std::string to_string(GenericType t);

struct BlockDecomposition {
  RMat basis;  // columns: adapted basis
  std::vector<Block> blocks;
  double residual_b = 0.0;
  double residual_gram = 0.0;
  GenericType type = GenericType::other;
};

RMat block_diag_A(const std::vector<Block>& blocks);
RMat block_diag_B(const std::vector<Block>& blocks);

// Throws NumericalError when eigenvalue clusters cannot be resolved or the
// reconstruction does not close.
BlockDecomposition classify(const SkewOperator& op);

GenericType detect_generic_type(const std::vector<Block>& blocks);

enum class CausalVerdict { all_timelike, all_causal, fails };
std::string to_string(CausalVerdict v);

struct CausalContractionResult {
  CausalVerdict verdict = CausalVerdict::fails;
  bool lightlike_possible = false;
  bool table_rule = false;  // closed-form block-parameter rule
  double tau_lo = 0.0, tau_hi = 0.0;
  double sampled_max_ratio = 0.0;  // max g(bT,bT)/|bT|^2 over samples
  int samples = 0;
  std::optional<RVec> witness;  // timelike T with spacelike b T
  BlockDecomposition decomposition;
};

CausalContractionResult causal_contraction_test(const SkewOperator& op, std::uint64_t seed = 1,
                                                int samples = 10000);

// dim { X : gram X + X^T gram = 0, X b = b X }.
int stabilizer_dimension(const SkewOperator& op);
int stabilizer_dimension(const BlockDecomposition& dec);

// Random gram-orthogonal matrix exp(X), X skew-adjoint w.r.t. gram.
RMat random_gram_orthogonal(const RMat& gram, std::uint64_t seed, double scale = 0.6);

// Block-diagonal normal form padded with zero blocks to signature (2,q),
// then rewritten in an orthonormal timelike-first frame.
SkewOperator embed_blocks(const std::vector<Block>& blocks, int q);

}  // namespace spinorbench
