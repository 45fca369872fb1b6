#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "sdpkit/symcore.hpp"

namespace sdpkit {

// Block-diagonal symmetric matrix. A block flagged diagonal only carries its
// diagonal (SDPA's negative block sizes); order-1 blocks are scalar constraints.
class BlockMatrix {
 public:
  BlockMatrix() = default;
  explicit BlockMatrix(std::vector<SymMatrix> blocks, std::vector<bool> diagonal = {});

  static BlockMatrix zeros(const std::vector<int>& orders, const std::vector<bool>& diagonal = {});
  static BlockMatrix zeros_like(const BlockMatrix& shape);

  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  const SymMatrix& block(int k) const { return blocks_[k]; }
  const std::vector<SymMatrix>& blocks() const { return blocks_; }
  bool is_diagonal(int k) const { return diagonal_[k]; }
  const std::vector<bool>& diagonal_flags() const { return diagonal_; }
  std::vector<int> orders() const;
  int total_order() const;
  bool same_structure(const BlockMatrix& o) const;

  BlockMatrix operator+(const BlockMatrix& o) const;
  BlockMatrix operator-(const BlockMatrix& o) const;
  BlockMatrix operator*(double s) const;

  Matrix to_dense() const;

 private:
  std::vector<SymMatrix> blocks_;
  std::vector<bool> diagonal_;
};

double dot(const BlockMatrix& a, const BlockMatrix& b);

// Smallest eigenvalue over all blocks.
double min_eigenvalue(const BlockMatrix& a);

// min c^T x  s.t.  sum_i A_i x_i - B >= 0 (PSD),  x_i >= 0 for i in nonneg_vars.
// Variable indices are 0-based.
struct PrimalSdp {
  Vector c;
  std::vector<BlockMatrix> A;
  BlockMatrix B;
  std::vector<int> nonneg_vars;

  int num_vars() const { return static_cast<int>(A.size()); }
  BlockMatrix slack(const Vector& x) const;  // sum A_i x_i - B
  void validate() const;
};

// max B (.) Y  s.t.  A_i (.) Y = c_i (or <= c_i for i in inequality_rows), Y >= 0 (PSD).
struct DualSdp {
  BlockMatrix B;
  std::vector<BlockMatrix> A;
  Vector c;
  std::vector<int> inequality_rows;

  int num_rows() const { return static_cast<int>(A.size()); }
  void validate() const;
};

struct SdpSolution {
  std::optional<Vector> x;
  std::optional<BlockMatrix> Y;
  std::optional<double> pobj;
  std::optional<double> dobj;
};

// The Lagrangian dual: same data, nonnegative variables become inequality rows.
DualSdp dualize(const PrimalSdp& p);

// Inverse of dualize: the primal whose Lagrangian dual is d.
PrimalSdp primal_of(const DualSdp& d);

struct PrimalForm {
  PrimalSdp primal;
  // dual objective = origin_constant - primal objective
  double origin_constant = 0.0;
};

// Rewrites the dual's affine feasible set as Y = -B' + sum_j A'_j x'_j using the
// minimum-norm particular solution and an orthonormal null-space basis.
// Inequality rows receive a scalar slack block appended after the existing blocks.
PrimalForm dual_to_primal_form(const DualSdp& d);

// min{0 : 0 >= I_1}, the canonical infeasible primal.
PrimalSdp canonical_infeasible_primal();

struct DualForm {
  DualSdp dual;
  // primal objective = constant - dual objective
  double constant = 0.0;
};

// Eliminates x through the slack Y = sum A_i x_i - B; needs linearly independent A_i.
DualForm primal_to_dual_form(const PrimalSdp& p);

struct Aggregated {
  std::vector<BlockMatrix> A;
  BlockMatrix B;
};

struct LmiConstraint {
  std::vector<SymMatrix> A;  // one coefficient matrix per variable
  SymMatrix B;
};

// Stacks several LMIs into one block-diagonal LMI.
Aggregated aggregate(const std::vector<LmiConstraint>& constraints);

// Y (.) (sum A_i x_i - B) plus sum over nonnegative variables of x_i (c_i - A_i (.) Y),
// which equals c^T x - B (.) Y. Arguments must be feasible within 1e-7.
double duality_gap(const PrimalSdp& p, const Vector& x, const BlockMatrix& y);

// Orthonormal (under (.)) basis of the complement of span(mats) in the
// symmetric block space with the given orders.
std::vector<BlockMatrix> nullspace_basis(const std::vector<BlockMatrix>& mats,
                                         const std::vector<int>& orders,
                                         const std::vector<bool>& diagonal = {});

// Symmetric vectorization with off-diagonal entries scaled by sqrt(2).
Vector svec(const BlockMatrix& a);
BlockMatrix smat(const Vector& v, const std::vector<int>& orders, const std::vector<bool>& diagonal);
int svec_dimension(const std::vector<int>& orders, const std::vector<bool>& diagonal);

// Indices j such that every PSD Y satisfying the given equalities has Y_jj = 0 in
// block `block`. Equalities of the form sum of nonnegative multiples of diagonal
// entries = 0 are seeded, then propagated: a zero diagonal zeroes its row, which
// can turn further rows into pure-diagonal constraints.
std::vector<int> forced_zero_diagonal(const DualSdp& d, int block);

}  // namespace sdpkit
