#pragma once

#include <vector>

#include "sdpkit/sdp_solver.hpp"

namespace sdpkit {

// min x^T Q x + c^T x  s.t.  A x = b, x binary.
struct BinQp {
  SymMatrix Q;
  Vector c;
  Matrix A;  // p x n, full row rank; p may be 0
  Vector b;

  int n() const { return Q.order(); }
  int p() const { return static_cast<int>(A.rows()); }
  void validate() const;
  double objective(const Vector& x) const;
  bool feasible(const Vector& x) const;  // A x = b within 1e-9 (1 + |b|_inf)
};

// x^T Bq x + d^T x + e = 0.
struct QuadConstraint {
  SymMatrix Bq;
  Vector d;
  double e = 0.0;

  double eval(const Vector& x) const;
};

QuadConstraint redundant_r1(const Matrix& A, const Vector& b);

// x_j (a_k^T x) - b_k x_j = 0, ordered by j then k.
std::vector<QuadConstraint> redundant_r2(const Matrix& A, const Vector& b);

enum class QcrScheme { None, R1, R2 };

const char* to_string(QcrScheme s);

// Relaxation over W = [[1, x^T], [x, X]] as a DualSdp: max -(Q.X + c^T x) with
// W00 = 1, X_ii = x_i, A x = b and the lifted redundant rows. Rows that are
// linearly dependent on earlier ones are dropped.
struct QcrRelaxation {
  DualSdp sdp;
  QcrScheme scheme = QcrScheme::R1;
  int num_redundant = 0;  // redundant rows kept
};

QcrRelaxation build_qcr_sdp(const BinQp& q, QcrScheme scheme);

struct ConvexifiedQp {
  SymMatrix Qc;
  Vector cc;
  double k = 0.0;
  Vector mu;   // multipliers of the X_ii = x_i rows
  Matrix lam;  // redundant-row multipliers: 1 x 1 for R1, n x p' for R2 (p' rows left after presolve), empty for None
  double floor_shift = 0.0;  // diagonal shift added to repair a slightly indefinite Qc

  double eval(const Vector& x) const { return x.dot(Qc.dense() * x) + cc.dot(x) + k; }
};

// Lagrangian read off the solved relaxation; equals the original objective on every
// feasible binary point. Throws NotConvexified when the solution is too far from optimal.
ConvexifiedQp extract_convexification(const BinQp& q, const QcrRelaxation& rel, const SdpSolution& sol);

// Smallest lambda (bisection) with Q + lambda A^T S A >= -1e-8 I.
double convexify_lambda(const SymMatrix& Q, const Matrix& A, const SymMatrix& S);

// W with Q + A^T W^T + W A >= 0, for Q PSD on null(A).
Matrix convexify_W(const SymMatrix& Q, const Matrix& A);

struct BnbOptions {
  long max_nodes = 1000000;
};

struct BnbReport {
  std::vector<int> best_x;
  double best_obj = 0.0;
  long nodes = 0;
  double root_bound = 0.0;
};

// Depth-first branch and bound on the convexified objective; node bounds come from
// the continuous minimum over {A x = b, 0 <= x <= 1} with fixed coordinates pinned.
BnbReport branch_and_bound(const BinQp& q, const ConvexifiedQp& conv, const BnbOptions& opts = {});

struct BruteForceResult {
  std::vector<int> x;
  double obj = 0.0;
};

BruteForceResult brute_force(const BinQp& q);

struct QcrRelaxationSolution {
  double value = 0.0;        // relaxation objective at the primal iterate W
  double lower_bound = 0.0;  // Lagrangian bound read off the multipliers
  Matrix W;                  // [[1, x^T], [x, X]]
  SolveReport report;
  ConvexifiedQp conv;
};

// Solves the relaxation of `scheme` and returns its convexification. Coordinates that
// A x = b pins to 0 or 1 over the box are substituted out first (with dependent rows
// dropped) and the result is mapped back; Qc is then zero on those coordinates. With R1 or R2
// the redundant rows force W [-b, A]^T = 0, so the solve runs on that face
// (W = V W' V^T) and the redundant multipliers are rebuilt afterwards with
// convexify_lambda (R1) or convexify_W (R2). Scheme None solves build_qcr_sdp as is.
QcrRelaxationSolution solve_qcr_relaxation(const BinQp& q, QcrScheme scheme, const SolveOptions& opts = {});

struct QcrResult {
  QcrRelaxationSolution relaxation;
  BnbReport bnb;
};

// solve_qcr_relaxation followed by branch_and_bound.
QcrResult qcr_solve(const BinQp& q, QcrScheme scheme, const SolveOptions& opts = {});

}  // namespace sdpkit
