#pragma once

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "sdpkit/error.hpp"

namespace sdpkit {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Dense real symmetric matrix. Construction averages A and A^T and rejects
// inputs whose asymmetry exceeds 1e-12 relative to the largest entry.
class SymMatrix {
 public:
  SymMatrix() : data_(Matrix::Zero(1, 1)) {}
  explicit SymMatrix(const Matrix& a);

  static SymMatrix identity(int n);
  static SymMatrix zero(int n);
  static SymMatrix ones(int n);
  static SymMatrix diagonal(const Vector& d);

  int order() const { return static_cast<int>(data_.rows()); }
  double operator()(int i, int j) const { return data_(i, j); }
  const Matrix& dense() const { return data_; }

  SymMatrix operator+(const SymMatrix& o) const;
  SymMatrix operator-(const SymMatrix& o) const;
  SymMatrix operator*(double s) const;

 private:
  Matrix data_;
};

// Trace inner product A (.) B = sum_ij a_ij b_ij.
double dot(const SymMatrix& a, const SymMatrix& b);

struct EigenDecomp {
  Matrix vectors;  // columns are unit eigenvectors
  Vector values;   // ascending
};

struct CholFactor {
  Matrix lower;
  int rank = 0;
};

struct PsdVerdict {
  bool is_psd = false;
  bool is_pd = false;
  double min_eigenvalue = 0.0;
  std::optional<Vector> witness;
};

enum class GramMethod { Cholesky, Eigen, Sqrt };

inline constexpr double kDefaultTol = 1e-9;

// Cyclic Jacobi. Stops when the off-diagonal Frobenius norm drops below
// tol * ||A||_F; throws NumericalTrouble after 100 sweeps.
EigenDecomp eig_decompose(const SymMatrix& a, double tol = 1e-14);

// Thresholds are tol * max(1, ||A||_F).
PsdVerdict psd_check(const SymMatrix& a, double tol = kDefaultTol);

bool sylvester_pd(const SymMatrix& a);

// Enumerates all 2^n - 1 principal minors; n <= 14.
bool all_principal_minors_nonneg(const SymMatrix& a);

CholFactor chol_pd(const SymMatrix& a);
CholFactor chol_psd(const SymMatrix& a, double tol = kDefaultTol);

struct QrResult {
  Matrix q;  // n x p, orthonormal columns
  Matrix r;  // p x m, row echelon
};
QrResult gram_schmidt_qr(const Matrix& a, double tol = 1e-10);

SymMatrix principal_sqrt(const SymMatrix& a, double tol = kDefaultTol);

// M = [[A, B^T], [B, C]] with A of order split; returns C - B A^{-1} B^T.
SymMatrix schur_complement(const SymMatrix& m, int split);

std::pair<double, double> gershgorin_interval(const SymMatrix& a);

double frobenius_norm(const SymMatrix& a);

Matrix gram_factor(const SymMatrix& a, GramMethod method, double tol = kDefaultTol);

int rank_of(const SymMatrix& a, double tol = kDefaultTol);

// Principal submatrix on the given index set.
SymMatrix principal_submatrix(const SymMatrix& a, const std::vector<int>& idx);

// Eigenvalue clipping onto the PSD cone.
SymMatrix project_psd(const SymMatrix& a);

}  // namespace sdpkit
