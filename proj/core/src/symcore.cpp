#include "sdpkit/symcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace sdpkit {

namespace {

double scale_of(const Matrix& a) { return std::max(1.0, a.norm()); }

}  // namespace

SymMatrix::SymMatrix(const Matrix& a) {
  if (a.rows() != a.cols() || a.rows() < 1)
    throw Error(ErrorKind::DimensionMismatch, "symmetric matrix must be square with order >= 1");
  if (!a.allFinite()) throw Error(ErrorKind::InvalidArgument, "matrix has non-finite entries");
  const double big = std::max(1.0, a.cwiseAbs().maxCoeff());
  const double asym = (a - a.transpose()).cwiseAbs().maxCoeff();
  if (asym > 1e-12 * big)
    throw Error(ErrorKind::InvalidArgument, "matrix is not symmetric (asymmetry " + std::to_string(asym) + ")");
  data_ = 0.5 * (a + a.transpose());
}

SymMatrix SymMatrix::identity(int n) { return SymMatrix(Matrix::Identity(n, n)); }
SymMatrix SymMatrix::zero(int n) { return SymMatrix(Matrix::Zero(n, n)); }
SymMatrix SymMatrix::ones(int n) { return SymMatrix(Matrix::Ones(n, n)); }
SymMatrix SymMatrix::diagonal(const Vector& d) { return SymMatrix(Matrix(d.asDiagonal())); }

SymMatrix SymMatrix::operator+(const SymMatrix& o) const { return SymMatrix(data_ + o.data_); }
SymMatrix SymMatrix::operator-(const SymMatrix& o) const { return SymMatrix(data_ - o.data_); }
SymMatrix SymMatrix::operator*(double s) const { return SymMatrix(data_ * s); }

double dot(const SymMatrix& a, const SymMatrix& b) {
  if (a.order() != b.order()) throw Error(ErrorKind::DimensionMismatch, "dot: order mismatch");
  return a.dense().cwiseProduct(b.dense()).sum();
}

EigenDecomp eig_decompose(const SymMatrix& in, double tol) {
  if (!(tol > 0)) throw Error(ErrorKind::InvalidArgument, "eig_decompose: tol must be positive");
  const int n = in.order();
  Matrix a = in.dense();
  Matrix v = Matrix::Identity(n, n);
  const double target = tol * a.norm();

  auto off_norm = [&]() {
    double s = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  bool converged = false;
  for (int sweep = 0; sweep < 100; ++sweep) {
    const double off = off_norm();
    if (off <= target || off == 0.0) {
      converged = true;
      break;
    }
    for (int p = 0; p < n - 1; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double kp = a(k, p), kq = a(k, q);
          a(k, p) = c * kp - s * kq;
          a(k, q) = s * kp + c * kq;
        }
        for (int k = 0; k < n; ++k) {
          const double pk = a(p, k), qk = a(q, k);
          a(p, k) = c * pk - s * qk;
          a(q, k) = s * pk + c * qk;
        }
        a(p, q) = a(q, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          const double kp = v(k, p), kq = v(k, q);
          v(k, p) = c * kp - s * kq;
          v(k, q) = s * kp + c * kq;
        }
      }
    }
  }
  if (!converged && off_norm() > target)
    throw Error(ErrorKind::NumericalTrouble, "Jacobi did not converge in 100 sweeps");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) { return a(i, i) < a(j, j); });
  EigenDecomp out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (int k = 0; k < n; ++k) {
    out.values(k) = a(order[k], order[k]);
    Vector col = v.col(order[k]);
    Eigen::Index imax = 0;
    col.cwiseAbs().maxCoeff(&imax);
    if (col(imax) < 0) col = -col;
    out.vectors.col(k) = col;
  }
  return out;
}

PsdVerdict psd_check(const SymMatrix& a, double tol) {
  if (tol < 0) throw Error(ErrorKind::InvalidArgument, "psd_check: tol must be nonnegative");
  const EigenDecomp e = eig_decompose(a);
  const double thr = tol * scale_of(a.dense());
  PsdVerdict v;
  v.min_eigenvalue = e.values(0);
  v.is_psd = v.min_eigenvalue >= -thr;
  v.is_pd = v.min_eigenvalue > thr;
  v.witness = e.vectors.col(0);
  return v;
}

bool sylvester_pd(const SymMatrix& a) {
  const Matrix& m = a.dense();
  // det_k / det_{k-1} is the k-th pivot; comparing it (not det_k) to a norm-relative
  // threshold keeps the test on the same scale as psd_check.
  const double thr = 1e-12 * std::max(1.0, m.norm());
  double prev = 1.0;
  for (int k = 1; k <= a.order(); ++k) {
    const double det = m.topLeftCorner(k, k).determinant();
    if (!(det > 0.0) || !(det / prev > thr)) return false;
    prev = det;
  }
  return true;
}

bool all_principal_minors_nonneg(const SymMatrix& a) {
  const int n = a.order();
  if (n > 14) throw Error(ErrorKind::UnsupportedSize, "principal minor enumeration limited to order 14");
  const Matrix& m = a.dense();
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<int> idx;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) idx.push_back(i);
    const int k = static_cast<int>(idx.size());
    Matrix sub(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) sub(i, j) = m(idx[i], idx[j]);
    if (sub.determinant() < -1e-10) return false;
  }
  return true;
}

CholFactor chol_pd(const SymMatrix& a) {
  const int n = a.order();
  const Matrix& m = a.dense();
  Matrix l = Matrix::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    for (int j = 0; j < k; ++j) {
      double s = m(k, j);
      for (int t = 0; t < j; ++t) s -= l(k, t) * l(j, t);
      l(k, j) = s / l(j, j);
    }
    double alpha = m(k, k);
    for (int t = 0; t < k; ++t) alpha -= l(k, t) * l(k, t);
    if (!(alpha > 0.0))
      throw Error(ErrorKind::NotPositiveDefinite, "pivot " + std::to_string(k + 1) + " is not positive");
    l(k, k) = std::sqrt(alpha);
  }
  return {l, n};
}

CholFactor chol_psd(const SymMatrix& a, double tol) {
  const int n = a.order();
  const Matrix& m = a.dense();
  const double scale = scale_of(m);
  const double zero_pivot = 64.0 * std::numeric_limits<double>::epsilon() * scale * n;
  const double resid_tol = std::sqrt(std::max(tol, 1e-16)) * scale;
  Matrix l = Matrix::Zero(n, n);
  int rank = 0;
  for (int k = 0; k < n; ++k) {
    // Row k solves L_{k-1} l = a_{1:k-1,k}; columns with a zero pivot are free and set to 0.
    for (int j = 0; j < k; ++j) {
      double s = m(k, j);
      for (int t = 0; t < j; ++t) s -= l(k, t) * l(j, t);
      if (l(j, j) > 0.0) {
        l(k, j) = s / l(j, j);
      } else {
        if (std::abs(s) > resid_tol)
          throw Error(ErrorKind::NotPsd, "inconsistent row " + std::to_string(k + 1) + " against a zero pivot");
        l(k, j) = 0.0;
      }
    }
    double alpha = m(k, k);
    for (int t = 0; t < k; ++t) alpha -= l(k, t) * l(k, t);
    if (alpha < -tol * scale)
      throw Error(ErrorKind::NotPsd, "pivot " + std::to_string(k + 1) + " is negative");
    l(k, k) = alpha > zero_pivot ? std::sqrt(alpha) : 0.0;
    if (alpha > tol * scale) ++rank;
  }
  return {l, rank};
}

QrResult gram_schmidt_qr(const Matrix& a, double tol) {
  const int n = static_cast<int>(a.rows());
  const int m = static_cast<int>(a.cols());
  std::vector<Vector> basis;
  Matrix coef = Matrix::Zero(std::min(n, m), m);
  for (int j = 0; j < m; ++j) {
    Vector r = a.col(j);
    const double cn = r.norm();
    // Two passes of modified Gram-Schmidt keep Q orthonormal to working precision.
    for (int pass = 0; pass < 2; ++pass) {
      for (size_t k = 0; k < basis.size(); ++k) {
        const double h = basis[k].dot(r);
        coef(static_cast<int>(k), j) += h;
        r -= h * basis[k];
      }
    }
    const double rn = r.norm();
    if (cn > 0 && rn > tol * cn && static_cast<int>(basis.size()) < n) {
      coef(static_cast<int>(basis.size()), j) = rn;
      basis.push_back(r / rn);
    }
  }
  const int p = static_cast<int>(basis.size());
  QrResult out;
  out.q.resize(n, p);
  for (int k = 0; k < p; ++k) out.q.col(k) = basis[k];
  out.r = coef.topRows(p);
  return out;
}

SymMatrix principal_sqrt(const SymMatrix& a, double tol) {
  const EigenDecomp e = eig_decompose(a);
  if (e.values(0) < -tol * scale_of(a.dense()))
    throw Error(ErrorKind::NotPsd, "principal_sqrt: negative eigenvalue " + std::to_string(e.values(0)));
  const Vector s = e.values.cwiseMax(0.0).cwiseSqrt();
  return SymMatrix(e.vectors * s.asDiagonal() * e.vectors.transpose());
}

SymMatrix schur_complement(const SymMatrix& m, int split) {
  const int n = m.order();
  if (split < 1 || split >= n)
    throw Error(ErrorKind::InvalidArgument, "schur_complement: split must be in [1, order-1]");
  const Matrix a = m.dense().topLeftCorner(split, split);
  const Matrix b = m.dense().bottomLeftCorner(n - split, split);
  const Matrix c = m.dense().bottomRightCorner(n - split, n - split);
  try {
    chol_pd(SymMatrix(a));
  } catch (const Error&) {
    throw Error(ErrorKind::LeadingBlockNotPd, "leading block is not positive definite");
  }
  Eigen::LLT<Matrix> llt(a);
  const Matrix x = llt.solve(b.transpose());
  return SymMatrix(c - b * x);
}

std::pair<double, double> gershgorin_interval(const SymMatrix& a) {
  const Matrix& m = a.dense();
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int i = 0; i < a.order(); ++i) {
    const double r = m.row(i).cwiseAbs().sum() - std::abs(m(i, i));
    lo = std::min(lo, m(i, i) - r);
    hi = std::max(hi, m(i, i) + r);
  }
  return {lo, hi};
}

double frobenius_norm(const SymMatrix& a) { return a.dense().norm(); }

Matrix gram_factor(const SymMatrix& a, GramMethod method, double tol) {
  switch (method) {
    case GramMethod::Cholesky:
      return chol_psd(a, tol).lower;
    case GramMethod::Sqrt:
      return principal_sqrt(a, tol).dense();
    case GramMethod::Eigen: {
      const EigenDecomp e = eig_decompose(a);
      const double thr = tol * scale_of(a.dense());
      if (e.values(0) < -thr) throw Error(ErrorKind::NotPsd, "gram_factor: negative eigenvalue");
      std::vector<int> keep;
      for (int k = a.order() - 1; k >= 0; --k)
        if (e.values(k) > thr) keep.push_back(k);
      Matrix v(a.order(), static_cast<int>(keep.size()));
      for (size_t c = 0; c < keep.size(); ++c)
        v.col(static_cast<int>(c)) = e.vectors.col(keep[c]) * std::sqrt(e.values(keep[c]));
      return v;
    }
  }
  throw Error(ErrorKind::InvalidArgument, "gram_factor: unknown method");
}

int rank_of(const SymMatrix& a, double tol) {
  if (!(tol > 0)) throw Error(ErrorKind::InvalidArgument, "rank_of: tol must be positive");
  const EigenDecomp e = eig_decompose(a);
  const double thr = tol * scale_of(a.dense());
  int r = 0;
  for (int k = 0; k < a.order(); ++k)
    if (std::abs(e.values(k)) > thr) ++r;
  return r;
}

SymMatrix principal_submatrix(const SymMatrix& a, const std::vector<int>& idx) {
  const int k = static_cast<int>(idx.size());
  Matrix sub(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) sub(i, j) = a(idx[i], idx[j]);
  return SymMatrix(sub);
}

SymMatrix project_psd(const SymMatrix& a) {
  const EigenDecomp e = eig_decompose(a);
  const Vector d = e.values.cwiseMax(0.0);
  return SymMatrix(e.vectors * d.asDiagonal() * e.vectors.transpose());
}

}  // namespace sdpkit
