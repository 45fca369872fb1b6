#include "sdpkit/sdp_model.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <set>

namespace sdpkit {

namespace {

const double kSqrt2 = std::sqrt(2.0);

void check_structure(const BlockMatrix& ref, const BlockMatrix& m, const char* what) {
  if (!ref.same_structure(m))
    throw Error(ErrorKind::DimensionMismatch, std::string(what) + ": block structure differs");
}

Eigen::JacobiSVD<Matrix> svd_of(const Matrix& m) {
  return Eigen::JacobiSVD<Matrix>(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
}

int numeric_rank(const Vector& sv) {
  if (sv.size() == 0) return 0;
  const double smax = sv.maxCoeff();
  if (smax <= 0) return 0;
  int r = 0;
  for (int k = 0; k < sv.size(); ++k)
    if (sv(k) > 1e-10 * smax) ++r;
  return r;
}

}  // namespace

BlockMatrix::BlockMatrix(std::vector<SymMatrix> blocks, std::vector<bool> diagonal)
    : blocks_(std::move(blocks)), diagonal_(std::move(diagonal)) {
  if (diagonal_.empty()) diagonal_.assign(blocks_.size(), false);
  if (diagonal_.size() != blocks_.size())
    throw Error(ErrorKind::DimensionMismatch, "BlockMatrix: diagonal flags do not match block count");
  for (size_t k = 0; k < blocks_.size(); ++k) {
    if (!diagonal_[k]) continue;
    const Matrix& d = blocks_[k].dense();
    const Matrix off = d - Matrix(d.diagonal().asDiagonal());
    if (off.cwiseAbs().maxCoeff() > 0)
      throw Error(ErrorKind::InvalidArgument, "BlockMatrix: diagonal block has off-diagonal entries");
  }
}

BlockMatrix BlockMatrix::zeros(const std::vector<int>& orders, const std::vector<bool>& diagonal) {
  std::vector<SymMatrix> b;
  b.reserve(orders.size());
  for (int n : orders) b.push_back(SymMatrix::zero(n));
  return BlockMatrix(std::move(b), diagonal);
}

BlockMatrix BlockMatrix::zeros_like(const BlockMatrix& shape) {
  return zeros(shape.orders(), shape.diagonal_flags());
}

std::vector<int> BlockMatrix::orders() const {
  std::vector<int> o;
  for (const auto& b : blocks_) o.push_back(b.order());
  return o;
}

int BlockMatrix::total_order() const {
  int t = 0;
  for (const auto& b : blocks_) t += b.order();
  return t;
}

bool BlockMatrix::same_structure(const BlockMatrix& o) const {
  return orders() == o.orders() && diagonal_ == o.diagonal_;
}

BlockMatrix BlockMatrix::operator+(const BlockMatrix& o) const {
  check_structure(*this, o, "BlockMatrix +");
  std::vector<SymMatrix> r;
  for (size_t k = 0; k < blocks_.size(); ++k) r.push_back(blocks_[k] + o.blocks_[k]);
  return BlockMatrix(std::move(r), diagonal_);
}

BlockMatrix BlockMatrix::operator-(const BlockMatrix& o) const {
  check_structure(*this, o, "BlockMatrix -");
  std::vector<SymMatrix> r;
  for (size_t k = 0; k < blocks_.size(); ++k) r.push_back(blocks_[k] - o.blocks_[k]);
  return BlockMatrix(std::move(r), diagonal_);
}

BlockMatrix BlockMatrix::operator*(double s) const {
  std::vector<SymMatrix> r;
  for (const auto& b : blocks_) r.push_back(b * s);
  return BlockMatrix(std::move(r), diagonal_);
}

Matrix BlockMatrix::to_dense() const {
  const int n = total_order();
  Matrix d = Matrix::Zero(n, n);
  int off = 0;
  for (const auto& b : blocks_) {
    d.block(off, off, b.order(), b.order()) = b.dense();
    off += b.order();
  }
  return d;
}

double dot(const BlockMatrix& a, const BlockMatrix& b) {
  check_structure(a, b, "dot");
  double s = 0.0;
  for (int k = 0; k < a.num_blocks(); ++k) s += dot(a.block(k), b.block(k));
  return s;
}

double min_eigenvalue(const BlockMatrix& a) {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& b : a.blocks()) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(b.dense(), Eigen::EigenvaluesOnly);
    m = std::min(m, es.eigenvalues()(0));
  }
  return m;
}

BlockMatrix PrimalSdp::slack(const Vector& x) const {
  if (x.size() != num_vars()) throw Error(ErrorKind::DimensionMismatch, "slack: wrong number of variables");
  std::vector<SymMatrix> out;
  for (int k = 0; k < B.num_blocks(); ++k) {
    Matrix s = -B.block(k).dense();
    for (int i = 0; i < num_vars(); ++i)
      if (x(i) != 0.0) s += x(i) * A[i].block(k).dense();
    out.emplace_back(s);
  }
  return BlockMatrix(std::move(out), B.diagonal_flags());
}

void PrimalSdp::validate() const {
  if (c.size() != num_vars()) throw Error(ErrorKind::DimensionMismatch, "PrimalSdp: c and A sizes differ");
  for (const auto& a : A) check_structure(B, a, "PrimalSdp");
  for (int v : nonneg_vars)
    if (v < 0 || v >= num_vars()) throw Error(ErrorKind::InvalidArgument, "PrimalSdp: nonneg index out of range");
}

void DualSdp::validate() const {
  if (c.size() != num_rows()) throw Error(ErrorKind::DimensionMismatch, "DualSdp: c and A sizes differ");
  for (const auto& a : A) check_structure(B, a, "DualSdp");
  for (int v : inequality_rows)
    if (v < 0 || v >= num_rows()) throw Error(ErrorKind::InvalidArgument, "DualSdp: inequality index out of range");
}

DualSdp dualize(const PrimalSdp& p) {
  p.validate();
  DualSdp d;
  d.B = p.B;
  d.A = p.A;
  d.c = p.c;
  d.inequality_rows = p.nonneg_vars;
  std::sort(d.inequality_rows.begin(), d.inequality_rows.end());
  return d;
}

PrimalSdp primal_of(const DualSdp& d) {
  d.validate();
  PrimalSdp p;
  p.B = d.B;
  p.A = d.A;
  p.c = d.c;
  p.nonneg_vars = d.inequality_rows;
  std::sort(p.nonneg_vars.begin(), p.nonneg_vars.end());
  return p;
}

int svec_dimension(const std::vector<int>& orders, const std::vector<bool>& diagonal) {
  int dim = 0;
  for (size_t k = 0; k < orders.size(); ++k) {
    const bool diag = !diagonal.empty() && diagonal[k];
    dim += diag ? orders[k] : orders[k] * (orders[k] + 1) / 2;
  }
  return dim;
}

Vector svec(const BlockMatrix& a) {
  Vector v(svec_dimension(a.orders(), a.diagonal_flags()));
  int pos = 0;
  for (int k = 0; k < a.num_blocks(); ++k) {
    const Matrix& m = a.block(k).dense();
    const int n = a.block(k).order();
    if (a.is_diagonal(k)) {
      for (int i = 0; i < n; ++i) v(pos++) = m(i, i);
      continue;
    }
    for (int j = 0; j < n; ++j)
      for (int i = 0; i <= j; ++i) v(pos++) = (i == j) ? m(i, i) : kSqrt2 * m(i, j);
  }
  return v;
}

BlockMatrix smat(const Vector& v, const std::vector<int>& orders, const std::vector<bool>& diagonal) {
  std::vector<bool> flags = diagonal.empty() ? std::vector<bool>(orders.size(), false) : diagonal;
  if (v.size() != svec_dimension(orders, flags)) throw Error(ErrorKind::DimensionMismatch, "smat: wrong length");
  std::vector<SymMatrix> blocks;
  int pos = 0;
  for (size_t k = 0; k < orders.size(); ++k) {
    const int n = orders[k];
    Matrix m = Matrix::Zero(n, n);
    if (flags[k]) {
      for (int i = 0; i < n; ++i) m(i, i) = v(pos++);
    } else {
      for (int j = 0; j < n; ++j)
        for (int i = 0; i <= j; ++i) {
          const double e = (i == j) ? v(pos) : v(pos) / kSqrt2;
          m(i, j) = m(j, i) = e;
          ++pos;
        }
    }
    blocks.emplace_back(m);
  }
  return BlockMatrix(std::move(blocks), flags);
}

std::vector<BlockMatrix> nullspace_basis(const std::vector<BlockMatrix>& mats, const std::vector<int>& orders,
                                         const std::vector<bool>& diagonal) {
  const std::vector<bool> flags = diagonal.empty() ? std::vector<bool>(orders.size(), false) : diagonal;
  const int dim = svec_dimension(orders, flags);
  std::vector<BlockMatrix> out;
  if (mats.empty()) {
    for (int k = 0; k < dim; ++k) out.push_back(smat(Vector::Unit(dim, k), orders, flags));
    return out;
  }
  Matrix m(static_cast<int>(mats.size()), dim);
  for (size_t i = 0; i < mats.size(); ++i) {
    if (mats[i].orders() != orders) throw Error(ErrorKind::DimensionMismatch, "nullspace_basis: block orders differ");
    m.row(static_cast<int>(i)) = svec(mats[i]).transpose();
  }
  const auto svd = svd_of(m);
  const int r = numeric_rank(svd.singularValues());
  const Matrix& v = svd.matrixV();
  for (int k = r; k < dim; ++k) out.push_back(smat(v.col(k), orders, flags));
  return out;
}

PrimalForm dual_to_primal_form(const DualSdp& in) {
  in.validate();
  // Inequality rows get a nonnegative scalar slack appended as extra 1x1 blocks.
  DualSdp d = in;
  if (!in.inequality_rows.empty()) {
    const int ns = static_cast<int>(in.inequality_rows.size());
    auto extend = [&](const BlockMatrix& b, int slack_index) {
      std::vector<SymMatrix> blocks = b.blocks();
      std::vector<bool> flags = b.diagonal_flags();
      for (int s = 0; s < ns; ++s) {
        Matrix one(1, 1);
        one(0, 0) = (s == slack_index) ? 1.0 : 0.0;
        blocks.emplace_back(one);
        flags.push_back(false);
      }
      return BlockMatrix(std::move(blocks), flags);
    };
    d.B = extend(in.B, -1);
    for (int i = 0; i < in.num_rows(); ++i) {
      const auto it = std::find(in.inequality_rows.begin(), in.inequality_rows.end(), i);
      const int slot = it == in.inequality_rows.end() ? -1 : static_cast<int>(it - in.inequality_rows.begin());
      d.A[i] = extend(in.A[i], slot);
    }
    d.inequality_rows.clear();
  }

  const std::vector<int> orders = d.B.orders();
  const std::vector<bool> flags = d.B.diagonal_flags();
  const int dim = svec_dimension(orders, flags);
  const int m = d.num_rows();

  Vector y0 = Vector::Zero(dim);
  std::vector<BlockMatrix> basis;
  if (m == 0) {
    basis = nullspace_basis({}, orders, flags);
  } else {
    Matrix a(m, dim);
    for (int i = 0; i < m; ++i) a.row(i) = svec(d.A[i]).transpose();
    const auto svd = svd_of(a);
    const Vector& sv = svd.singularValues();
    const int r = numeric_rank(sv);
    const Matrix& u = svd.matrixU();
    const Matrix& v = svd.matrixV();
    for (int k = 0; k < r; ++k) y0 += v.col(k) * (u.col(k).dot(d.c) / sv(k));
    const double resid = (a * y0 - d.c).norm();
    if (resid > 1e-9 * (1.0 + d.c.norm()))
      throw Error(ErrorKind::InfeasibleLinearSystem, "equality constraints have no solution (residual " +
                                                         std::to_string(resid) + ")");
    for (int k = r; k < dim; ++k) basis.push_back(smat(v.col(k), orders, flags));
  }

  const BlockMatrix Y0 = smat(y0, orders, flags);
  PrimalForm out;
  out.primal.B = Y0 * -1.0;
  out.primal.A = basis;
  out.primal.c.resize(static_cast<int>(basis.size()));
  for (size_t j = 0; j < basis.size(); ++j) out.primal.c(static_cast<int>(j)) = -dot(d.B, basis[j]);
  out.origin_constant = dot(d.B, Y0);
  return out;
}

PrimalSdp canonical_infeasible_primal() {
  PrimalSdp p;
  p.c = Vector::Zero(1);
  Matrix one(1, 1);
  one(0, 0) = 1.0;
  p.B = BlockMatrix({SymMatrix(one)});
  p.A = {BlockMatrix::zeros({1})};
  return p;
}

DualForm primal_to_dual_form(const PrimalSdp& p) {
  p.validate();
  const int n = p.num_vars();
  const std::vector<int> orders = p.B.orders();
  const std::vector<bool> flags = p.B.diagonal_flags();
  const int dim = svec_dimension(orders, flags);

  Matrix a(n, dim);
  for (int i = 0; i < n; ++i) a.row(i) = svec(p.A[i]).transpose();
  if (n > 0) {
    const auto svd = svd_of(a);
    if (numeric_rank(svd.singularValues()) < n)
      throw Error(ErrorKind::DependentConstraintMatrices, "vectorized constraint matrices are linearly dependent");
  }
  const Matrix gram = a * a.transpose();
  const Eigen::LDLT<Matrix> ldlt(gram);
  const Vector w = n > 0 ? Vector(ldlt.solve(p.c)) : Vector();
  // x = G^{-1} A(Y + B); c^T x = W (.) (Y + B) with W = sum w_i A_i.
  BlockMatrix W = BlockMatrix::zeros(orders, flags);
  for (int i = 0; i < n; ++i) W = W + p.A[i] * w(i);

  DualForm out;
  out.dual.B = W * -1.0;
  out.constant = dot(W, p.B);
  for (const BlockMatrix& nk : nullspace_basis(p.A, orders, flags)) {
    out.dual.A.push_back(nk);
  }
  const int neq = static_cast<int>(out.dual.A.size());
  out.dual.c.resize(neq);
  for (int k = 0; k < neq; ++k) out.dual.c(k) = -dot(out.dual.A[k], p.B);

  // x_i >= 0 becomes -(G^{-1} A)_i (.) Y <= (G^{-1} A)_i (.) B.
  if (!p.nonneg_vars.empty()) {
    const Matrix ginv = ldlt.solve(Matrix::Identity(n, n));
    std::vector<double> rhs;
    for (int i : p.nonneg_vars) {
      BlockMatrix row = BlockMatrix::zeros(orders, flags);
      for (int j = 0; j < n; ++j)
        if (ginv(i, j) != 0.0) row = row + p.A[j] * ginv(i, j);
      out.dual.inequality_rows.push_back(static_cast<int>(out.dual.A.size()));
      rhs.push_back(dot(row, p.B));
      out.dual.A.push_back(row * -1.0);
    }
    Vector c(static_cast<int>(out.dual.A.size()));
    c.head(neq) = out.dual.c;
    for (size_t k = 0; k < rhs.size(); ++k) c(neq + static_cast<int>(k)) = rhs[k];
    out.dual.c = c;
  }
  return out;
}

Aggregated aggregate(const std::vector<LmiConstraint>& constraints) {
  if (constraints.empty()) throw Error(ErrorKind::InvalidArgument, "aggregate: no constraints");
  const size_t nvars = constraints.front().A.size();
  for (const auto& con : constraints) {
    if (con.A.size() != nvars)
      throw Error(ErrorKind::VariableCountMismatch, "aggregate: constraints use different variable counts");
    for (const auto& a : con.A)
      if (a.order() != con.B.order())
        throw Error(ErrorKind::DimensionMismatch, "aggregate: coefficient order differs from B");
  }
  Aggregated out;
  std::vector<SymMatrix> b;
  for (const auto& con : constraints) b.push_back(con.B);
  out.B = BlockMatrix(b);
  for (size_t i = 0; i < nvars; ++i) {
    std::vector<SymMatrix> ai;
    for (const auto& con : constraints) ai.push_back(con.A[i]);
    out.A.emplace_back(ai);
  }
  return out;
}

double duality_gap(const PrimalSdp& p, const Vector& x, const BlockMatrix& y) {
  p.validate();
  const double tol = 1e-7;
  if (x.size() != p.num_vars()) throw Error(ErrorKind::DimensionMismatch, "duality_gap: wrong x length");
  check_structure(p.B, y, "duality_gap");
  const BlockMatrix z = p.slack(x);
  if (min_eigenvalue(z) < -tol) throw Error(ErrorKind::InfeasibleArgument, "x is not primal feasible");
  if (min_eigenvalue(y) < -tol) throw Error(ErrorKind::InfeasibleArgument, "Y is not positive semidefinite");
  double gap = dot(y, z);
  for (int i = 0; i < p.num_vars(); ++i) {
    const double r = p.c(i) - dot(p.A[i], y);
    const bool nonneg = std::find(p.nonneg_vars.begin(), p.nonneg_vars.end(), i) != p.nonneg_vars.end();
    if (nonneg) {
      if (x(i) < -tol || r < -tol) throw Error(ErrorKind::InfeasibleArgument, "sign constraint violated");
      gap += x(i) * r;
    } else if (std::abs(r) > tol) {
      throw Error(ErrorKind::InfeasibleArgument, "dual equality row " + std::to_string(i) + " violated");
    }
  }
  return gap;
}

std::vector<int> forced_zero_diagonal(const DualSdp& d, int block) {
  d.validate();
  if (block < 0 || block >= d.B.num_blocks()) throw Error(ErrorKind::InvalidArgument, "forced_zero_diagonal: bad block");
  const int nb = d.B.num_blocks();
  std::vector<std::set<int>> zero(nb);
  auto is_zero = [&](int k, int i, int j) { return zero[k].count(i) || zero[k].count(j); };
  bool changed = true;
  while (changed) {
    changed = false;
    for (int row = 0; row < d.num_rows(); ++row) {
      if (std::find(d.inequality_rows.begin(), d.inequality_rows.end(), row) != d.inequality_rows.end()) continue;
      if (std::abs(d.c(row)) > 1e-12) continue;
      bool pure_diag = true;
      int sign = 0;
      std::vector<std::pair<int, int>> diag_terms;
      for (int k = 0; k < nb && pure_diag; ++k) {
        const Matrix& a = d.A[row].block(k).dense();
        const int n = static_cast<int>(a.rows());
        for (int i = 0; i < n && pure_diag; ++i)
          for (int j = i; j < n; ++j) {
            if (a(i, j) == 0.0 || is_zero(k, i, j)) continue;
            if (i != j) {
              pure_diag = false;
              break;
            }
            const int s = a(i, i) > 0 ? 1 : -1;
            if (sign != 0 && s != sign) {
              pure_diag = false;
              break;
            }
            sign = s;
            diag_terms.emplace_back(k, i);
          }
      }
      if (!pure_diag || diag_terms.empty()) continue;
      for (const auto& [k, i] : diag_terms)
        if (zero[k].insert(i).second) changed = true;
    }
  }
  return {zero[block].begin(), zero[block].end()};
}

}  // namespace sdpkit
