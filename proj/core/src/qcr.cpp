#include "sdpkit/qcr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace sdpkit {

namespace {

double inf() { return std::numeric_limits<double>::infinity(); }

// Row of the relaxation for x^T Bq x + d^T x + e over W = [[1, x^T], [x, X]].
SymMatrix lift(const QuadConstraint& qc) {
  const int n = qc.Bq.order();
  Matrix w = Matrix::Zero(n + 1, n + 1);
  w(0, 0) = qc.e;
  w.block(1, 0, n, 1) = 0.5 * qc.d;
  w.block(0, 1, 1, n) = 0.5 * qc.d.transpose();
  w.block(1, 1, n, n) = qc.Bq.dense();
  return SymMatrix(w);
}

double min_eig(const Matrix& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
  return es.eigenvalues()(0);
}

// Indices of rows whose scaled upper triangles are independent of the earlier kept
// ones. The first `required` rows must all be kept.
std::vector<int> independent_rows(const std::vector<SymMatrix>& rows, int required) {
  std::vector<Vector> basis;
  std::vector<int> kept;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const int m = rows[r].order();
    Vector v(m * (m + 1) / 2);
    int t = 0;
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) v(t++) = (i == j ? 1.0 : std::sqrt(2.0)) * rows[r](i, j);
    const double vn = v.norm();
    for (int pass = 0; pass < 2; ++pass)
      for (const Vector& u : basis) v -= u.dot(v) * u;
    if (v.norm() <= 1e-9 * std::max(1.0, vn)) {
      if (static_cast<int>(r) < required) throw Error(ErrorKind::InvalidArgument, "qcr: dependent base rows");
      continue;
    }
    basis.push_back(v / v.norm());
    kept.push_back(static_cast<int>(r));
  }
  return kept;
}

// Convexified objective [1; x]^T Z [1; x] - rhs_term, with the slightly indefinite case repaired.
ConvexifiedQp from_slack(const Matrix& z, double rhs_term, int n) {
  ConvexifiedQp conv;
  Matrix qc = 0.5 * (z.block(1, 1, n, n) + z.block(1, 1, n, n).transpose());
  conv.cc = 2.0 * z.block(1, 0, n, 1);
  conv.k = z(0, 0) - rhs_term;
  const double lmin = min_eig(qc);
  if (lmin < -1e-5 * std::max(1.0, qc.norm()))
    throw Error(ErrorKind::NotConvexified, "lambda_min(Qc) = " + std::to_string(lmin));
  if (lmin < 0.0) {
    // Shift by delta I and give it back through x_i^2 = x_i.
    conv.floor_shift = 1e-7 - lmin;
    qc.diagonal().array() += conv.floor_shift;
    conv.cc.array() -= conv.floor_shift;
  }
  conv.Qc = SymMatrix(qc);
  return conv;
}

// W00 = 1 and X_ii = x_i rows over order n + 1.
std::vector<SymMatrix> base_rows(int n) {
  const int m = n + 1;
  std::vector<SymMatrix> rows;
  Matrix e00 = Matrix::Zero(m, m);
  e00(0, 0) = 1.0;
  rows.emplace_back(e00);
  for (int i = 0; i < n; ++i) {
    Matrix a = Matrix::Zero(m, m);
    a(i + 1, i + 1) = 1.0;
    a(0, i + 1) = a(i + 1, 0) = -0.5;
    rows.emplace_back(a);
  }
  return rows;
}

Matrix objective_matrix(const BinQp& q) {
  const int n = q.n();
  Matrix obj = Matrix::Zero(n + 1, n + 1);
  obj.block(1, 1, n, n) = -q.Q.dense();
  obj.block(1, 0, n, 1) = -0.5 * q.c;
  obj.block(0, 1, 1, n) = -0.5 * q.c.transpose();
  return obj;
}

struct NodeQp {
  Matrix H;  // objective 1/2 x^T H x + q^T x + k
  Vector q;
  double k = 0.0;
  Matrix A;
  Vector b;
};

struct NodeResult {
  Vector x;       // in [0, 1]
  double bound;   // valid lower bound on the node minimum
};

// Primal-dual interior point for the box QP, followed by a bound that is valid for
// any returned iterate: h(x) >= h(xh) + g^T (x - xh) and the box LP is solved exactly.
NodeResult solve_node(const NodeQp& qp, double convexity_slack) {
  const int m = static_cast<int>(qp.H.rows());
  const int p = static_cast<int>(qp.A.rows());
  Vector x = Vector::Constant(m, 0.5), zl = Vector::Ones(m), zu = Vector::Ones(m), lam = Vector::Zero(p);
  for (int it = 0; it < 60; ++it) {
    const Vector s = Vector::Ones(m) - x;
    const Vector rd = qp.H * x + qp.q - qp.A.transpose() * lam - zl + zu;
    const Vector rp = qp.A * x - qp.b;
    const double mu = (x.dot(zl) + s.dot(zu)) / (2.0 * m);
    if (mu < 1e-11 && rd.lpNorm<Eigen::Infinity>() < 1e-10 && (p == 0 || rp.lpNorm<Eigen::Infinity>() < 1e-10)) break;
    const double sigma = 0.1;
    Matrix kkt = Matrix::Zero(m + p, m + p);
    kkt.topLeftCorner(m, m) = qp.H;
    kkt.topLeftCorner(m, m).diagonal() += zl.cwiseQuotient(x) + zu.cwiseQuotient(s);
    kkt.topRightCorner(m, p) = -qp.A.transpose();
    kkt.bottomLeftCorner(p, m) = qp.A;
    kkt.bottomRightCorner(p, p).diagonal().setConstant(-1e-10);
    Vector rhs(m + p);
    rhs.head(m) = -rd + (sigma * mu * x.cwiseInverse() - zl) - (sigma * mu * s.cwiseInverse() - zu);
    rhs.tail(p) = -rp;
    const Vector d = kkt.partialPivLu().solve(rhs);
    const Vector dx = d.head(m);
    const Vector dl = d.tail(p);
    const Vector dzl = (Vector::Constant(m, sigma * mu) - x.cwiseProduct(zl) - zl.cwiseProduct(dx)).cwiseQuotient(x);
    const Vector dzu = (Vector::Constant(m, sigma * mu) - s.cwiseProduct(zu) + zu.cwiseProduct(dx)).cwiseQuotient(s);
    double a = 1.0;
    for (int i = 0; i < m; ++i) {
      if (dx(i) < 0) a = std::min(a, -0.99 * x(i) / dx(i));
      if (dx(i) > 0) a = std::min(a, 0.99 * s(i) / dx(i));
      if (dzl(i) < 0) a = std::min(a, -0.99 * zl(i) / dzl(i));
      if (dzu(i) < 0) a = std::min(a, -0.99 * zu(i) / dzu(i));
    }
    if (!std::isfinite(a) || !dx.allFinite()) break;
    x += a * dx;
    lam += a * dl;
    zl += a * dzl;
    zu += a * dzu;
  }
  const Vector xh = x.cwiseMax(0.0).cwiseMin(1.0);
  const Vector g = qp.H * xh + qp.q;
  const Vector r = g - qp.A.transpose() * lam;
  double bound = 0.5 * xh.dot(qp.H * xh) + qp.q.dot(xh) + qp.k - g.dot(xh) + lam.dot(qp.b);
  for (int i = 0; i < m; ++i) bound += std::min(0.0, r(i));
  bound -= convexity_slack * m;
  return {xh, bound};
}

}  // namespace

void BinQp::validate() const {
  const int nn = n();
  if (c.size() != nn) throw Error(ErrorKind::DimensionMismatch, "BinQp: c has wrong length");
  if (A.cols() != nn && A.rows() > 0) throw Error(ErrorKind::DimensionMismatch, "BinQp: A has wrong width");
  if (b.size() != A.rows()) throw Error(ErrorKind::DimensionMismatch, "BinQp: b has wrong length");
  if (p() > 0) {
    Eigen::FullPivLU<Matrix> lu(A);
    lu.setThreshold(1e-10);
    if (lu.rank() != p()) throw Error(ErrorKind::InvalidArgument, "BinQp: A must have full row rank");
  }
}

double BinQp::objective(const Vector& x) const { return x.dot(Q.dense() * x) + c.dot(x); }

bool BinQp::feasible(const Vector& x) const {
  if (p() == 0) return true;
  const double tol = 1e-9 * (1.0 + b.lpNorm<Eigen::Infinity>());
  return (A * x - b).lpNorm<Eigen::Infinity>() <= tol;
}

double QuadConstraint::eval(const Vector& x) const { return x.dot(Bq.dense() * x) + d.dot(x) + e; }

QuadConstraint redundant_r1(const Matrix& A, const Vector& b) {
  if (b.size() != A.rows()) throw Error(ErrorKind::DimensionMismatch, "redundant_r1: b has wrong length");
  return {SymMatrix(A.transpose() * A), -2.0 * A.transpose() * b, b.squaredNorm()};
}

std::vector<QuadConstraint> redundant_r2(const Matrix& A, const Vector& b) {
  if (b.size() != A.rows()) throw Error(ErrorKind::DimensionMismatch, "redundant_r2: b has wrong length");
  const int n = static_cast<int>(A.cols());
  std::vector<QuadConstraint> out;
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < A.rows(); ++k) {
      Matrix e = Matrix::Zero(n, n);
      e.row(j) += 0.5 * A.row(k);
      e.col(j) += 0.5 * A.row(k).transpose();
      Vector d = Vector::Zero(n);
      d(j) = -b(k);
      out.push_back({SymMatrix(e), d, 0.0});
    }
  return out;
}

const char* to_string(QcrScheme s) {
  switch (s) {
    case QcrScheme::None: return "none";
    case QcrScheme::R1: return "r1";
    case QcrScheme::R2: return "r2";
  }
  return "?";
}

QcrRelaxation build_qcr_sdp(const BinQp& q, QcrScheme scheme) {
  q.validate();
  const int n = q.n();
  if (n + 1 > 40) throw Error(ErrorKind::UnsupportedSize, "build_qcr_sdp: n + 1 must be <= 40");
  const int m = n + 1;
  QcrRelaxation rel;
  rel.scheme = scheme;

  rel.sdp.B = BlockMatrix({SymMatrix(objective_matrix(q))});
  std::vector<SymMatrix> rows = base_rows(n);
  std::vector<double> rhs(rows.size(), 0.0);
  rhs[0] = 1.0;
  for (int k = 0; k < q.p(); ++k) {
    Matrix a = Matrix::Zero(m, m);
    a.block(1, 0, n, 1) = 0.5 * q.A.row(k).transpose();
    a.block(0, 1, 1, n) = 0.5 * q.A.row(k);
    rows.emplace_back(a);
    rhs.push_back(q.b(k));
  }
  const int fixed_rows = static_cast<int>(rows.size());
  if (q.p() > 0) {
    if (scheme == QcrScheme::R1) rows.push_back(lift(redundant_r1(q.A, q.b)));
    if (scheme == QcrScheme::R2)
      for (const auto& qc : redundant_r2(q.A, q.b)) rows.push_back(lift(qc));
  }
  rhs.resize(rows.size(), 0.0);

  for (int r : independent_rows(rows, fixed_rows)) {
    rel.sdp.A.push_back(BlockMatrix({rows[r]}));
    rel.sdp.c.conservativeResize(rel.sdp.A.size());
    rel.sdp.c(rel.sdp.A.size() - 1) = rhs[r];
    if (r >= fixed_rows) ++rel.num_redundant;
  }
  return rel;
}

ConvexifiedQp extract_convexification(const BinQp& q, const QcrRelaxation& rel, const SdpSolution& sol) {
  if (!sol.x) throw Error(ErrorKind::NotConvexified, "extract_convexification: solution carries no multipliers");
  const Vector& y = *sol.x;
  if (y.size() != rel.sdp.num_rows()) throw Error(ErrorKind::DimensionMismatch, "extract_convexification: multiplier count");
  if (sol.pobj && sol.dobj) {
    const double gap = std::abs(*sol.pobj - *sol.dobj) / std::max(1.0, std::abs(*sol.pobj));
    if (gap > 1e-5) throw Error(ErrorKind::NotConvexified, "extract_convexification: gap " + std::to_string(gap));
  }
  const int n = q.n();
  Matrix z = -rel.sdp.B.block(0).dense();
  for (int i = 0; i < y.size(); ++i) z += y(i) * rel.sdp.A[i].block(0).dense();
  // [1; x]^T Z [1; x] - y^T c agrees with the objective wherever every row holds.
  ConvexifiedQp conv = from_slack(z, y.dot(rel.sdp.c), n);
  conv.mu = y.segment(1, n);
  conv.lam = y.tail(rel.num_redundant);
  return conv;
}

double convexify_lambda(const SymMatrix& Q, const Matrix& A, const SymMatrix& S) {
  const int n = Q.order();
  if (A.cols() != n || S.order() != A.rows()) throw Error(ErrorKind::DimensionMismatch, "convexify_lambda: shapes");
  chol_pd(S);
  const Matrix bq = A.transpose() * S.dense() * A;
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeFullV);
  svd.setThreshold(1e-10);
  const int rank = A.rows() ? static_cast<int>(svd.rank()) : 0;
  const Matrix nb = svd.matrixV().rightCols(n - rank);
  const double scale = std::max(1.0, Q.dense().norm());
  if (nb.cols() > 0 && min_eig(nb.transpose() * Q.dense() * nb) <= 1e-9 * scale)
    throw Error(ErrorKind::NotPositiveOnNullspace, "convexify_lambda: Q is not positive on null(A)");
  auto ok = [&](double lam) { return min_eig(Q.dense() + lam * bq) >= -1e-8; };
  if (ok(0.0)) return 0.0;
  double lo = 0.0, hi = 1.0;
  int guard = 0;
  while (!ok(hi)) {
    lo = hi;
    hi *= 2.0;
    if (++guard > 200) throw Error(ErrorKind::NumericalTrouble, "convexify_lambda: no bracket");
  }
  while (hi - lo > 1e-9 * std::max(1.0, hi)) {
    const double mid = 0.5 * (lo + hi);
    (ok(mid) ? hi : lo) = mid;
  }
  return hi;
}

Matrix convexify_W(const SymMatrix& Q, const Matrix& A) {
  const int n = Q.order();
  const int p = static_cast<int>(A.rows());
  if (A.cols() != n && p > 0) throw Error(ErrorKind::DimensionMismatch, "convexify_W: shapes");
  if (p == 0) {
    if (!psd_check(Q, 1e-7).is_psd) throw Error(ErrorKind::NotPsdOnNullspace, "convexify_W: Q is not PSD");
    return Matrix::Zero(n, 0);
  }
  // A^T = U^T R with orthonormal rows u_i of U.
  const QrResult qr = gram_schmidt_qr(A.transpose());
  if (qr.q.cols() != p) throw Error(ErrorKind::InvalidArgument, "convexify_W: A must have full row rank");
  const Matrix& ut = qr.q;  // columns u_i
  Eigen::JacobiSVD<Matrix> svd(A, Eigen::ComputeFullV);
  const Matrix nb = svd.matrixV().rightCols(n - p);
  const Matrix& qm = Q.dense();
  if (nb.cols() > 0 && min_eig(nb.transpose() * qm * nb) < -1e-9 * std::max(1.0, qm.norm()))
    throw Error(ErrorKind::NotPsdOnNullspace, "convexify_W: Q is not PSD on null(A)");

  Matrix w = Matrix::Zero(n, p);
  for (int i = p - 1; i >= 0; --i) {
    Matrix pi = Matrix::Zero(n, n);
    for (int j = i + 1; j < p; ++j) pi += w.col(j) * ut.col(j).transpose();
    const Vector u = ut.col(i);
    const double z = 0.5 * u.dot(qm * u);
    w.col(i) = -(qm + pi.transpose()) * u + z * u;
  }
  // W U = W (R^T)^{-1} A.
  const Matrix r = qr.r.leftCols(p);
  return r.triangularView<Eigen::Upper>().solve(w.transpose()).transpose();
}

BnbReport branch_and_bound(const BinQp& q, const ConvexifiedQp& conv, const BnbOptions& opts) {
  q.validate();
  const int n = q.n();
  if (n > 25) throw Error(ErrorKind::UnsupportedSize, "branch_and_bound: n must be <= 25");
  const Matrix& qc = conv.Qc.dense();
  const double slack = std::max(0.0, -min_eig(qc));

  BnbReport rep;
  rep.best_obj = inf();
  std::vector<std::vector<int>> stack{std::vector<int>(n, -1)};
  bool root = true;

  auto try_point = [&](const std::vector<int>& bits) {
    Vector x(n);
    for (int i = 0; i < n; ++i) x(i) = bits[i];
    if (!q.feasible(x)) return;
    const double f = q.objective(x);
    if (f < rep.best_obj) {
      rep.best_obj = f;
      rep.best_x = bits;
    }
  };

  while (!stack.empty()) {
    if (rep.nodes >= opts.max_nodes) throw Error(ErrorKind::NumericalTrouble, "branch_and_bound: node limit");
    std::vector<int> fix = std::move(stack.back());
    stack.pop_back();
    ++rep.nodes;
    std::vector<int> freev;
    Vector v = Vector::Zero(n);
    for (int i = 0; i < n; ++i) {
      if (fix[i] < 0)
        freev.push_back(i);
      else
        v(i) = fix[i];
    }
    if (freev.empty()) {
      if (root) rep.root_bound = conv.eval(v);
      root = false;
      try_point(fix);
      continue;
    }
    const int m = static_cast<int>(freev.size());
    NodeQp qp;
    qp.H.resize(m, m);
    qp.q.resize(m);
    qp.A.resize(q.p(), m);
    const Vector qv = qc * v;
    for (int a = 0; a < m; ++a) {
      for (int b2 = 0; b2 < m; ++b2) qp.H(a, b2) = 2.0 * qc(freev[a], freev[b2]);
      qp.q(a) = conv.cc(freev[a]) + 2.0 * qv(freev[a]);
      for (int k = 0; k < q.p(); ++k) qp.A(k, a) = q.A(k, freev[a]);
    }
    qp.k = v.dot(qv) + conv.cc.dot(v) + conv.k;
    qp.b = q.p() ? Vector(q.b - q.A * v) : Vector::Zero(0);
    const NodeResult nr = solve_node(qp, 2.0 * slack);
    if (root) rep.root_bound = nr.bound;
    root = false;
    if (nr.bound >= rep.best_obj - 1e-7) continue;

    // Rounded relaxation as a cheap incumbent.
    std::vector<int> rounded = fix;
    for (int a = 0; a < m; ++a) rounded[freev[a]] = nr.x(a) >= 0.5 ? 1 : 0;
    try_point(rounded);
    if (nr.bound >= rep.best_obj - 1e-7) continue;

    int pick = 0;
    double best = inf();
    for (int a = 0; a < m; ++a) {
      const double d = std::abs(nr.x(a) - 0.5);
      if (d < best) {
        best = d;
        pick = a;
      }
    }
    const int var = freev[pick];
    const int first = nr.x(pick) >= 0.5 ? 1 : 0;
    std::vector<int> c0 = fix, c1 = fix;
    c0[var] = 1 - first;
    c1[var] = first;
    stack.push_back(std::move(c0));  // explored second
    stack.push_back(std::move(c1));
  }
  if (!std::isfinite(rep.best_obj)) throw Error(ErrorKind::InfeasibleModel, "no binary point satisfies A x = b");
  return rep;
}

BruteForceResult brute_force(const BinQp& q) {
  q.validate();
  const int n = q.n();
  if (n > 22) throw Error(ErrorKind::UnsupportedSize, "brute_force: n must be <= 22");
  BruteForceResult best;
  best.obj = inf();
  Vector x(n);
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    for (int i = 0; i < n; ++i) x(i) = (mask >> i) & 1u;
    if (!q.feasible(x)) continue;
    const double f = q.objective(x);
    if (f < best.obj) {
      best.obj = f;
      best.x.assign(n, 0);
      for (int i = 0; i < n; ++i) best.x[i] = (mask >> i) & 1u;
    }
  }
  if (!std::isfinite(best.obj)) throw Error(ErrorKind::InfeasibleModel, "no binary point satisfies A x = b");
  return best;
}

namespace {

QcrRelaxationSolution relax(const BinQp& q, QcrScheme scheme, const SolveOptions& opts) {
  const QcrRelaxation rel = build_qcr_sdp(q, scheme);
  const int n = q.n();
  QcrRelaxationSolution out;
  if (scheme == QcrScheme::None || q.p() == 0) {
    SolveOptions o = opts;
    for (int attempt = 0; attempt < 2; ++attempt) {
      out.report = solve(rel.sdp, o);
      if (!out.report.ok())
        throw Error(ErrorKind::NumericalTrouble, std::string("qcr relaxation: ") + to_string(out.report.status));
      try {
        out.conv = extract_convexification(q, rel, {out.report.x, out.report.Y, out.report.pobj, out.report.dobj});
        break;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NotConvexified || attempt == 1) throw;
        o.tol *= 1e-2;  // retry once with a tighter gap target
        o.max_iter *= 2;
      }
    }
    out.W = out.report.Y.block(0).dense();
    out.value = -out.report.dobj;
    out.lower_bound = -out.report.pobj;
    return out;
  }

  // Face of W: orthogonal to the rows of G = [-b, A].
  const int p = q.p();
  Matrix g(p, n + 1);
  g.col(0) = -q.b;
  g.rightCols(n) = q.A;
  Eigen::JacobiSVD<Matrix> svd(g, Eigen::ComputeFullV);
  const Matrix v = svd.matrixV().rightCols(n + 1 - p);

  const Matrix obj = objective_matrix(q);
  const std::vector<SymMatrix> rows = base_rows(n);
  std::vector<SymMatrix> reduced;
  for (const SymMatrix& r : rows) reduced.emplace_back(v.transpose() * r.dense() * v);
  const std::vector<int> kept = independent_rows(reduced, 1);
  DualSdp face;
  face.B = BlockMatrix({SymMatrix(v.transpose() * obj * v)});
  face.c = Vector::Zero(static_cast<int>(kept.size()));
  face.c(0) = 1.0;
  for (int r : kept) face.A.push_back(BlockMatrix({reduced[r]}));
  out.report = solve(face, opts);
  if (!out.report.ok())
    throw Error(ErrorKind::NumericalTrouble, std::string("qcr relaxation: ") + to_string(out.report.status));

  Vector y = Vector::Zero(n + 1);
  for (std::size_t k = 0; k < kept.size(); ++k) y(kept[k]) = out.report.x(static_cast<int>(k));
  Matrix m = -obj;
  for (int i = 0; i <= n; ++i) m += y(i) * rows[i].dense();
  Matrix z;
  Matrix lam;
  double rhs_term = y(0);
  if (scheme == QcrScheme::R1) {
    double l = 0.0;
    try {
      l = convexify_lambda(SymMatrix(0.5 * (m + m.transpose())), g, SymMatrix::identity(p));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::NotPositiveOnNullspace) throw;
      // Only PSD on the face: add eps sum_i (x_i^2 - x_i) and give up eps (n/4 + 1)
      // of bound, which makes the face block positive definite.
      const double eps = 1e-7 * std::max(1.0, m.norm());
      const double shift = eps * (0.25 * n + 1.0);
      for (int i = 1; i <= n; ++i) m += eps * rows[i].dense();
      m(0, 0) += shift;
      y.tail(n).array() += eps;
      y(0) += shift;
      rhs_term = y(0);
      try {
        l = convexify_lambda(SymMatrix(0.5 * (m + m.transpose())), g, SymMatrix::identity(p));
      } catch (const Error& e2) {
        throw Error(ErrorKind::NotConvexified, std::string("R1 multiplier: ") + e2.what());
      }
    }
    z = m + l * g.transpose() * g;
    lam = Matrix::Constant(1, 1, l);
  } else {
    const Matrix wbar = convexify_W(SymMatrix(0.5 * (m + m.transpose())), g);
    z = m + wbar * g + g.transpose() * wbar.transpose();
    lam = 2.0 * wbar.bottomRows(n);
  }
  out.conv = from_slack(z, rhs_term, n);
  out.conv.mu = y.tail(n);
  out.conv.lam = lam;
  out.W = v * out.report.Y.block(0).dense() * v.transpose();
  out.value = -out.report.dobj;
  out.lower_bound = -rhs_term;
  return out;
}

// Coordinates pinned to 0 or 1 by {A x = b, 0 <= x <= 1} (-1 when free), from an
// LP maximizing and minimizing each coordinate.
std::vector<int> pinned_coordinates(const BinQp& q, const SolveOptions& opts) {
  const int n = q.n(), p = q.p();
  DualSdp lp;
  const std::vector<bool> diag{true};
  for (int k = 0; k < p; ++k) {
    Matrix a = Matrix::Zero(2 * n, 2 * n);
    a.topLeftCorner(n, n).diagonal() = q.A.row(k).transpose();
    lp.A.push_back(BlockMatrix({SymMatrix(a)}, diag));
  }
  for (int j = 0; j < n; ++j) {
    Matrix a = Matrix::Zero(2 * n, 2 * n);
    a(j, j) = a(n + j, n + j) = 1.0;
    lp.A.push_back(BlockMatrix({SymMatrix(a)}, diag));
  }
  lp.c.resize(p + n);
  lp.c << q.b, Vector::Ones(n);

  auto extreme = [&](int j, double sign) {
    Matrix obj = Matrix::Zero(2 * n, 2 * n);
    obj(j, j) = sign;
    lp.B = BlockMatrix({SymMatrix(obj)}, diag);
    const SolveReport rep = solve(lp, opts);
    if (rep.status == SolveStatus::PrimalInfeasibleSuspected || rep.status == SolveStatus::DualInfeasibleSuspected)
      throw Error(ErrorKind::InfeasibleModel, "no point of [0, 1]^n satisfies A x = b");
    if (!rep.ok()) throw Error(ErrorKind::NumericalTrouble, std::string("qcr presolve: ") + to_string(rep.status));
    return sign * rep.dobj;
  };
  std::vector<int> pinned(n, -1);
  for (int j = 0; j < n; ++j) {
    if (extreme(j, 1.0) < 1e-6)
      pinned[j] = 0;
    else if (extreme(j, -1.0) > 1.0 - 1e-6)
      pinned[j] = 1;
  }
  return pinned;
}

struct Reduction {
  BinQp q;
  std::vector<int> free;
  Vector fixed;  // values of pinned coordinates, 0 on free ones
  double k0 = 0.0;
};

Reduction reduce(const BinQp& q, const std::vector<int>& pinned) {
  const int n = q.n();
  Reduction r;
  r.fixed = Vector::Zero(n);
  for (int j = 0; j < n; ++j) {
    if (pinned[j] < 0)
      r.free.push_back(j);
    else
      r.fixed(j) = pinned[j];
  }
  const int m = static_cast<int>(r.free.size());
  const Matrix& qd = q.Q.dense();
  const Vector qf = qd * r.fixed;
  Matrix qr(m, m), af(q.p(), m);
  Vector cr(m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; b < m; ++b) qr(a, b) = qd(r.free[a], r.free[b]);
    cr(a) = q.c(r.free[a]) + 2.0 * qf(r.free[a]);
    af.col(a) = q.A.col(r.free[a]);
  }
  r.k0 = r.fixed.dot(qf) + q.c.dot(r.fixed);
  const Vector bf = q.b - q.A * r.fixed;

  // Keep a maximal independent set of the remaining rows.
  std::vector<int> rows;
  if (m > 0 && q.p() > 0) {
    Eigen::ColPivHouseholderQR<Matrix> qrd(af.transpose());
    qrd.setThreshold(1e-10);
    for (int k = 0; k < qrd.rank(); ++k) rows.push_back(qrd.colsPermutation().indices()(k));
    std::sort(rows.begin(), rows.end());
  }
  Matrix ar(static_cast<int>(rows.size()), m);
  Vector br(static_cast<int>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    ar.row(static_cast<int>(k)) = af.row(rows[k]);
    br(static_cast<int>(k)) = bf(rows[k]);
  }
  if (m > 0) r.q = BinQp{SymMatrix(qr), cr, ar, br};  // callers handle m = 0 via pinned_solution
  return r;
}

// Coordinates whose diagonal W_jj is constant 0 or 1 on the affine hull of the R1/R2
// relaxation: W_00 = 1, X_jj = x_j and W [-b, A]^T = 0. A zero diagonal forces the whole
// row of W to zero, so the face has no interior unless the coordinate is substituted out.
std::vector<int> lifted_pins(const BinQp& q) {
  const int n = q.n(), p = q.p(), m = n + 1;
  auto var = [m](int i, int j) {
    if (i > j) std::swap(i, j);
    return i * m - i * (i - 1) / 2 + (j - i);
  };
  const int nv = m * (m + 1) / 2;
  Matrix l = Matrix::Zero(1 + n + p * m, nv);
  Vector rhs = Vector::Zero(l.rows());
  int row = 0;
  l(row, var(0, 0)) = 1.0;
  rhs(row++) = 1.0;
  for (int j = 1; j <= n; ++j) {
    l(row, var(j, j)) = 1.0;
    l(row++, var(0, j)) = -1.0;
  }
  for (int k = 0; k < p; ++k)
    for (int j = 0; j < m; ++j, ++row) {
      for (int i = 1; i <= n; ++i) l(row, var(i, j)) += q.A(k, i - 1);
      l(row, var(0, j)) -= q.b(k);
    }
  const Eigen::CompleteOrthogonalDecomposition<Matrix> cod(l);
  const Vector w0 = cod.solve(rhs);
  const Eigen::CompleteOrthogonalDecomposition<Matrix> codt(l.transpose());
  std::vector<int> pinned(n, -1);
  for (int j = 1; j <= n; ++j) {
    Vector f = Vector::Zero(nv);
    f(var(j, j)) = 1.0;
    // Constant on the affine set exactly when f lies in the row space.
    if ((l.transpose() * codt.solve(f) - f).norm() > 1e-8) continue;
    const double v = w0(var(j, j));
    if (std::abs(v) <= 1e-8) pinned[j - 1] = 0;
    if (std::abs(v - 1.0) <= 1e-8) pinned[j - 1] = 1;
  }
  return pinned;
}

// LP pins, plus lifted pins when the scheme carries the redundant rows, until no
// coordinate changes.
std::vector<int> presolve_pins(const BinQp& q, QcrScheme scheme, const SolveOptions& opts) {
  std::vector<int> pinned = pinned_coordinates(q, opts);
  if (scheme == QcrScheme::None) return pinned;
  while (true) {
    const Reduction r = reduce(q, pinned);
    if (r.free.empty() || r.q.p() == 0) return pinned;
    const std::vector<int> extra = lifted_pins(r.q);
    if (std::all_of(extra.begin(), extra.end(), [](int v) { return v < 0; })) return pinned;
    for (std::size_t a = 0; a < r.free.size(); ++a) pinned[r.free[a]] = extra[a];
    const Reduction again = reduce(q, pinned);
    if (again.free.empty() || again.q.p() == 0) return pinned;
    const std::vector<int> lp = pinned_coordinates(again.q, opts);
    for (std::size_t a = 0; a < again.free.size(); ++a)
      if (lp[a] >= 0) pinned[again.free[a]] = lp[a];
  }
}

// Maps a relaxation of the reduced problem back to the original coordinates.
QcrRelaxationSolution embed(const Reduction& r, const QcrRelaxationSolution& s, QcrScheme scheme, int n) {
  const int m = static_cast<int>(r.free.size());
  Matrix lift_map = Matrix::Zero(n + 1, m + 1);
  lift_map(0, 0) = 1.0;
  lift_map.block(1, 0, n, 1) = r.fixed;
  for (int a = 0; a < m; ++a) lift_map(r.free[a] + 1, a + 1) = 1.0;
  QcrRelaxationSolution out;
  out.report = s.report;
  out.value = s.value + r.k0;
  out.lower_bound = s.lower_bound + r.k0;
  out.W = lift_map * s.W * lift_map.transpose();
  Matrix qc = Matrix::Zero(n, n);
  out.conv.cc = Vector::Zero(n);
  out.conv.mu = Vector::Zero(n);
  for (int a = 0; a < m; ++a) {
    out.conv.cc(r.free[a]) = s.conv.cc(a);
    out.conv.mu(r.free[a]) = s.conv.mu(a);
    for (int b = 0; b < m; ++b) qc(r.free[a], r.free[b]) = s.conv.Qc(a, b);
  }
  out.conv.Qc = SymMatrix(qc);
  out.conv.k = s.conv.k + r.k0;
  out.conv.floor_shift = s.conv.floor_shift;
  out.conv.lam = s.conv.lam;
  if (scheme == QcrScheme::R2 && s.conv.lam.size() > 0) {
    out.conv.lam = Matrix::Zero(n, s.conv.lam.cols());
    for (int a = 0; a < m; ++a) out.conv.lam.row(r.free[a]) = s.conv.lam.row(a);
  }
  return out;
}

// Everything pinned: the relaxation is the single feasible point.
QcrRelaxationSolution pinned_solution(const Reduction& r, int n) {
  QcrRelaxationSolution out;
  Vector w(n + 1);
  w << 1.0, r.fixed;
  out.W = w * w.transpose();
  out.value = out.lower_bound = r.k0;
  out.report.status = SolveStatus::Optimal;
  out.conv.Qc = SymMatrix::zero(n);
  out.conv.cc = Vector::Zero(n);
  out.conv.mu = Vector::Zero(n);
  out.conv.k = r.k0;
  return out;
}

}  // namespace

QcrRelaxationSolution solve_qcr_relaxation(const BinQp& q, QcrScheme scheme, const SolveOptions& opts) {
  q.validate();
  if (q.p() == 0) return relax(q, scheme, opts);
  const Reduction r = reduce(q, presolve_pins(q, scheme, opts));
  if (r.free.empty()) return pinned_solution(r, q.n());
  if (static_cast<int>(r.free.size()) == q.n() && r.q.p() == q.p()) return relax(q, scheme, opts);
  return embed(r, relax(r.q, scheme, opts), scheme, q.n());
}

QcrResult qcr_solve(const BinQp& q, QcrScheme scheme, const SolveOptions& opts) {
  q.validate();
  QcrResult out;
  const int n = q.n();
  if (q.p() > 0) {
    const Reduction r = reduce(q, presolve_pins(q, scheme, opts));
    const bool trivial = static_cast<int>(r.free.size()) == n && r.q.p() == q.p();
    if (!trivial) {
      if (r.free.empty()) {
        out.relaxation = pinned_solution(r, n);
        if (!q.feasible(r.fixed)) throw Error(ErrorKind::InfeasibleModel, "no binary point satisfies A x = b");
        out.bnb.best_x.assign(r.fixed.data(), r.fixed.data() + n);
        out.bnb.best_obj = out.bnb.root_bound = r.k0;
        out.bnb.nodes = 1;
        return out;
      }
      const QcrRelaxationSolution red = relax(r.q, scheme, opts);
      out.relaxation = embed(r, red, scheme, n);
      BnbReport b = branch_and_bound(r.q, red.conv);
      Vector x = r.fixed;
      for (std::size_t a = 0; a < r.free.size(); ++a) x(r.free[a]) = b.best_x[a];
      out.bnb.best_x.assign(x.data(), x.data() + n);
      out.bnb.best_obj = q.objective(x);
      out.bnb.root_bound = b.root_bound + r.k0;
      out.bnb.nodes = b.nodes;
      return out;
    }
  }
  out.relaxation = relax(q, scheme, opts);
  out.bnb = branch_and_bound(q, out.relaxation.conv);
  return out;
}

}  // namespace sdpkit
