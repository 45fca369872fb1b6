#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include <sdpkit/sdp_solver.hpp>
#include <sdpkit/theta.hpp>

#include "test_support.hpp"

using namespace sdpkit;
using sdpkit::test::max_abs;

namespace {

Matrix mat(int n, std::initializer_list<double> v) {
  Matrix m(n, n);
  auto it = v.begin();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = *it++;
  return m;
}

BlockMatrix one(const Matrix& m) { return BlockMatrix({SymMatrix(m)}); }

// max y s.t. [[1, y], [y, 2]] >= 0, written as min -y.
PrimalSdp sqrt2_fixture() {
  PrimalSdp p;
  p.c = Vector::Constant(1, -1.0);
  p.A = {one(mat(2, {0, 1, 1, 0}))};
  p.B = one(mat(2, {-1, 0, 0, -2}));
  return p;
}

// min t s.t. [[t, 1], [1, 3]] >= 0.
PrimalSdp third_fixture() {
  PrimalSdp p;
  p.c = Vector::Ones(1);
  p.A = {one(mat(2, {1, 0, 0, 0}))};
  p.B = one(mat(2, {0, -1, -1, -3}));
  return p;
}

const Matrix& cubic_constant() {
  static const Matrix m = mat(3, {0, 1, 3, 1, 2, 0, 3, 0, 1});
  return m;
}

// min x s.t. x I + [[0,1,3],[1,2,0],[3,0,1]] >= 0.
PrimalSdp cubic_fixture() {
  PrimalSdp p;
  p.c = Vector::Ones(1);
  p.A = {BlockMatrix({SymMatrix::identity(3)})};
  p.B = one(-cubic_constant());
  return p;
}

// min t s.t. [[t, 1], [1, t']] >= 0: infimum 0, never attained.
PrimalSdp nonattain_fixture() {
  PrimalSdp p;
  p.c = Vector(2);
  p.c << 1, 0;
  p.A = {one(mat(2, {1, 0, 0, 0})), one(mat(2, {0, 0, 0, 1}))};
  p.B = one(mat(2, {0, -1, -1, 0}));
  return p;
}

// min c^T x s.t. G x >= h, one scalar block per row.
PrimalSdp lp_as_sdp(const Matrix& g, const Vector& h, const Vector& c) {
  PrimalSdp p;
  p.c = c;
  const int m = static_cast<int>(g.rows());
  std::vector<bool> diag(m, true);
  for (int i = 0; i < g.cols(); ++i) p.A.push_back(BlockMatrix::zeros(std::vector<int>(m, 1), diag));
  for (int i = 0; i < g.cols(); ++i) {
    std::vector<SymMatrix> b;
    for (int r = 0; r < m; ++r) b.push_back(SymMatrix(Matrix::Constant(1, 1, g(r, i))));
    p.A[i] = BlockMatrix(b, diag);
  }
  std::vector<SymMatrix> bb;
  for (int r = 0; r < m; ++r) bb.push_back(SymMatrix(Matrix::Constant(1, 1, h(r))));
  p.B = BlockMatrix(bb, diag);
  return p;
}

// Minimum over all vertices: every n-subset of rows solved as equalities.
double lp_vertex_oracle(const Matrix& g, const Vector& h, const Vector& c) {
  const int m = static_cast<int>(g.rows());
  const int n = static_cast<int>(g.cols());
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> pick(n);
  for (int i = 0; i < n; ++i) pick[i] = i;
  while (true) {
    Matrix gs(n, n);
    Vector hs(n);
    for (int i = 0; i < n; ++i) {
      gs.row(i) = g.row(pick[i]);
      hs(i) = h(pick[i]);
    }
    Eigen::FullPivLU<Matrix> lu(gs);
    if (lu.isInvertible()) {
      const Vector x = lu.solve(hs);
      if (((g * x - h).array() >= -1e-9).all()) best = std::min(best, c.dot(x));
    }
    int k = n - 1;
    while (k >= 0 && pick[k] == m - n + k) --k;
    if (k < 0) break;
    ++pick[k];
    for (int j = k + 1; j < n; ++j) pick[j] = pick[j - 1] + 1;
  }
  return best;
}

}  // namespace

TEST_CASE("solve examples") {
  const SolveReport a = solve(sqrt2_fixture());
  CHECK(a.status == SolveStatus::Optimal);
  CHECK(std::abs(-a.pobj - std::sqrt(2.0)) <= 1e-5);

  const SolveReport b = solve(third_fixture());
  CHECK(b.status == SolveStatus::Optimal);
  CHECK(std::abs(b.pobj - 1.0 / 3.0) <= 1e-5);

  // Oracle: the smallest x with x I + M >= 0 is -lambda_min(M).
  const double cubic = -test::oracle_eigenvalues(SymMatrix(cubic_constant())).minCoeff();
  CHECK(std::abs(cubic - 2.6679286) <= 1e-6);
  const SolveReport c = solve(cubic_fixture());
  CHECK(c.status == SolveStatus::Optimal);
  CHECK(std::abs(c.pobj - cubic) <= 1e-5);
}

TEST_CASE("report invariants on regression fixtures") {
  for (const PrimalSdp& p : {sqrt2_fixture(), third_fixture(), cubic_fixture(),
                             build_theta_primal(Graph::cycle(5)), build_theta_primal(Graph::petersen())}) {
    SolveOptions o;
    const SolveReport r = solve(p, o);
    REQUIRE(r.status == SolveStatus::Optimal);
    CHECK(r.gap <= o.tol);
    CHECK(r.pinf <= o.feas_tol);
    CHECK(r.dinf <= o.feas_tol);
    CHECK(r.pobj >= r.dobj - 1e-6);
    // Dual feasibility of the returned Y.
    CHECK(min_eigenvalue(r.Y) >= -o.feas_tol);
    for (int i = 0; i < p.num_vars(); ++i)
      CHECK(std::abs(dot(p.A[i], r.Y) - p.c(i)) <= 1e-6 * std::max(1.0, p.c.lpNorm<Eigen::Infinity>()));
    // Monotone gap after the fifth iteration.
    for (std::size_t k = 5; k + 1 < r.gap_history.size(); ++k) CHECK(r.gap_history[k + 1] <= r.gap_history[k]);
  }
}

TEST_CASE("solver is deterministic") {
  const SolveReport a = solve(cubic_fixture());
  const SolveReport b = solve(cubic_fixture());
  CHECK(a.iters == b.iters);
  CHECK(a.pobj == b.pobj);
  CHECK(max_abs(a.x - b.x) == 0.0);
}

TEST_CASE("non-attainment fixture") {
  SolveOptions o;
  const SolveReport r = solve(nonattain_fixture(), o);
  CHECK(r.ok());
  CHECK(r.pobj <= 10 * o.tol);
  CHECK(r.pobj >= -10 * o.tol);
}

TEST_CASE("infeasible primal is not reported optimal") {
  Matrix g(2, 1);
  g << 1, -1;
  Vector h(2);
  h << 1, 0;
  const SolveReport r = solve(lp_as_sdp(g, h, Vector::Ones(1)));
  CHECK_FALSE(r.ok());
  CHECK(r.status == SolveStatus::PrimalInfeasibleSuspected);
}

TEST_CASE("phase1 examples") {
  Matrix g(1, 1);
  g << 1;
  const Phase1Result a = phase1(lp_as_sdp(g, Vector::Ones(1), Vector::Ones(1)));
  CHECK(a.margin < 0.0);
  CHECK(a.x0(0) > 1.0);

  Matrix g2(2, 1);
  g2 << 1, -1;
  Vector h2(2);
  h2 << 1, 0;
  CHECK(phase1(lp_as_sdp(g2, h2, Vector::Ones(1))).margin > 0.0);

  const PrimalSdp th = build_theta_primal(Graph::cycle(5));
  const Phase1Result c = phase1(th);
  CHECK(c.margin < 0.0);
  CHECK(min_eigenvalue(th.slack(c.x0)) >= std::abs(c.margin) / 2 - 1e-9);
}

TEST_CASE("min and max eigenvalue via SDP") {
  CHECK(std::abs(min_eigen_via_sdp(SymMatrix::ones(3)) - 0.0) <= 1e-5);
  CHECK(std::abs(max_eigen_via_sdp(SymMatrix::ones(3)) - 3.0) <= 1e-5);
  CHECK(std::abs(min_eigen_via_sdp(SymMatrix::identity(2)) - 1.0) <= 1e-5);
  CHECK(std::abs(max_eigen_via_sdp(SymMatrix::identity(2)) - 1.0) <= 1e-5);
  const SymMatrix sw(mat(2, {0, 1, 1, 0}));
  CHECK(std::abs(min_eigen_via_sdp(sw) + 1.0) <= 1e-5);
  CHECK(std::abs(max_eigen_via_sdp(sw) - 1.0) <= 1e-5);
  for (int t = 0; t < 20; ++t) {
    const SymMatrix a = test::random_symmetric(2 + t % 8);
    const Vector l = eig_decompose(a).values;
    CHECK(std::abs(min_eigen_via_sdp(a) - l(0)) <= 1e-5);
    CHECK(std::abs(max_eigen_via_sdp(a) - l(l.size() - 1)) <= 1e-5);
  }
}

TEST_CASE("property: random LPs match vertex enumeration") {
  for (int t = 0; t < 100; ++t) {
    const int n = 1 + t % 4;
    const int extra = 3;
    const int m = 2 * n + extra;
    Matrix g = Matrix::Zero(m, n);
    Vector h(m);
    const Vector x0 = test::random_matrix(n, 1);
    for (int i = 0; i < n; ++i) {
      g(2 * i, i) = 1.0;
      h(2 * i) = -5.0;
      g(2 * i + 1, i) = -1.0;
      h(2 * i + 1) = -5.0;
    }
    for (int r = 2 * n; r < m; ++r) {
      g.row(r) = test::random_matrix(1, n);
      h(r) = g.row(r).dot(x0) - test::uniform(0.1, 1.0);
    }
    const Vector c = test::random_matrix(n, 1);
    const SolveReport rep = solve(lp_as_sdp(g, h, c));
    REQUIRE(rep.ok());
    CHECK(std::abs(rep.pobj - lp_vertex_oracle(g, h, c)) <= 1e-6);
  }
}
