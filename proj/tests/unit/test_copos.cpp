#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <sdpkit/copos.hpp>
#include <sdpkit/theta.hpp>

#include "test_support.hpp"

using namespace sdpkit;
using sdpkit::test::error_kind;

namespace {

Matrix mat(int n, std::initializer_list<double> v) {
  Matrix m(n, n);
  auto it = v.begin();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = *it++;
  return m;
}

double zmz(const SymMatrix& m, const std::vector<int>& z) {
  double s = 0.0;
  for (int i = 0; i < m.order(); ++i)
    for (int j = 0; j < m.order(); ++j) s += m.dense()(i, j) * z[i] * z[j];
  return s;
}

// p_M(x) times (sum x^2)^r, built by hand from its monomials.
HomPoly expected_poly(const SymMatrix& m, int r) {
  const int n = m.order();
  HomPoly p(n, 4);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Exponent e(n, 0);
      e[i] += 2;
      e[j] += 2;
      p.add(e, m.dense()(i, j));
    }
  for (int k = 0; k < r; ++k) {
    HomPoly q(n, p.degree + 2);
    for (const auto& [e, c] : p.coeffs)
      for (int i = 0; i < n; ++i) {
        Exponent f = e;
        f[i] += 2;
        q.add(f, c);
      }
    p = q;
  }
  return p;
}

void check_decomposition(const SymMatrix& m, const ConeVerdict& v) {
  REQUIRE(v.decomposition);
  const Decomposition& d = *v.decomposition;
  CHECK(psd_check(d.S).min_eigenvalue >= -1e-7);
  CHECK(d.N.dense().minCoeff() >= -1e-9);
  for (int i = 0; i < m.order(); ++i) CHECK(d.N.dense()(i, i) == 0.0);
  CHECK(test::max_abs(d.S.dense() + d.N.dense() - m.dense()) <= 1e-7);
}

}  // namespace

TEST_CASE("horn matrix entries") {
  const SymMatrix h = horn_matrix();
  REQUIRE(h.order() == 5);
  const Matrix expect = mat(5, {1, -1, 1, 1, -1,  //
                                -1, 1, -1, 1, 1,  //
                                1, -1, 1, -1, 1,  //
                                1, 1, -1, 1, -1,  //
                                -1, 1, 1, -1, 1});
  CHECK(test::max_abs(h.dense() - expect) == 0.0);
  CHECK(h.dense()(0, 1) == -1.0);
  CHECK(h.dense()(0, 2) == 1.0);
  CHECK(h.dense()(0, 4) == -1.0);
  for (int i = 0; i < 5; ++i) {
    CHECK(h.dense()(i, i) == 1.0);
    CHECK(h.dense().row(i).sum() == 1.0);
  }
}

TEST_CASE("in_dnn examples") {
  CHECK(in_dnn(SymMatrix::ones(3)).member);
  CHECK_FALSE(in_dnn(SymMatrix(mat(2, {1, -1, -1, 1}))).member);
  CHECK_FALSE(in_dnn(SymMatrix(mat(2, {0, 1, 1, 0}))).member);
  CHECK(in_dnn(SymMatrix::ones(3)).cone == Cone::SplusCapN);
}

TEST_CASE("in_splus_plus_n examples") {
  const SymMatrix swap(mat(2, {0, 1, 1, 0}));
  const ConeVerdict a = in_splus_plus_n(swap);
  CHECK(a.member);
  CHECK(a.cone == Cone::SplusPlusN);
  check_decomposition(swap, a);

  const ConeVerdict h = in_splus_plus_n(horn_matrix());
  CHECK_FALSE(h.member);
  CHECK_FALSE(h.decomposition);

  for (int t = 0; t < 10; ++t) {
    const SymMatrix p = test::random_psd(4, 2);
    const ConeVerdict v = in_splus_plus_n(p);
    CHECK(v.member);
    check_decomposition(p, v);
  }
}

TEST_CASE("k_r_member examples") {
  const SymMatrix h = horn_matrix();
  CHECK_FALSE(k_r_member(h, 0).member);

  const ConeVerdict k1 = k_r_member(h, 1);
  CHECK(k1.member);
  CHECK(k1.cone == Cone::K_r);
  REQUIRE(k1.r);
  CHECK(*k1.r == 1);
  REQUIRE(k1.sos);
  CHECK(coefficient_distance(expand(*k1.sos, 5), expected_poly(h, 1)) <= 1e-6);

  CHECK(k_r_member(SymMatrix::identity(2), 0).member);
  CHECK(error_kind([] { k_r_member(SymMatrix::identity(9), 1); }) == ErrorKind::UnsupportedSize);
}

TEST_CASE("p_r_outer examples") {
  const ConeVerdict h = p_r_outer(horn_matrix(), 5);
  CHECK(h.member);
  CHECK_FALSE(h.violating_z);

  const ConeVerdict a = p_r_outer(SymMatrix(mat(1, {-1})), 1);
  CHECK_FALSE(a.member);
  REQUIRE(a.violating_z);
  CHECK(*a.violating_z == std::vector<int>{1});

  const SymMatrix m(mat(2, {1, -2, -2, 1}));
  const ConeVerdict b = p_r_outer(m, 2);
  CHECK_FALSE(b.member);
  REQUIRE(b.violating_z);
  CHECK(*b.violating_z == std::vector<int>{1, 1});
  CHECK(zmz(m, *b.violating_z) == -2.0);
  // r = 1 only sees unit vectors, which are fine.
  CHECK(p_r_outer(m, 1).member);
}

TEST_CASE("stable_via_qp examples") {
  const StableQp k3 = stable_via_qp(Graph::complete(3));
  CHECK(k3.value == 1.0);
  CHECK(k3.x.maxCoeff() == 1.0);
  CHECK(k3.x.sum() == 1.0);

  const StableQp c5 = stable_via_qp(Graph::cycle(5));
  CHECK(c5.value == 0.5);
  int support = 0;
  for (int i = 0; i < 5; ++i)
    if (c5.x(i) > 0) {
      ++support;
      CHECK(c5.x(i) == 0.5);
    }
  CHECK(support == 2);
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      if (Graph::cycle(5).has_edge(i, j)) CHECK(c5.x(i) * c5.x(j) == 0.0);

  const StableQp e4 = stable_via_qp(Graph::empty(4));
  CHECK(e4.value == 0.25);
  for (int i = 0; i < 4; ++i) CHECK(e4.x(i) == 0.25);

  CHECK(error_kind([] { stable_via_qp(Graph::empty(21)); }) == ErrorKind::UnsupportedSize);
}

TEST_CASE("alpha0 examples") {
  for (int n = 2; n <= 5; ++n) CHECK(std::abs(alpha0(Graph::complete(n)) - 1.0) <= 1e-4);
  const double c5 = alpha0(Graph::cycle(5));
  CHECK(c5 >= 2.0 - 1e-4);
  CHECK(c5 <= std::sqrt(5.0) + 1e-4);
  CHECK(std::abs(c5 - std::sqrt(5.0)) <= 1e-3);
  const double pg = alpha0(Graph::petersen());
  CHECK(pg >= 4.0 - 1e-4);
  CHECK(pg <= 4.0 + 1e-3);
}

TEST_CASE("property: stable set value and alpha sandwich on all fixtures") {
  for (const Graph& g : test::graph_fixtures()) {
    const int a = alpha_bruteforce(g);
    const StableQp q = stable_via_qp(g);
    CHECK(q.value * a == 1.0);
    CHECK(std::abs(q.x.sum() - 1.0) <= 1e-12);
    // The returned point attains the value.
    Matrix ai = g.adjacency() + Matrix::Identity(g.n(), g.n());
    CHECK(std::abs(q.x.dot(ai * q.x) - q.value) <= 1e-12);
    const double a0 = alpha0(g);
    const double th = solve(build_theta_dual(g)).dobj;
    CHECK(a <= a0 + 1e-3);
    CHECK(a0 <= th + 2e-3);
  }
}

TEST_CASE("property: hierarchy inclusions on random 5x5 matrices") {
  int k0_members = 0, k1_members = 0;
  for (int t = 0; t < 200; ++t) {
    // Mix PSD, nonnegative and indefinite draws so every branch is exercised.
    SymMatrix m;
    switch (t % 4) {
      case 0: m = test::random_psd(5, 3); break;
      case 1: m = SymMatrix(test::random_psd(5, 2).dense().cwiseAbs()); break;
      case 2: m = SymMatrix(test::random_psd(5, 3).dense() + test::random_symmetric(5).dense().cwiseAbs()); break;
      default: m = SymMatrix(test::random_symmetric(5).dense() + 0.8 * Matrix::Identity(5, 5)); break;
    }
    const bool dnn = in_dnn(m).member;
    const ConeVerdict k0 = in_splus_plus_n(m);
    if (dnn) CHECK(k0.member);
    if (psd_check(m).is_psd) CHECK(k0.member);
    if (k0.member) check_decomposition(m, k0);
    CHECK(k_r_member(m, 0).member == k0.member);
    k0_members += k0.member;

    const ConeVerdict k1 = k_r_member(m, 1);
    if (k0.member) CHECK(k1.member);
    if (k1.member) {
      ++k1_members;
      REQUIRE(k1.sos);
      CHECK(coefficient_distance(expand(*k1.sos, 5), expected_poly(m, 1)) <= 1e-6);
    }
    for (int r = 1; r <= 4; ++r) {
      const ConeVerdict p = p_r_outer(m, r);
      if (k1.member) CHECK(p.member);
      if (!p.member) {
        REQUIRE(p.violating_z);
        CHECK(zmz(m, *p.violating_z) < 0.0);
      }
    }
  }
  // The mix must actually cover both outcomes.
  CHECK(k0_members > 0);
  CHECK(k0_members < 200);
  CHECK(k1_members >= k0_members);
}
