#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <sdpkit/symcore.hpp>

#include "test_support.hpp"

using namespace sdpkit;
using sdpkit::test::all_ones_family;
using sdpkit::test::error_kind;
using sdpkit::test::max_abs;

namespace {

SymMatrix sym(std::initializer_list<std::initializer_list<double>> rows) {
  const int n = static_cast<int>(rows.size());
  Matrix m(n, n);
  int i = 0;
  for (const auto& r : rows) {
    int j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return SymMatrix(m);
}

// Roots of x^2 - (a + c) x + (ac - b^2) for [[a, b], [b, c]], ascending.
std::pair<double, double> eig2_oracle(double a, double b, double c) {
  const double m = 0.5 * (a + c);
  const double r = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
  return {m - r, m + r};
}

}  // namespace

TEST_CASE("symmetric constructor rejects asymmetric input") {
  Matrix m(2, 2);
  m << 1, 2, 3, 1;
  CHECK(error_kind([&] { SymMatrix s(m); }) == ErrorKind::InvalidArgument);
  m(1, 0) = 2.0 + 1e-14;
  CHECK_NOTHROW(SymMatrix{m});
}

TEST_CASE("eig_decompose examples") {
  const EigenDecomp id = eig_decompose(SymMatrix::identity(3));
  CHECK(max_abs(id.values - Vector::Ones(3)) < 1e-12);
  CHECK(max_abs(id.vectors - Matrix::Identity(3, 3)) < 1e-12);

  const EigenDecomp a3 = eig_decompose(all_ones_family(3, 2.0));
  CHECK(std::abs(a3.values(0)) < 1e-12);
  CHECK(a3.values(1) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(a3.values(2) == doctest::Approx(3.0).epsilon(1e-12));

  const auto [lo, hi] = eig2_oracle(0, 1, 0);
  const EigenDecomp sw = eig_decompose(sym({{0, 1}, {1, 0}}));
  CHECK(sw.values(0) == doctest::Approx(lo));
  CHECK(sw.values(1) == doctest::Approx(hi));
}

TEST_CASE("eig_decompose rejects a non-positive tolerance") {
  CHECK(error_kind([] { eig_decompose(SymMatrix::identity(2), 0.0); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("psd_check examples") {
  const PsdVerdict a = psd_check(all_ones_family(3, 2.0));
  CHECK(a.is_psd);
  CHECK_FALSE(a.is_pd);

  const PsdVerdict b = psd_check(all_ones_family(3, 1.9));
  CHECK_FALSE(b.is_psd);
  REQUIRE(b.witness);
  const Vector w = b.witness->cwiseAbs();
  CHECK(max_abs(w - Vector::Constant(3, 1.0 / std::sqrt(3.0))) < 1e-9);
  const SymMatrix m = all_ones_family(3, 1.9);
  CHECK(std::abs(b.witness->dot(m.dense() * *b.witness) - b.min_eigenvalue) <= 1e-8);

  const PsdVerdict z = psd_check(SymMatrix::zero(2));
  CHECK(z.is_psd);
  CHECK_FALSE(z.is_pd);
  CHECK(z.min_eigenvalue == 0.0);
}

TEST_CASE("sylvester_pd examples") {
  CHECK(sylvester_pd(sym({{2, 1}, {1, 2}})));
  CHECK_FALSE(sylvester_pd(sym({{1, 1}, {1, 1}})));
  CHECK_FALSE(sylvester_pd(sym({{0, 1}, {1, 0}})));
}

TEST_CASE("all_principal_minors_nonneg examples") {
  CHECK(all_principal_minors_nonneg(sym({{1, 1}, {1, 1}})));
  CHECK_FALSE(all_principal_minors_nonneg(sym({{0, 1}, {1, 0}})));
  CHECK(all_principal_minors_nonneg(all_ones_family(3, 2.0)));
  CHECK(error_kind([] { all_principal_minors_nonneg(SymMatrix::identity(15)); }) == ErrorKind::UnsupportedSize);
}

TEST_CASE("chol_pd examples") {
  const CholFactor id = chol_pd(SymMatrix::identity(2));
  CHECK(max_abs(id.lower - Matrix::Identity(2, 2)) < 1e-15);
  CHECK(id.rank == 2);

  // [[4,2],[2,5]]: l11 = 2, l21 = 2/2 = 1, l22 = sqrt(5 - 1) = 2.
  Matrix expect(2, 2);
  expect << 2, 0, 1, 2;
  CHECK(max_abs(chol_pd(sym({{4, 2}, {2, 5}})).lower - expect) < 1e-14);

  CHECK(error_kind([] { chol_pd(sym({{1, 1}, {1, 1}})); }) == ErrorKind::NotPositiveDefinite);
}

TEST_CASE("chol_psd examples") {
  Matrix e1(2, 2);
  e1 << 1, 0, 1, 0;
  const CholFactor a = chol_psd(sym({{1, 1}, {1, 1}}));
  CHECK(max_abs(a.lower - e1) < 1e-14);
  CHECK(a.rank == 1);

  Matrix e2(3, 3);
  e2 << 1, 0, 0, 1, 0, 0, 2, 0, 3;
  const CholFactor b = chol_psd(sym({{1, 1, 2}, {1, 1, 2}, {2, 2, 13}}));
  CHECK(max_abs(b.lower - e2) < 1e-12);
  CHECK(b.rank == 2);

  const CholFactor z = chol_psd(SymMatrix::zero(3));
  CHECK(max_abs(z.lower) == 0.0);
  CHECK(z.rank == 0);

  CHECK(error_kind([] { chol_psd(sym({{1, 2}, {2, 1}})); }) == ErrorKind::NotPsd);
}

TEST_CASE("gram_schmidt_qr examples") {
  const QrResult id = gram_schmidt_qr(Matrix::Identity(2, 2));
  CHECK(max_abs(id.q - Matrix::Identity(2, 2)) < 1e-15);
  CHECK(max_abs(id.r - Matrix::Identity(2, 2)) < 1e-15);

  const QrResult ones = gram_schmidt_qr(Matrix::Ones(2, 2));
  REQUIRE(ones.q.cols() == 1);
  CHECK(max_abs(ones.q - Vector::Constant(2, 1.0 / std::sqrt(2.0))) < 1e-14);
  CHECK(max_abs(ones.r - Matrix::Constant(1, 2, std::sqrt(2.0))) < 1e-14);

  Matrix a(2, 2);
  a << 3, 0, 4, 0;
  const QrResult r = gram_schmidt_qr(a);
  REQUIRE(r.q.cols() == 1);
  CHECK(r.q(0, 0) == doctest::Approx(0.6));
  CHECK(r.q(1, 0) == doctest::Approx(0.8));
  CHECK(r.r(0, 0) == doctest::Approx(5.0));
  CHECK(r.r(0, 1) == doctest::Approx(0.0));
}

TEST_CASE("principal_sqrt examples") {
  CHECK(max_abs(principal_sqrt(SymMatrix::identity(3)).dense() - Matrix::Identity(3, 3)) < 1e-12);
  Matrix d(2, 2);
  d << 2, 0, 0, 3;
  CHECK(max_abs(principal_sqrt(sym({{4, 0}, {0, 9}})).dense() - d) < 1e-12);
  // Eigenpair (2, (1,1)/sqrt2): K = sqrt(2) v v^T = J / sqrt(2).
  CHECK(max_abs(principal_sqrt(SymMatrix::ones(2)).dense() - Matrix::Ones(2, 2) / std::sqrt(2.0)) < 1e-12);
  CHECK(error_kind([] { principal_sqrt(sym({{1, 2}, {2, 1}})); }) == ErrorKind::NotPsd);
}

TEST_CASE("schur_complement examples") {
  CHECK(schur_complement(sym({{1, 1}, {1, 2}}), 1)(0, 0) == doctest::Approx(1.0));
  CHECK(max_abs(schur_complement(SymMatrix::identity(4), 2).dense() - Matrix::Identity(2, 2)) < 1e-15);
  // C - B B^T / 2 with B = (1, 0)^T.
  Matrix e(2, 2);
  e << 1.5, 1, 1, 2;
  CHECK(max_abs(schur_complement(sym({{2, 1, 0}, {1, 2, 1}, {0, 1, 2}}), 1).dense() - e) < 1e-14);
  CHECK(error_kind([] { schur_complement(sym({{0, 1}, {1, 0}}), 1); }) == ErrorKind::LeadingBlockNotPd);
}

TEST_CASE("gershgorin_interval examples") {
  auto [lo, hi] = gershgorin_interval(all_ones_family(3, 2.0));
  CHECK(lo == doctest::Approx(0.0));
  CHECK(hi == doctest::Approx(4.0));
  std::tie(lo, hi) = gershgorin_interval(SymMatrix::identity(5));
  CHECK(lo == 1.0);
  CHECK(hi == 1.0);
  Vector d(2);
  d << 1, 5;
  std::tie(lo, hi) = gershgorin_interval(SymMatrix::diagonal(d));
  CHECK(lo == 1.0);
  CHECK(hi == 5.0);
}

TEST_CASE("frobenius_norm examples") {
  CHECK(frobenius_norm(all_ones_family(3, 0.0)) == doctest::Approx(std::sqrt(6.0)));
  CHECK(frobenius_norm(SymMatrix::zero(3)) == 0.0);
  CHECK(frobenius_norm(SymMatrix::identity(4)) == doctest::Approx(2.0));
}

TEST_CASE("gram_factor examples") {
  for (GramMethod m : {GramMethod::Cholesky, GramMethod::Eigen, GramMethod::Sqrt}) {
    const Matrix v = gram_factor(SymMatrix::identity(2), m);
    CHECK(max_abs(v * v.transpose() - Matrix::Identity(2, 2)) < 1e-12);
  }
  const Matrix v = gram_factor(SymMatrix::ones(2), GramMethod::Eigen);
  REQUIRE(v.cols() == 1);
  CHECK(max_abs(v.cwiseAbs() - Matrix::Ones(2, 1)) < 1e-12);

  Matrix l(3, 3);
  l << 1, 0, 0, 1, 0, 0, 2, 0, 3;
  CHECK(max_abs(gram_factor(sym({{1, 1, 2}, {1, 1, 2}, {2, 2, 13}}), GramMethod::Cholesky) - l) < 1e-12);
  CHECK(error_kind([] { gram_factor(sym({{1, 2}, {2, 1}}), GramMethod::Eigen); }) == ErrorKind::NotPsd);
}

TEST_CASE("rank_of examples") {
  CHECK(rank_of(SymMatrix::ones(3)) == 1);
  CHECK(rank_of(SymMatrix::identity(3)) == 3);
  CHECK(rank_of(SymMatrix::zero(3)) == 0);
}

TEST_CASE("property: reconstruction and orthonormality") {
  for (int t = 0; t < 120; ++t) {
    const int n = 1 + t % 30;
    const SymMatrix a = test::random_symmetric(n);
    const EigenDecomp e = eig_decompose(a);
    const Matrix& u = e.vectors;
    CHECK(max_abs(u * e.values.asDiagonal() * u.transpose() - a.dense()) <= 1e-9);
    CHECK(max_abs(u.transpose() * u - Matrix::Identity(n, n)) <= 1e-10);
    CHECK(max_abs(e.values - test::oracle_eigenvalues(a)) <= 1e-9);
    for (int i = 1; i < n; ++i) CHECK(e.values(i - 1) <= e.values(i));
  }
}

TEST_CASE("property: PSD criteria agree") {
  for (int t = 0; t < 500; ++t) {
    const int n = 1 + t % 10;
    SymMatrix a = t % 3 == 0   ? test::random_psd(n, 1 + t % n)
                  : t % 3 == 1 ? test::random_pd(n)
                               : test::random_symmetric(n);
    const PsdVerdict v = psd_check(a);
    CHECK(v.is_psd == (test::oracle_eigenvalues(a).minCoeff() >= -1e-9 * std::max(1.0, frobenius_norm(a))));
    CHECK(all_principal_minors_nonneg(a) == v.is_psd);
    // Sylvester is compared only where every leading block is well away from singular.
    bool regular = true;
    for (int k = 1; k <= n; ++k) {
      const Vector lk = test::oracle_eigenvalues(SymMatrix(a.dense().topLeftCorner(k, k)));
      regular = regular && lk.cwiseAbs().minCoeff() > 1e-6;
    }
    if (regular) CHECK(sylvester_pd(a) == v.is_pd);
    if (v.is_pd) CHECK(v.is_psd);
  }
}

TEST_CASE("property: interlacing") {
  for (int t = 0; t < 150; ++t) {
    const int n = 2 + t % 9;
    const SymMatrix a = test::random_symmetric(n);
    std::vector<int> idx(n - 1);
    for (int i = 0; i < n - 1; ++i) idx[i] = i;
    const Vector l = eig_decompose(a).values;
    const Vector lp = eig_decompose(principal_submatrix(a, idx)).values;
    for (int i = 0; i < n - 1; ++i) {
      CHECK(l(i) <= lp(i) + 1e-8);
      CHECK(lp(i) <= l(i + 1) + 1e-8);
    }
  }
}

TEST_CASE("property: congruence preserves PSD status") {
  for (int t = 0; t < 150; ++t) {
    const int n = 1 + t % 8;
    const SymMatrix s = t % 2 ? test::random_psd(n, 1 + t % n) : test::random_symmetric(n);
    const Matrix q = test::random_pd(n).dense();
    const SymMatrix c(q.transpose() * s.dense() * q);
    CHECK(psd_check(s, 1e-7).is_psd == psd_check(c, 1e-7).is_psd);
  }
}

TEST_CASE("property: product trace of PSD matrices") {
  for (int t = 0; t < 150; ++t) {
    const int n = 2 + t % 7;
    const SymMatrix a = test::random_psd(n, 1 + t % n);
    SymMatrix b = test::random_psd(n, 1 + (t / 2) % n);
    if (t % 5 == 0) {
      // B supported on the orthogonal complement of range(A).
      const EigenDecomp e = eig_decompose(a);
      const int r = rank_of(a);
      const Matrix u = e.vectors.leftCols(n - r);
      b = SymMatrix(u * u.transpose());
    }
    const double ip = dot(a, b);
    CHECK(ip >= -1e-9);
    if (std::abs(ip) <= 1e-9) CHECK(max_abs(a.dense() * b.dense()) <= 1e-6);
  }
}

TEST_CASE("property: Schur complement status") {
  for (int t = 0; t < 150; ++t) {
    const int n = 2 + t % 8;
    const int k = 1 + t % (n - 1);
    Matrix m = t % 2 ? test::random_psd(n, n - 1 + t % 2).dense() : test::random_symmetric(n).dense();
    m.topLeftCorner(k, k) += (1.0 + std::abs(m.topLeftCorner(k, k).eigenvalues().real().minCoeff())) *
                             Matrix::Identity(k, k);
    const SymMatrix ms(m);
    CHECK(psd_check(ms, 1e-8).is_psd == psd_check(schur_complement(ms, k), 1e-8).is_psd);
  }
}

TEST_CASE("property: principal square root uniqueness") {
  for (int t = 0; t < 120; ++t) {
    const int n = 1 + t % 10;
    const SymMatrix a = test::random_psd(n, 1 + t % n);
    const SymMatrix k = principal_sqrt(a);
    CHECK(psd_check(k, 1e-7).is_psd);
    CHECK(max_abs(k.dense() * k.dense() - a.dense()) <= 1e-8);
    // Independent construction U sqrt(L) U^T from Eigen's solver.
    Eigen::SelfAdjointEigenSolver<Matrix> es(a.dense());
    const Vector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Matrix other = es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
    CHECK(max_abs(k.dense() - other) <= 1e-6);
  }
}

TEST_CASE("property: diagonal zero forces a zero row") {
  for (int t = 0; t < 100; ++t) {
    const int n = 2 + t % 7;
    const int j = t % n;
    Matrix v = test::random_matrix(n, n);
    v.row(j).setZero();
    const SymMatrix a(v * v.transpose());
    REQUIRE(psd_check(a).is_psd);
    CHECK(std::abs(a(j, j)) <= 1e-12);
    CHECK(max_abs(a.dense().row(j)) <= 1e-9);
  }
}

TEST_CASE("property: Cholesky factors") {
  for (int t = 0; t < 150; ++t) {
    const int n = 1 + t % 10;
    const SymMatrix pd = test::random_pd(n);
    const CholFactor f = chol_pd(pd);
    CHECK(max_abs(f.lower * f.lower.transpose() - pd.dense()) <= 1e-9);
    CHECK(f.lower.diagonal().minCoeff() > 0.0);
    CHECK(max_abs(f.lower.triangularView<Eigen::StrictlyUpper>().toDenseMatrix()) == 0.0);

    const int r = 1 + t % n;
    const SymMatrix psd = test::random_psd(n, r);
    const CholFactor g = chol_psd(psd);
    CHECK(max_abs(g.lower * g.lower.transpose() - psd.dense()) <= 1e-8);
    CHECK(g.lower.diagonal().minCoeff() >= 0.0);
    CHECK(g.rank == rank_of(psd, 1e-7));
  }
}

TEST_CASE("property: QR and Gram factors") {
  for (int t = 0; t < 120; ++t) {
    const int n = 1 + t % 8;
    const int m = 1 + (t / 3) % 8;
    Matrix a = test::random_matrix(n, m);
    if (t % 4 == 0 && m > 1) a.col(m - 1) = a.col(0) * 2.0;
    const QrResult qr = gram_schmidt_qr(a);
    CHECK(max_abs(qr.q * qr.r - a) <= 1e-9);
    CHECK(max_abs(qr.q.transpose() * qr.q - Matrix::Identity(qr.q.cols(), qr.q.cols())) <= 1e-10);
    CHECK(qr.q.cols() == Eigen::FullPivLU<Matrix>(a).rank());

    const SymMatrix p = test::random_psd(n, 1 + t % n);
    for (GramMethod meth : {GramMethod::Cholesky, GramMethod::Eigen, GramMethod::Sqrt}) {
      const Matrix v = gram_factor(p, meth);
      CHECK(max_abs(v * v.transpose() - p.dense()) <= 1e-8);
    }
  }
}

TEST_CASE("property: Frobenius bound and Gershgorin enclosure") {
  for (int t = 0; t < 120; ++t) {
    const SymMatrix a = test::random_symmetric(1 + t % 12);
    const Vector l = eig_decompose(a).values;
    const double f = frobenius_norm(a);
    CHECK(l.cwiseAbs().maxCoeff() <= f + 1e-12);
    CHECK(l.squaredNorm() == doctest::Approx(f * f).epsilon(1e-8));
    const auto [lo, hi] = gershgorin_interval(a);
    CHECK(l.minCoeff() >= lo - 1e-12);
    CHECK(l.maxCoeff() <= hi + 1e-12);
  }
}
