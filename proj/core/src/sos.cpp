#include "sdpkit/sos.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace sdpkit {

namespace {

double binomial(int n, int k) {
  double r = 1.0;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return std::round(r);
}

void exponents_of_degree(int nvars, int k, int pos, Exponent& cur, std::vector<Exponent>& out) {
  if (pos == nvars - 1) {
    cur[pos] = k;
    out.push_back(cur);
    return;
  }
  for (int e = k; e >= 0; --e) {
    cur[pos] = e;
    exponents_of_degree(nvars, k - e, pos + 1, cur, out);
  }
}

Exponent add_exp(const Exponent& a, const Exponent& b) {
  Exponent r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

constexpr std::size_t kMaxGramBasis = 120;

}  // namespace

HomPoly::HomPoly(int n, int d) : nvars(n), degree(d) {
  if (n < 1) throw Error(ErrorKind::InvalidArgument, "polynomial needs at least one variable");
  if (d < 0) throw Error(ErrorKind::InvalidArgument, "negative degree");
}

void HomPoly::add(const Exponent& e, double v) {
  if (static_cast<int>(e.size()) != nvars) throw Error(ErrorKind::DimensionMismatch, "exponent length");
  if (std::accumulate(e.begin(), e.end(), 0) != degree)
    throw Error(ErrorKind::InvalidArgument, "monomial degree differs from polynomial degree");
  for (int x : e)
    if (x < 0) throw Error(ErrorKind::InvalidArgument, "negative exponent");
  auto it = coeffs.find(e);
  if (it == coeffs.end()) {
    if (v != 0.0) coeffs.emplace(e, v);
    return;
  }
  it->second += v;
  if (it->second == 0.0) coeffs.erase(it);
}

double HomPoly::coeff(const Exponent& e) const {
  auto it = coeffs.find(e);
  return it == coeffs.end() ? 0.0 : it->second;
}

void HomPoly::validate() const {
  for (const auto& [e, v] : coeffs) {
    if (static_cast<int>(e.size()) != nvars) throw Error(ErrorKind::DimensionMismatch, "exponent length");
    if (std::accumulate(e.begin(), e.end(), 0) != degree)
      throw Error(ErrorKind::InvalidArgument, "monomial degree differs from polynomial degree");
    if (v == 0.0 || !std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, "bad coefficient");
  }
}

std::vector<Exponent> monomial_basis(int nvars, int d, bool exact) {
  if (nvars < 1 || d < 0) throw Error(ErrorKind::InvalidArgument, "monomial_basis: bad arguments");
  const double count = exact ? binomial(nvars + d - 1, d) : binomial(nvars + d, d);
  if (count > 5000) throw Error(ErrorKind::UnsupportedSize, "monomial_basis: more than 5000 monomials");
  std::vector<Exponent> out;
  Exponent cur(nvars, 0);
  for (int k = exact ? d : 0; k <= d; ++k) exponents_of_degree(nvars, k, 0, cur, out);
  return out;
}

double eval(const HomPoly& p, const Vector& x) {
  if (x.size() != p.nvars) throw Error(ErrorKind::DimensionMismatch, "eval: point has wrong length");
  double s = 0.0;
  for (const auto& [e, v] : p.coeffs) {
    double t = v;
    for (int i = 0; i < p.nvars; ++i) t *= std::pow(x(i), e[i]);
    s += t;
  }
  return s;
}

HomPoly multiply(const HomPoly& a, const HomPoly& b) {
  if (a.nvars != b.nvars) throw Error(ErrorKind::DimensionMismatch, "multiply: variable counts differ");
  HomPoly r(a.nvars, a.degree + b.degree);
  for (const auto& [ea, va] : a.coeffs)
    for (const auto& [eb, vb] : b.coeffs) r.add(add_exp(ea, eb), va * vb);
  return r;
}

HomPoly multiply_norm_power(const HomPoly& p, int r) {
  if (r < 0) throw Error(ErrorKind::InvalidArgument, "multiply_norm_power: r must be >= 0");
  HomPoly norm(p.nvars, 2);
  for (int i = 0; i < p.nvars; ++i) {
    Exponent e(p.nvars, 0);
    e[i] = 2;
    norm.add(e, 1.0);
  }
  HomPoly out = p;
  for (int k = 0; k < r; ++k) out = multiply(out, norm);
  return out;
}

HomPoly expand(const SosCertificate& cert, int nvars) {
  const int n = static_cast<int>(cert.basis.size());
  const int d = n ? std::accumulate(cert.basis[0].begin(), cert.basis[0].end(), 0) : 0;
  Matrix g = Matrix::Zero(n, n);
  for (const Vector& s : cert.squares) g += s * s.transpose();
  std::map<Exponent, double> acc;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) acc[add_exp(cert.basis[a], cert.basis[b])] += g(a, b);
  HomPoly out(nvars, 2 * d);
  for (const auto& [e, v] : acc) out.add(e, v);
  return out;
}

double coefficient_distance(const HomPoly& a, const HomPoly& b) {
  double worst = 0.0;
  for (const auto& [e, v] : a.coeffs) worst = std::max(worst, std::abs(v - b.coeff(e)));
  for (const auto& [e, v] : b.coeffs) worst = std::max(worst, std::abs(v - a.coeff(e)));
  return worst;
}

SosResult sos_decompose(const HomPoly& p, const SolveOptions& opts) {
  p.validate();
  if (p.degree % 2 != 0 || p.degree == 0)
    throw Error(ErrorKind::InvalidArgument, "sos_decompose: degree must be even and positive");
  const int d = p.degree / 2;
  const auto basis = monomial_basis(p.nvars, d, true);
  if (basis.size() > kMaxGramBasis)
    throw Error(ErrorKind::UnsupportedSize, "sos_decompose: basis has " + std::to_string(basis.size()) + " monomials");
  const int n = static_cast<int>(basis.size());

  // One row per degree-2d monomial; pairs (a, b) with a <= b hitting it.
  std::map<Exponent, int> row_of;
  std::vector<Exponent> row_mono;
  std::vector<std::vector<std::pair<int, int>>> pairs;
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      const Exponent m = add_exp(basis[a], basis[b]);
      auto it = row_of.find(m);
      if (it == row_of.end()) {
        it = row_of.emplace(m, static_cast<int>(pairs.size())).first;
        row_mono.push_back(m);
        pairs.emplace_back();
      }
      pairs[it->second].emplace_back(a, b);
    }
  const int rows = static_cast<int>(pairs.size());

  // A Gram matrix matching p: spread each coefficient evenly over its entries.
  Matrix g0 = Matrix::Zero(n, n);
  for (int r = 0; r < rows; ++r) {
    int entries = 0;
    for (auto [a, b] : pairs[r]) entries += (a == b) ? 1 : 2;
    for (auto [a, b] : pairs[r]) g0(a, b) = g0(b, a) = p.coeff(row_mono[r]) / entries;
  }
  const double t0 = g0.norm() + 1.0;

  // Gram = G'' + (s - t0) I with G'' >= 0, s >= 0; maximize s.
  DualSdp sdp;
  sdp.B = BlockMatrix({SymMatrix::zero(n), SymMatrix::identity(1)});
  sdp.c = Vector::Zero(rows);
  for (int r = 0; r < rows; ++r) {
    Matrix a = Matrix::Zero(n, n);
    double diag = 0.0;
    for (auto [i, j] : pairs[r]) {
      a(i, j) = a(j, i) = 1.0;
      if (i == j) diag += 1.0;
    }
    sdp.A.push_back(BlockMatrix({SymMatrix(a), SymMatrix(Matrix::Constant(1, 1, diag))}));
    sdp.c(r) = p.coeff(row_mono[r]) + t0 * diag;
  }

  const SolveReport rep = solve(sdp, opts);
  SosResult out;
  out.status = rep.status;
  out.pinf = rep.pinf;
  out.dinf = rep.dinf;
  if (!rep.ok())
    throw Error(ErrorKind::NumericalTrouble, std::string("sos_decompose: ") + to_string(rep.status));
  out.margin = rep.dobj - t0;
  if (out.margin < -1e-6) return out;

  const double s = rep.Y.block(1)(0, 0);
  const Matrix gram = rep.Y.block(0).dense() + (s - t0) * Matrix::Identity(n, n);
  const SymMatrix gp = project_psd(SymMatrix(0.5 * (gram + gram.transpose())));
  const EigenDecomp e = eig_decompose(gp);
  const double thr = 1e-9 * std::max(1.0, frobenius_norm(gp));
  SosCertificate cert;
  cert.basis = basis;
  cert.gram = gp;
  for (int k = n - 1; k >= 0; --k)
    if (e.values(k) > thr) cert.squares.push_back(std::sqrt(e.values(k)) * e.vectors.col(k));
  if (coefficient_distance(expand(cert, p.nvars), p) > 1e-6) return out;
  out.feasible = true;
  out.certificate = std::move(cert);
  return out;
}

}  // namespace sdpkit
