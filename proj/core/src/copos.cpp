#include "sdpkit/copos.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "sdpkit/theta.hpp"

namespace sdpkit {

const char* to_string(Cone c) {
  switch (c) {
    case Cone::SplusCapN: return "SplusCapN";
    case Cone::SplusPlusN: return "SplusPlusN";
    case Cone::K_r: return "K_r";
    case Cone::P_r_outer: return "P_r_outer";
  }
  return "?";
}

ConeVerdict in_dnn(const SymMatrix& m) {
  ConeVerdict v;
  v.cone = Cone::SplusCapN;
  v.member = m.dense().minCoeff() >= -1e-9 && psd_check(m).is_psd;
  return v;
}

ConeVerdict in_splus_plus_n(const SymMatrix& m, const SolveOptions& opts) {
  const int n = m.order();
  if (n > 30) throw Error(ErrorKind::UnsupportedSize, "in_splus_plus_n: order must be <= 30");
  PrimalSdp p;
  std::vector<std::pair<int, int>> idx;
  p.A.push_back(BlockMatrix({SymMatrix::identity(n)}));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      Matrix a = Matrix::Zero(n, n);
      a(i, j) = a(j, i) = -1.0;
      p.A.push_back(BlockMatrix({SymMatrix(a)}));
      p.nonneg_vars.push_back(static_cast<int>(idx.size()) + 1);
      idx.emplace_back(i, j);
    }
  p.c = Vector::Zero(p.num_vars());
  p.c(0) = 1.0;
  p.B = BlockMatrix({m * -1.0});
  const SolveReport rep = solve(p, opts);
  if (!rep.ok()) throw Error(ErrorKind::NumericalTrouble, std::string("in_splus_plus_n: ") + to_string(rep.status));

  ConeVerdict v;
  v.cone = Cone::SplusPlusN;
  v.margin = rep.pobj;
  v.member = rep.pobj <= 1e-7 * std::max(1.0, frobenius_norm(m));
  if (v.member) {
    Matrix nm = Matrix::Zero(n, n);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      auto [i, j] = idx[k];
      nm(i, j) = nm(j, i) = std::max(0.0, rep.x(static_cast<int>(k) + 1));
    }
    v.decomposition = Decomposition{SymMatrix(m.dense() - nm), SymMatrix(nm)};
  }
  return v;
}

HomPoly quartic_form(const SymMatrix& m) {
  const int n = m.order();
  HomPoly p(n, 4);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Exponent e(n, 0);
      e[i] += 2;
      e[j] += 2;
      p.add(e, (i == j ? 1.0 : 2.0) * m(i, j));
    }
  return p;
}

ConeVerdict k_r_member(const SymMatrix& m, int r, const SolveOptions& opts) {
  if (r != 0 && r != 1) throw Error(ErrorKind::InvalidArgument, "k_r_member: r must be 0 or 1");
  if (r == 1 && m.order() > 8) throw Error(ErrorKind::UnsupportedSize, "k_r_member: order must be <= 8 for r = 1");
  ConeVerdict v;
  v.cone = Cone::K_r;
  v.r = r;
  const HomPoly p = multiply_norm_power(quartic_form(m), r);
  if (p.coeffs.empty()) {
    v.member = true;
    return v;
  }
  SosResult s = sos_decompose(p, opts);
  v.member = s.feasible;
  v.margin = s.margin;
  v.sos = std::move(s.certificate);
  return v;
}

ConeVerdict p_r_outer(const SymMatrix& m, int r) {
  const int n = m.order();
  if (r < 0) throw Error(ErrorKind::InvalidArgument, "p_r_outer: r must be >= 0");
  double count = 1.0;
  for (int i = 1; i <= r; ++i) count = count * (n + i) / i;
  if (count > 2e7) throw Error(ErrorKind::UnsupportedSize, "p_r_outer: too many integer vectors");
  ConeVerdict v;
  v.cone = Cone::P_r_outer;
  v.r = r;
  v.member = true;
  const Matrix& a = m.dense();
  std::vector<int> z(n, 0);
  int total = 0;
  // Lexicographic walk over z with sum(z) <= r.
  while (true) {
    Vector zv(n);
    for (int i = 0; i < n; ++i) zv(i) = z[i];
    if (zv.dot(a * zv) < -1e-9) {
      v.member = false;
      v.violating_z = z;
      return v;
    }
    if (total < r) {
      ++z[n - 1];
      ++total;
      continue;
    }
    int i = n - 1;
    while (i >= 0 && z[i] == 0) --i;
    if (i <= 0) break;
    total -= z[i] - 1;
    z[i] = 0;
    ++z[i - 1];
  }
  return v;
}

StableQp stable_via_qp(const Graph& g) {
  const int n = g.n();
  if (n > 20) throw Error(ErrorKind::UnsupportedSize, "stable_via_qp: n must be <= 20");
  const Matrix q = g.adjacency() + Matrix::Identity(n, n);
  auto f = [&](const Vector& x) { return x.dot(q * x); };

  auto reduce = [&](Vector x) {
    bool moved = true;
    while (moved) {
      moved = false;
      for (auto [i, j] : g.edges()) {
        if (x(i) <= 0.0 || x(j) <= 0.0) continue;
        // f is linear in the mass split across an edge; move to the better end.
        const double s = x(i) + x(j);
        Vector xi = x, xj = x;
        xi(i) = s;
        xi(j) = 0.0;
        xj(i) = 0.0;
        xj(j) = s;
        x = (f(xj) < f(xi)) ? xj : xi;
        moved = true;
      }
    }
    std::vector<int> support;
    for (int i = 0; i < n; ++i)
      if (x(i) > 0.0) support.push_back(i);
    Vector u = Vector::Zero(n);
    for (int i : support) u(i) = 1.0 / static_cast<double>(support.size());
    return std::make_pair(static_cast<int>(support.size()), u);
  };

  std::vector<Vector> seeds{Vector::Constant(n, 1.0 / n)};
  for (std::uint64_t s : maximal_stable_sets(g)) {
    Vector x = Vector::Zero(n);
    const int k = std::popcount(s);
    for (int i = 0; i < n; ++i)
      if (s >> i & 1) x(i) = 1.0 / k;
    seeds.push_back(x);
  }
  int best = 0;
  Vector best_x;
  for (const Vector& seed : seeds) {
    auto [k, x] = reduce(seed);
    if (k > best) {
      best = k;
      best_x = x;
    }
  }
  return {1.0 / best, best_x};
}

double alpha0(const Graph& g, const SolveOptions& opts) {
  const int n = g.n();
  if (n > 20) throw Error(ErrorKind::UnsupportedSize, "alpha0: n must be <= 20");
  DualSdp d = build_theta_dual(g);
  std::vector<double> c(d.c.data(), d.c.data() + d.c.size());
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      if (g.has_edge(i, j)) continue;
      Matrix a = Matrix::Zero(n, n);
      a(i, j) = a(j, i) = -1.0;
      d.inequality_rows.push_back(d.num_rows());
      d.A.push_back(BlockMatrix({SymMatrix(a)}));
      c.push_back(0.0);
    }
  d.c = Eigen::Map<Vector>(c.data(), static_cast<int>(c.size()));
  const SolveReport rep = solve(d, opts);
  if (!rep.ok()) throw Error(ErrorKind::NumericalTrouble, std::string("alpha0: ") + to_string(rep.status));
  return rep.dobj;
}

SymMatrix horn_matrix() {
  Matrix h(5, 5);
  h << 1, -1, 1, 1, -1,
      -1, 1, -1, 1, 1,
      1, -1, 1, -1, 1,
      1, 1, -1, 1, -1,
      -1, 1, 1, -1, 1;
  return SymMatrix(h);
}

}  // namespace sdpkit
