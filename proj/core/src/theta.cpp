#include "sdpkit/theta.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <functional>
#include <map>

namespace sdpkit {

namespace {

SymMatrix unit_sym(int n, int i, int j, double v = 1.0) {
  Matrix m = Matrix::Zero(n, n);
  m(i, j) = v;
  m(j, i) = v;
  return SymMatrix(m);
}

SolveReport must_solve(const DualSdp& d, const SolveOptions& opts, const char* what) {
  SolveReport r = solve(d, opts);
  if (!r.ok()) throw Error(ErrorKind::NumericalTrouble, std::string(what) + ": " + to_string(r.status));
  return r;
}

SolveReport must_solve(const PrimalSdp& p, const SolveOptions& opts, const char* what) {
  SolveReport r = solve(p, opts);
  if (!r.ok()) throw Error(ErrorKind::NumericalTrouble, std::string(what) + ": " + to_string(r.status));
  return r;
}

std::uint64_t bit(int i) { return std::uint64_t{1} << i; }

}  // namespace

PrimalSdp build_theta_primal(const Graph& g) {
  const int n = g.n();
  PrimalSdp p;
  p.c = Vector::Zero(1 + g.num_edges());
  p.c(0) = 1.0;
  p.A.push_back(BlockMatrix({SymMatrix::identity(n)}));
  for (auto [i, j] : g.edges()) p.A.push_back(BlockMatrix({unit_sym(n, i, j)}));
  Matrix b = Matrix::Ones(n, n);
  for (auto [i, j] : g.edges()) b(i, j) = b(j, i) = 0.0;
  p.B = BlockMatrix({SymMatrix(b)});
  return p;
}

DualSdp build_theta_dual(const Graph& g) {
  const int n = g.n();
  DualSdp d;
  d.B = BlockMatrix({SymMatrix::ones(n)});
  d.A.push_back(BlockMatrix({SymMatrix::identity(n)}));
  for (auto [i, j] : g.edges()) d.A.push_back(BlockMatrix({unit_sym(n, i, j)}));
  d.c = Vector::Zero(1 + g.num_edges());
  d.c(0) = 1.0;
  return d;
}

DualSdp build_theta_prime(const Graph& g) {
  const int n = g.n();
  const int m = n + 1;
  DualSdp d;
  Matrix b = Matrix::Zero(m, m);
  for (int i = 1; i <= n; ++i) b(0, i) = b(i, 0) = 0.5;
  d.B = BlockMatrix({SymMatrix(b)});
  std::vector<double> rhs;
  d.A.push_back(BlockMatrix({unit_sym(m, 0, 0)}));
  rhs.push_back(1.0);
  for (auto [i, j] : g.edges()) {
    d.A.push_back(BlockMatrix({unit_sym(m, i + 1, j + 1)}));
    rhs.push_back(0.0);
  }
  for (int i = 1; i <= n; ++i) {
    Matrix a = Matrix::Zero(m, m);
    a(i, i) = 1.0;
    a(0, i) = a(i, 0) = -0.5;
    d.A.push_back(BlockMatrix({SymMatrix(a)}));
    rhs.push_back(0.0);
  }
  d.c = Eigen::Map<Vector>(rhs.data(), static_cast<int>(rhs.size()));
  return d;
}

LambdaValues lambda_formulation_values(const Graph& g, const BlockMatrix& y_opt) {
  if (y_opt.num_blocks() != 1 || y_opt.block(0).order() != g.n())
    throw Error(ErrorKind::DimensionMismatch, "lambda_formulation_values: Y must be one block of order n");
  const int n = g.n();
  const Matrix& y = y_opt.block(0).dense();
  Vector x(n);
  for (int i = 0; i < n; ++i) x(i) = std::sqrt(std::max(0.0, y(i, i)));
  if (x.maxCoeff() < 1e-9) throw Error(ErrorKind::DegenerateInput, "Y has an all-zero diagonal");
  Matrix z = Matrix::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j || x(i) < 1e-9 || x(j) < 1e-9 || g.has_edge(i, j)) continue;
      z(i, j) = y(i, j) / (x(i) * x(j));
    }
  const EigenDecomp e = eig_decompose(SymMatrix(0.5 * (z + z.transpose())));
  LambdaValues out;
  out.lambda_max = e.values(n - 1);
  const double xmax = e.values(n - 1) - 1.0;
  const double xmin = e.values(0) - 1.0;
  const double eps = 1e-12;
  out.lambda_ratio = (std::abs(xmax) < eps && std::abs(xmin) < eps) ? 1.0 : 1.0 - xmax / xmin;
  return out;
}

OrthoRep orthonormal_representation(const Graph& g, const SymMatrix& zbar_opt) {
  const int n = g.n();
  if (zbar_opt.order() != n) throw Error(ErrorKind::DimensionMismatch, "orthonormal_representation: order");
  Matrix v;
  try {
    v = gram_factor(project_psd(zbar_opt), GramMethod::Eigen);
  } catch (const Error& e) {
    throw Error(ErrorKind::FactorizationFailure, e.what());
  }
  OrthoRep rep;
  for (int i = 0; i < n; ++i) {
    Vector u(1 + v.cols());
    u(0) = 1.0;
    u.tail(v.cols()) = v.row(i).transpose();
    const double nrm = u.norm();
    u /= nrm;
    rep.vectors.push_back(u);
    rep.value = std::max(rep.value, 1.0 / (u(0) * u(0)));
  }
  return rep;
}

OrthoRep leaning_representation(const Graph& g, const SymMatrix& yprime_opt) {
  const int n = g.n();
  if (yprime_opt.order() != n + 1) throw Error(ErrorKind::DimensionMismatch, "leaning_representation: order");
  Matrix w;
  try {
    w = gram_factor(project_psd(yprime_opt), GramMethod::Eigen);
  } catch (const Error& e) {
    throw Error(ErrorKind::FactorizationFailure, e.what());
  }
  const int k = static_cast<int>(w.cols());
  if (k == 0 || w.row(0).norm() < 1e-9) throw Error(ErrorKind::FactorizationFailure, "zero handle vector");
  Vector c = w.row(0).transpose() / w.row(0).norm();
  // Householder reflection sending c to e_1.
  Vector h = c - Vector::Unit(k, 0);
  const double hn = h.squaredNorm();
  auto reflect = [&](const Vector& a) -> Vector { return hn < 1e-30 ? a : Vector(a - 2.0 * h * (h.dot(a) / hn)); };

  std::vector<int> degenerate;
  for (int i = 1; i <= n; ++i)
    if (w.row(i).norm() < 1e-9) degenerate.push_back(i);
  const int dim = k + static_cast<int>(degenerate.size());
  OrthoRep rep;
  int extra = 0;
  for (int i = 1; i <= n; ++i) {
    Vector u = Vector::Zero(dim);
    const double d = w.row(i).norm();
    if (d < 1e-9) {
      u(k + extra++) = 1.0;
    } else {
      u.head(k) = reflect(w.row(i).transpose() / d);
    }
    rep.value += u(0) * u(0);
    rep.vectors.push_back(u);
  }
  return rep;
}

double psi_r(const Graph& g, int r, const SolveOptions& opts) {
  const int n = g.n();
  if (r != 1 && r != 2) throw Error(ErrorKind::InvalidArgument, "psi_r: r must be 1 or 2");
  if ((r == 2 && n > 10) || n > 60) throw Error(ErrorKind::UnsupportedSize, "psi_r: graph too large");
  std::vector<std::uint64_t> sets{0};
  for (int i = 0; i < n; ++i) sets.push_back(bit(i));
  if (r == 2)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) sets.push_back(bit(i) | bit(j));
  const int m = static_cast<int>(sets.size());

  std::map<std::uint64_t, int> var;  // free union sets, y_emptyset first
  var[0] = 0;
  std::vector<std::vector<std::tuple<int, int>>> pos(1);
  Matrix bfix = Matrix::Zero(m, m);
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b) {
      const std::uint64_t s = sets[a] | sets[b];
      const int sz = std::popcount(s);
      if (sz == 1) {
        bfix(a, b) = bfix(b, a) = -1.0;  // y_{i} = 1 moves to -B
        continue;
      }
      if (sz == 2) {
        const int i = std::countr_zero(s);
        const int j = 63 - std::countl_zero(s);
        if (!g.has_edge(i, j)) continue;  // y_{ij} = 0 on non-edges
      }
      auto it = var.find(s);
      if (it == var.end()) {
        it = var.emplace(s, static_cast<int>(pos.size())).first;
        pos.emplace_back();
      }
      pos[it->second].emplace_back(a, b);
    }
  PrimalSdp p;
  p.c = Vector::Zero(static_cast<int>(pos.size()));
  p.c(0) = 1.0;
  for (const auto& entries : pos) {
    Matrix a = Matrix::Zero(m, m);
    for (auto [i, j] : entries) a(i, j) = a(j, i) = 1.0;
    p.A.push_back(BlockMatrix({SymMatrix(a)}));
  }
  p.B = BlockMatrix({SymMatrix(bfix)});
  return must_solve(p, opts, "psi_r").pobj;
}

std::vector<std::uint64_t> maximal_stable_sets(const Graph& g) {
  const int n = g.n();
  if (n > 62) throw Error(ErrorKind::UnsupportedSize, "maximal_stable_sets: n too large");
  const auto nb = g.neighbour_masks();
  std::vector<std::uint64_t> out;
  // Bron-Kerbosch with pivoting on the complement graph.
  std::function<void(std::uint64_t, std::uint64_t, std::uint64_t)> bk = [&](std::uint64_t rset, std::uint64_t p,
                                                                             std::uint64_t x) {
    if (p == 0 && x == 0) {
      out.push_back(rset);
      return;
    }
    const std::uint64_t all = (n == 64) ? ~std::uint64_t{0} : (bit(n) - 1);
    auto non_nb = [&](int v) { return all & ~nb[v] & ~bit(v); };
    const std::uint64_t px = p | x;
    const int u = std::countr_zero(px);
    std::uint64_t cand = p & ~non_nb(u);
    while (cand) {
      const int v = std::countr_zero(cand);
      cand &= cand - 1;
      bk(rset | bit(v), p & non_nb(v), x & non_nb(v));
      p &= ~bit(v);
      x |= bit(v);
    }
  };
  bk(0, (n == 64) ? ~std::uint64_t{0} : (bit(n) - 1), 0);
  std::sort(out.begin(), out.end());
  return out;
}

double fractional_chromatic(const Graph& h, const SolveOptions& opts) {
  const int n = h.n();
  if (n > 12) throw Error(ErrorKind::UnsupportedSize, "fractional_chromatic: n must be <= 12");
  const auto sets = maximal_stable_sets(h);
  PrimalSdp p;
  const int k = static_cast<int>(sets.size());
  p.c = Vector::Ones(k);
  for (int s = 0; s < k; ++s) {
    Vector d = Vector::Zero(n);
    for (int i = 0; i < n; ++i)
      if (sets[s] & bit(i)) d(i) = 1.0;
    p.A.push_back(BlockMatrix({SymMatrix::diagonal(d)}, {true}));
    p.nonneg_vars.push_back(s);
  }
  p.B = BlockMatrix({SymMatrix::identity(n)}, {true});
  return must_solve(p, opts, "fractional_chromatic").pobj;
}

int alpha_bruteforce(const Graph& g) {
  if (g.n() > 20) throw Error(ErrorKind::UnsupportedSize, "alpha_bruteforce: n must be <= 20");
  const auto nb = g.neighbour_masks();
  std::function<int(std::uint64_t)> rec = [&](std::uint64_t p) -> int {
    if (p == 0) return 0;
    int best_v = -1, best_d = -1;
    for (std::uint64_t q = p; q; q &= q - 1) {
      const int v = std::countr_zero(q);
      const int d = std::popcount(nb[v] & p);
      if (d > best_d) {
        best_d = d;
        best_v = v;
      }
    }
    if (best_d == 0) return std::popcount(p);
    const int with = 1 + rec(p & ~nb[best_v] & ~bit(best_v));
    const int without = rec(p & ~bit(best_v));
    return std::max(with, without);
  };
  return rec(bit(g.n()) - 1);
}

int clique_cover_bruteforce(const Graph& g) {
  const int n = g.n();
  if (n > 12) throw Error(ErrorKind::UnsupportedSize, "clique_cover_bruteforce: n must be <= 12");
  const auto nb = g.neighbour_masks();
  const std::uint32_t full = (1u << n) - 1;
  std::vector<char> clique(full + 1, 0);
  clique[0] = 1;
  for (std::uint32_t m = 1; m <= full; ++m) {
    const int v = std::countr_zero(m);
    const std::uint32_t rest = m & (m - 1);
    clique[m] = clique[rest] && ((rest & ~static_cast<std::uint32_t>(nb[v])) == 0);
  }
  std::vector<int> dp(full + 1, n + 1);
  dp[0] = 0;
  for (std::uint32_t m = 1; m <= full; ++m) {
    const std::uint32_t low = m & (~m + 1);
    const std::uint32_t rest = m ^ low;
    for (std::uint32_t s = rest;; s = (s - 1) & rest) {
      const std::uint32_t c = s | low;
      if (clique[c]) dp[m] = std::min(dp[m], dp[m ^ c] + 1);
      if (s == 0) break;
    }
  }
  return dp[full];
}

ThetaReport theta_report(const Graph& g, const SolveOptions& opts) {
  ThetaReport rep;
  const PrimalSdp primal = build_theta_primal(g);
  const SolveReport rp = must_solve(primal, opts, "theta primal");
  rep.theta_primal = rp.pobj;
  const SolveReport rd = must_solve(build_theta_dual(g), opts, "theta dual");
  rep.theta_dual = rd.dobj;
  const SolveReport rq = must_solve(build_theta_prime(g), opts, "theta prime");
  rep.theta_prime = rq.dobj;
  const LambdaValues lv = lambda_formulation_values(g, rd.Y);
  rep.theta_lambda_max = lv.lambda_max;
  rep.theta_lambda_ratio = lv.lambda_ratio;
  rep.theta_orthonormal = orthonormal_representation(g, primal.slack(rp.x).block(0)).value;
  rep.theta_leaning = leaning_representation(g, rq.Y.block(0)).value;
  rep.alpha = alpha_bruteforce(g);
  if (g.n() <= 12) {
    rep.clique_cover = clique_cover_bruteforce(g);
    rep.chi_star = fractional_chromatic(g.complement(), opts);
  }
  return rep;
}

}  // namespace sdpkit
