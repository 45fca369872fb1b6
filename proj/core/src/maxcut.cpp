#include "sdpkit/maxcut.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <random>
#include <string>
#include <thread>

namespace sdpkit {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t trial_key(std::uint64_t seed, std::uint64_t trial) { return splitmix64(splitmix64(seed) ^ trial); }

}  // namespace

GwSdp build_gw_sdp(const WeightedGraph& g) {
  const int n = g.n();
  if (n > 40) throw Error(ErrorKind::UnsupportedSize, "build_gw_sdp: n must be <= 40");
  GwSdp out;
  out.sdp.B = BlockMatrix({SymMatrix(-0.25 * g.weights())});
  for (int i = 0; i < n; ++i) {
    Matrix e = Matrix::Zero(n, n);
    e(i, i) = 1.0;
    out.sdp.A.push_back(BlockMatrix({SymMatrix(e)}));
  }
  out.sdp.c = Vector::Ones(n);
  out.offset = 0.5 * g.total_weight();
  return out;
}

GwSolution solve_gw(const WeightedGraph& g, const SolveOptions& opts) {
  const GwSdp m = build_gw_sdp(g);
  GwSolution out;
  out.report = solve(m.sdp, opts);
  if (!out.report.ok()) throw Error(ErrorKind::NumericalTrouble, std::string("maxcut sdp: ") + to_string(out.report.status));
  out.bound = m.offset + out.report.dobj;
  out.X = out.report.Y.block(0);
  return out;
}

double cut_value(const WeightedGraph& g, const std::vector<int>& z) {
  const int n = g.n();
  if (static_cast<int>(z.size()) != n) throw Error(ErrorKind::DimensionMismatch, "cut_value: assignment length");
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (z[i] != z[j]) s += g.weight(i, j);
  return s;
}

double expected_hyperplane_cut(const SymMatrix& X, const WeightedGraph& g) {
  const int n = g.n();
  if (X.order() != n) throw Error(ErrorKind::DimensionMismatch, "expected_hyperplane_cut: order");
  double s = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) s += g.weight(i, j) * std::acos(std::clamp(X(i, j), -1.0, 1.0));
  return s / std::numbers::pi;
}

CutResult round_hyperplane(const SymMatrix& X, const WeightedGraph& g, std::uint64_t seed, int trials, int threads) {
  const int n = g.n();
  if (X.order() != n) throw Error(ErrorKind::DimensionMismatch, "round_hyperplane: X and graph differ in order");
  if (trials < 1) throw Error(ErrorKind::InvalidArgument, "round_hyperplane: trials must be positive");
  if (threads < 1) throw Error(ErrorKind::InvalidArgument, "round_hyperplane: threads must be positive");
  for (int i = 0; i < n; ++i)
    if (std::abs(X(i, i) - 1.0) > 1e-6) throw Error(ErrorKind::InvalidArgument, "round_hyperplane: diag(X) must be 1");
  Matrix v;
  try {
    v = gram_factor(X, GramMethod::Eigen, 1e-7);
  } catch (const Error& e) {
    throw Error(ErrorKind::FactorizationFailure, std::string("round_hyperplane: ") + e.what());
  }
  const int k = static_cast<int>(v.cols());

  std::vector<double> values(trials);
  auto run = [&](int begin, int end) {
    std::vector<int> z(n);
    Vector r(k);
    for (int t = begin; t < end; ++t) {
      std::mt19937_64 gen(trial_key(seed, static_cast<std::uint64_t>(t)));
      std::normal_distribution<double> normal;
      for (int a = 0; a < k; ++a) r(a) = normal(gen);
      const Vector proj = v * r;
      for (int i = 0; i < n; ++i) z[i] = proj(i) <= 0.0 ? -1 : 1;
      values[t] = cut_value(g, z);
    }
  };
  const int workers = std::min(threads, trials);
  if (workers == 1) {
    run(0, trials);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(run, trials * w / workers, trials * (w + 1) / workers);
    for (auto& th : pool) th.join();
  }

  CutResult out;
  out.trials = trials;
  int best = 0;
  double sum = 0.0;
  for (int t = 0; t < trials; ++t) {
    sum += values[t];
    if (values[t] > values[best]) best = t;
  }
  out.mean_over_trials = sum / trials;
  double ss = 0.0;
  for (double x : values) ss += (x - out.mean_over_trials) * (x - out.mean_over_trials);
  out.std_over_trials = trials > 1 ? std::sqrt(ss / (trials - 1)) : 0.0;

  // Replay the best trial for its assignment.
  std::mt19937_64 gen(trial_key(seed, static_cast<std::uint64_t>(best)));
  std::normal_distribution<double> normal;
  Vector r(k);
  for (int a = 0; a < k; ++a) r(a) = normal(gen);
  const Vector proj = v * r;
  out.assignment.resize(n);
  for (int i = 0; i < n; ++i) out.assignment[i] = proj(i) <= 0.0 ? -1 : 1;
  out.value = cut_value(g, out.assignment);
  out.best_over_trials = out.value;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out.sdp_bound += 0.5 * g.weight(i, j) * (1.0 - X(i, j));
  return out;
}

CutResult goemans_williamson(const WeightedGraph& g, std::uint64_t seed, int trials, int threads,
                             const SolveOptions& opts) {
  const GwSolution s = solve_gw(g, opts);
  CutResult out = round_hyperplane(s.X, g, seed, trials, threads);
  out.sdp_bound = s.bound;
  return out;
}

BruteCut maxcut_bruteforce_cut(const WeightedGraph& g) {
  const int n = g.n();
  if (n > 22) throw Error(ErrorKind::UnsupportedSize, "maxcut_bruteforce: n must be <= 22");
  const Matrix& w = g.weights();
  // Gray-code walk over the 2^(n-1) cuts with the last vertex on side +1.
  std::vector<int> z(n, 1);
  double cur = 0.0;
  BruteCut best{0.0, z};
  const std::uint64_t count = n > 1 ? (std::uint64_t{1} << (n - 1)) : 1;
  for (std::uint64_t step = 1; step < count; ++step) {
    const int v = std::countr_zero(step);
    double delta = 0.0;
    for (int u = 0; u < n; ++u)
      if (u != v) delta += (z[u] == z[v] ? 1.0 : -1.0) * w(v, u);
    z[v] = -z[v];
    cur += delta;
    if (cur > best.value) best = {cur, z};
  }
  best.value = cut_value(g, best.assignment);
  return best;
}

double maxcut_bruteforce(const WeightedGraph& g) { return maxcut_bruteforce_cut(g).value; }

double gw_ratio_function(double alpha) {
  if (!(alpha > 0.0 && alpha <= std::numbers::pi))
    throw Error(ErrorKind::DomainError, "gw_ratio_function: alpha must lie in (0, pi]");
  return 2.0 / std::numbers::pi * alpha / (1.0 - std::cos(alpha));
}

}  // namespace sdpkit
