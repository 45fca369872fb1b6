#pragma once

#include <cstdint>
#include <vector>

#include "sdpkit/graph.hpp"
#include "sdpkit/sdp_solver.hpp"

namespace sdpkit {

// max B (.) X with diag(X) = 1, where B = -W/4; the cut bound is offset + B (.) X.
struct GwSdp {
  DualSdp sdp;
  double offset = 0.0;  // half the total weight
};

GwSdp build_gw_sdp(const WeightedGraph& g);

struct GwSolution {
  double bound = 0.0;
  SymMatrix X;
  SolveReport report;
};

// Solves build_gw_sdp; throws NumericalTrouble when the solver does not reach NearOptimal.
GwSolution solve_gw(const WeightedGraph& g, const SolveOptions& opts = {});

struct CutResult {
  std::vector<int> assignment;  // +1 / -1
  double value = 0.0;
  double sdp_bound = 0.0;  // sum_{i<j} w_ij (1 - X_ij) / 2 at the X that was rounded
  int trials = 0;
  double best_over_trials = 0.0;
  double mean_over_trials = 0.0;
  double std_over_trials = 0.0;  // sample standard deviation of the trial cuts
};

double cut_value(const WeightedGraph& g, const std::vector<int>& z);

// sum_{i<j} w_ij arccos(X_ij) / pi.
double expected_hyperplane_cut(const SymMatrix& X, const WeightedGraph& g);

// Trial t draws its normal vector from a generator keyed by (seed, t), so the result
// does not depend on `threads`. Ties on the best cut go to the lowest trial.
CutResult round_hyperplane(const SymMatrix& X, const WeightedGraph& g, std::uint64_t seed, int trials,
                           int threads = 1);

// solve_gw followed by round_hyperplane.
CutResult goemans_williamson(const WeightedGraph& g, std::uint64_t seed, int trials = 2000, int threads = 1,
                             const SolveOptions& opts = {});

struct BruteCut {
  double value = 0.0;
  std::vector<int> assignment;
};

BruteCut maxcut_bruteforce_cut(const WeightedGraph& g);
double maxcut_bruteforce(const WeightedGraph& g);

// (2 / pi) alpha / (1 - cos alpha) on (0, pi].
double gw_ratio_function(double alpha);

}  // namespace sdpkit
