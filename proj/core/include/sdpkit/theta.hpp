#pragma once

#include <optional>
#include <vector>

#include "sdpkit/graph.hpp"
#include "sdpkit/sdp_solver.hpp"

namespace sdpkit {

// Variables: t (index 0) then one z per edge in Graph::edges() order.
// Zbar = t I + sum_e z_e (E_ij + E_ji) - B has diagonal t - 1 and -1 on non-edges.
PrimalSdp build_theta_primal(const Graph& g);

// max 1 (.) Y  s.t.  trace(Y) = 1,  Y_ij = 0 on edges.
DualSdp build_theta_dual(const Graph& g);

// (n+1) x (n+1) moment form: y00 = 1, y_ij = 0 on edges, y_ii = y_0i; max sum_i y_ii.
DualSdp build_theta_prime(const Graph& g);

struct LambdaValues {
  double lambda_max = 0.0;
  double lambda_ratio = 0.0;
};

// Scales an optimal Y of build_theta_dual into Z with unit diagonal and evaluates
// lambda_max(Z) and 1 - lambda_max(Z - I) / lambda_min(Z - I) (0/0 read as 0).
LambdaValues lambda_formulation_values(const Graph& g, const BlockMatrix& y_opt);

struct OrthoRep {
  std::vector<Vector> vectors;
  double value = 0.0;
};

// u_i = [1; v_i] / sqrt(1 + |v_i|^2) from a Gram factor of Zbar; value = max_i 1 / (u_i^1)^2.
OrthoRep orthonormal_representation(const Graph& g, const SymMatrix& zbar_opt);

// Orthonormal representation of the complement built from an optimal theta-prime
// matrix, rotated so the handle is e_1; value is the leaning sum_i (e_1 . u_i)^2.
OrthoRep leaning_representation(const Graph& g, const SymMatrix& yprime_opt);

// Moment relaxation over subsets of size <= r (r in {1, 2}).
double psi_r(const Graph& g, int r, const SolveOptions& opts = {});

// Fractional chromatic number of `h` (n <= 12): covering LP over its maximal
// independent sets, solved as a diagonal-block SDP.
double fractional_chromatic(const Graph& h, const SolveOptions& opts = {});

int alpha_bruteforce(const Graph& g);
int clique_cover_bruteforce(const Graph& g);

// All maximal independent sets as bitmasks, ascending.
std::vector<std::uint64_t> maximal_stable_sets(const Graph& g);

struct ThetaReport {
  double theta_primal = 0.0;
  double theta_dual = 0.0;
  double theta_prime = 0.0;
  double theta_lambda_max = 0.0;
  double theta_lambda_ratio = 0.0;
  double theta_orthonormal = 0.0;
  double theta_leaning = 0.0;
  int alpha = 0;
  // Only computed for n <= 12.
  std::optional<int> clique_cover;
  std::optional<double> chi_star;  // fractional chromatic number of the complement
};

ThetaReport theta_report(const Graph& g, const SolveOptions& opts = {});

}  // namespace sdpkit
